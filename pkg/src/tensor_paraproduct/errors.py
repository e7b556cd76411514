"""Exception hierarchy shared by every module of the package."""


class ParaproductError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ParaproductError, ValueError):
    """An argument lies outside the domain of the operation."""


class ShapeError(ParaproductError, ValueError):
    """Array shape is not compatible with a dyadic grid or pyramid."""


class LevelError(ParaproductError, ValueError):
    """A requested scale exceeds what the field resolution supports."""


class SamplingError(ParaproductError, ValueError):
    """A generator produced a non-finite value at some grid cell."""


class EvaluationError(ParaproductError, ValueError):
    """A nonlinearity produced a non-finite value or left its domain."""


class EstimateUndefinedError(ParaproductError, ValueError):
    """A regularity estimate was requested from data that cannot support it."""
