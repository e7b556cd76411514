"""Multiscale tensor paraproduct decomposition of nonlinear compositions ``A(f)``
on the unit square, with Haar tensor analysis and regularity diagnostics."""

from .dyadic import (DyadicInterval, DyadicRectangle, UnitGridField, dyadic_distance,
                     interval_of, sample_grid, smallest_containing_rectangle)
from .errors import (DomainError, EstimateUndefinedError, EvaluationError, LevelError,
                     ParaproductError, SamplingError, ShapeError)
from .fields import RingFieldSpec, decay_field, generate_ring
from .paraproduct import (Decomposition, Nonlinearity, ScaleRange, bilinear_interp_h,
                          decompose, exp_nonlinearity, linear_nonlinearity,
                          paraproduct_approx, residual_integral_form, residual_report,
                          square_nonlinearity, table_nonlinearity, telescoping_mixed_sum)
from .regularity import (DecayReport, decay_report, direct_mixed_holder_quotients,
                         estimate_alpha, mixed_holder_norm)
from .tensor_ops import OperatorKind, TensorCoeffPyramid, apply_operator, tensor_analyze, tensor_synthesize
from .wavelet1d import CoeffPyramid1D, analyze_1d, detail_Q, project_P, synthesize_1d

__version__ = "0.1.0"
