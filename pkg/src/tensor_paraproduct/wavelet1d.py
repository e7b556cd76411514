"""One-dimensional Haar multiresolution analysis on [0, 1].

Basis functions are L2-normalised on the unit interval:
``phi^j_k = 2^(j/2) 1_{I^j_k}`` and ``psi^j_k = 2^(j/2) (1_left - 1_right)``.
Input vectors are piecewise-constant functions sampled on the finest cells,
so every inner product below is an exact finite sum.

The axis-generic helpers (``analyze_axis``/``synthesize_axis``) are reused by
the tensor transforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic import _log2_exact, pair_mean
from .errors import LevelError, ShapeError


def _pair_half_diff(a: np.ndarray, axis: int) -> np.ndarray:
    a = np.moveaxis(a, axis, 0)
    out = (a[0::2] - a[1::2]) / 2.0
    return np.moveaxis(out, 0, axis)


def _interleave(even: np.ndarray, odd: np.ndarray, axis: int) -> np.ndarray:
    even = np.moveaxis(even, axis, 0)
    odd = np.moveaxis(odd, axis, 0)
    out = np.empty((2 * even.shape[0],) + even.shape[1:])
    out[0::2] = even
    out[1::2] = odd
    return np.moveaxis(out, 0, axis)


def analyze_axis(values: np.ndarray, axis: int, max_level: int | None = None):
    """Haar cascade along one axis.

    Returns ``(scaling, detail)``, lists indexed by level ``j = 0..max_level``
    whose entries have length ``2^j`` along ``axis``.
    """
    values = np.asarray(values, dtype=np.float64)
    L = _log2_exact(values.shape[axis], "axis length")
    if L == 0:
        raise ShapeError("need at least two cells to form detail coefficients")
    if max_level is None:
        max_level = L - 1
    if not 0 <= max_level <= L - 1:
        raise LevelError(f"max_level {max_level} needs at least {max_level + 1} levels, have {L}")

    means = values
    for _ in range(L - max_level - 1):
        means = pair_mean(means, axis)
    scaling, detail = [], []
    for j in range(max_level, -1, -1):
        norm = 2.0 ** (-j / 2)
        detail.append(norm * _pair_half_diff(means, axis))
        means = pair_mean(means, axis)
        scaling.append(norm * means)
    return scaling[::-1], detail[::-1]


def synthesize_axis(c0: np.ndarray, details, axis: int) -> np.ndarray:
    """Inverse of :func:`analyze_axis`: rebuild level ``len(details)`` cell values
    from the level-0 scaling coefficient and the detail coefficients."""
    means = np.asarray(c0, dtype=np.float64)
    for j, d in enumerate(details):
        dd = 2.0 ** (j / 2) * np.asarray(d, dtype=np.float64)
        if dd.shape != means.shape:
            raise ShapeError(f"detail level {j} has shape {dd.shape}, expected {means.shape}")
        means = _interleave(means + dd, means - dd, axis)
    return means


@dataclass(frozen=True, eq=False)
class CoeffPyramid1D:
    """Scaling ``c^j_k`` and detail ``d^j_k`` coefficients for ``j = 0..max_level``."""

    max_level: int
    scaling: tuple
    detail: tuple

    def __post_init__(self):
        for name, fam in (("scaling", self.scaling), ("detail", self.detail)):
            if len(fam) != self.max_level + 1:
                raise ShapeError(f"{name} has {len(fam)} levels, expected {self.max_level + 1}")
            for j, arr in enumerate(fam):
                if np.shape(arr) != (2**j,):
                    raise ShapeError(f"{name}[{j}] has shape {np.shape(arr)}, expected ({2**j},)")

    def energy(self) -> float:
        """``(c^0_0)^2 + sum d^2``; equals the squared L2 norm of the input."""
        total = float(self.scaling[0][0]) ** 2
        for d in self.detail:
            total += float(np.dot(d, d))
        return total


def analyze_1d(values, max_level: int | None = None) -> CoeffPyramid1D:
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise ShapeError(f"expected a vector, got shape {values.shape}")
    scaling, detail = analyze_axis(values, 0, max_level)
    return CoeffPyramid1D(len(detail) - 1, tuple(scaling), tuple(detail))


def synthesize_1d(pyramid: CoeffPyramid1D, L: int) -> np.ndarray:
    if L != pyramid.max_level + 1:
        raise ShapeError(f"pyramid with max level {pyramid.max_level} synthesises at "
                         f"level {pyramid.max_level + 1}, not {L}")
    return synthesize_axis(pyramid.scaling[0], pyramid.detail, 0)


def projection_along(values: np.ndarray, j: int, axis: int) -> np.ndarray:
    L = _log2_exact(values.shape[axis], "axis length")
    if not 0 <= j <= L:
        raise LevelError(f"level {j} outside [0, {L}]")
    means = values
    for _ in range(L - j):
        means = pair_mean(means, axis)
    return np.repeat(means, 2 ** (L - j), axis=axis)


def project_P(values, j: int) -> np.ndarray:
    """Orthogonal projection onto functions constant on level-``j`` intervals."""
    values = np.asarray(values, dtype=np.float64)
    return projection_along(values, j, 0)


def detail_Q(values, j: int) -> np.ndarray:
    """``P^(j+1) - P^j``: the level-``j`` oscillation of ``values``."""
    values = np.asarray(values, dtype=np.float64)
    L = _log2_exact(values.shape[0], "length")
    if not 0 <= j <= L - 1:
        raise LevelError(f"detail level {j} needs j + 1 <= {L}")
    return projection_along(values, j + 1, 0) - projection_along(values, j, 0)
