"""Dyadic intervals and rectangles on the unit square, the dyadic distance,
and the piecewise-constant field type consumed by the rest of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, LevelError, SamplingError, ShapeError

MAX_DEPTH = 52


@dataclass(frozen=True)
class DyadicInterval:
    """The half-open interval ``[k 2^-j, (k+1) 2^-j)``."""

    level: int
    index: int

    def __post_init__(self):
        if self.level < 0:
            raise DomainError(f"negative level {self.level}")
        if not 0 <= self.index < 2**self.level:
            raise DomainError(f"index {self.index} outside [0, 2^{self.level})")

    @property
    def length(self) -> float:
        return 2.0 ** (-self.level)

    @property
    def left(self) -> float:
        return self.index * self.length

    @property
    def right(self) -> float:
        return (self.index + 1) * self.length

    def contains(self, x: float) -> bool:
        return self.left <= x < self.right

    def contains_interval(self, other: DyadicInterval) -> bool:
        if other.level < self.level:
            return False
        return other.index >> (other.level - self.level) == self.index

    def parent(self) -> DyadicInterval:
        if self.level == 0:
            raise DomainError("the unit interval has no parent")
        return DyadicInterval(self.level - 1, self.index // 2)

    def children(self) -> tuple[DyadicInterval, DyadicInterval]:
        return (DyadicInterval(self.level + 1, 2 * self.index),
                DyadicInterval(self.level + 1, 2 * self.index + 1))


@dataclass(frozen=True)
class DyadicRectangle:
    x_interval: DyadicInterval
    y_interval: DyadicInterval

    @property
    def levels(self) -> tuple[int, int]:
        return self.x_interval.level, self.y_interval.level

    @property
    def area(self) -> float:
        return 2.0 ** (-(self.x_interval.level + self.y_interval.level))

    def contains(self, x: float, y: float) -> bool:
        return self.x_interval.contains(x) and self.y_interval.contains(y)


def _check_unit(x: float, name: str = "x") -> None:
    if not (0.0 <= x < 1.0):
        raise DomainError(f"{name}={x!r} is outside [0, 1)")


def interval_of(x: float, j: int) -> DyadicInterval:
    """Return the level-``j`` dyadic interval containing ``x``."""
    _check_unit(x)
    if j < 0:
        raise DomainError(f"negative level {j}")
    return DyadicInterval(j, math.floor(x * 2.0**j))


def _common_depth(x: float, y: float, max_depth: int) -> int:
    depth = 0
    while depth < max_depth:
        scale = 2.0 ** (depth + 1)
        if math.floor(x * scale) != math.floor(y * scale):
            break
        depth += 1
    return depth


def dyadic_distance(x: float, y: float, max_depth: int = MAX_DEPTH) -> float:
    """Length of the smallest dyadic interval holding both points.

    Equal points return exactly 0.  Distinct points that still share an
    interval at ``max_depth`` return ``2**-max_depth``.
    """
    _check_unit(x, "x")
    _check_unit(y, "y")
    if x == y:
        return 0.0
    return 2.0 ** (-_common_depth(x, y, max_depth))


def smallest_containing_rectangle(x1: float, x2: float, y1: float, y2: float,
                                  max_depth: int = MAX_DEPTH) -> DyadicRectangle:
    """Deepest dyadic rectangle containing the four corners
    ``(x1, y1), (x1, y2), (x2, y1), (x2, y2)``.

    Equal coordinates on an axis give an interval at ``max_depth``.
    """
    for name, v in (("x1", x1), ("x2", x2), ("y1", y1), ("y2", y2)):
        _check_unit(v, name)
    jx = _common_depth(x1, x2, max_depth)
    jy = _common_depth(y1, y2, max_depth)
    return DyadicRectangle(interval_of(x1, jx), interval_of(y1, jy))


def cell_dyadic_distance(i1, i2, level: int) -> np.ndarray:
    """Vectorised dyadic distance between centers of finest cells ``i1``, ``i2``
    on a grid with ``2**level`` cells.  Equal indices give 0.
    """
    i1 = np.asarray(i1, dtype=np.int64)
    i2 = np.asarray(i2, dtype=np.int64)
    diff = np.bitwise_xor(i1, i2)
    # frexp exponent of a positive integer is its bit length
    _, bits = np.frexp(diff.astype(np.float64))
    out = np.ldexp(1.0, bits - level)
    return np.where(diff == 0, 0.0, out)


def _log2_exact(n: int, what: str) -> int:
    if n < 1 or n & (n - 1):
        raise ShapeError(f"{what} {n} is not a power of two")
    return n.bit_length() - 1


def pair_mean(a: np.ndarray, axis: int) -> np.ndarray:
    """Average adjacent pairs along ``axis``, halving its length."""
    a = np.moveaxis(a, axis, 0)
    out = (a[0::2] + a[1::2]) / 2.0
    return np.moveaxis(out, 0, axis)


class UnitGridField:
    """A field on ``[0,1]^2`` that is constant on each finest dyadic cell.

    ``values[r, c]`` is the value on ``I^L_r x I^L'_c``; axis 0 is x, axis 1 is y.
    The stored array is a read-only float64 copy.
    """

    __slots__ = ("_values", "_levels")

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 2:
            raise ShapeError(f"expected a 2-D array, got shape {arr.shape}")
        L = _log2_exact(arr.shape[0], "row count")
        Lp = _log2_exact(arr.shape[1], "column count")
        if not np.all(np.isfinite(arr)):
            r, c = np.argwhere(~np.isfinite(arr))[0]
            raise SamplingError(f"non-finite value at cell ({r}, {c})")
        arr.setflags(write=False)
        self._values = arr
        self._levels = (L, Lp)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def levels(self) -> tuple[int, int]:
        return self._levels

    @property
    def shape(self) -> tuple[int, int]:
        return self._values.shape

    def __repr__(self):
        L, Lp = self._levels
        return f"UnitGridField(L={L}, L'={Lp})"

    def __eq__(self, other):
        if not isinstance(other, UnitGridField):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._values, other._values))

    __hash__ = None

    def at(self, x: float, y: float) -> float:
        """Value at the point ``(x, y)`` of ``[0,1)^2``."""
        L, Lp = self._levels
        return float(self._values[interval_of(x, L).index, interval_of(y, Lp).index])

    def block_means(self, j: int, jp: int) -> np.ndarray:
        """Means over every ``I^j_k x I^j'_k'``, shape ``(2^j, 2^j')``.

        Computed by pairwise cascade (x first, then y), so a block that is
        already constant reproduces its value exactly.
        """
        L, Lp = self._levels
        if not (0 <= j <= L and 0 <= jp <= Lp):
            raise LevelError(f"levels ({j}, {jp}) exceed field levels ({L}, {Lp})")
        out = self._values
        for _ in range(L - j):
            out = pair_mean(out, 0)
        for _ in range(Lp - jp):
            out = pair_mean(out, 1)
        return out

    def refine(self, L: int, Lp: int) -> UnitGridField:
        """The same function represented on a finer grid."""
        return UnitGridField(expand(self._values, L, Lp))

    def __add__(self, other):
        return UnitGridField(self._values + _as_array(other))

    def __sub__(self, other):
        return UnitGridField(self._values - _as_array(other))

    def __mul__(self, other):
        return UnitGridField(self._values * _as_array(other))

    __rmul__ = __mul__

    def __neg__(self):
        return UnitGridField(-self._values)


def _as_array(other):
    return other.values if isinstance(other, UnitGridField) else other


def expand(coarse: np.ndarray, L: int, Lp: int) -> np.ndarray:
    """Repeat a ``(2^j, 2^j')`` block array up to ``(2^L, 2^L')``."""
    j = _log2_exact(coarse.shape[0], "row count")
    jp = _log2_exact(coarse.shape[1], "column count")
    if j > L or jp > Lp:
        raise LevelError(f"cannot expand levels ({j}, {jp}) to coarser ({L}, {Lp})")
    return np.repeat(np.repeat(coarse, 2 ** (L - j), axis=0), 2 ** (Lp - jp), axis=1)


def cell_centers(L: int) -> np.ndarray:
    return (np.arange(2**L) + 0.5) * 2.0 ** (-L)


def sample_grid(scalar_fn: Callable, L: int, Lp: int) -> UnitGridField:
    """Evaluate ``scalar_fn(x, y)`` at every cell center of a ``2^L x 2^L'`` grid.

    The function is first called once with broadcast coordinate arrays; if it
    does not accept arrays it is evaluated cell by cell.
    """
    if L < 0 or Lp < 0:
        raise DomainError(f"negative grid level ({L}, {Lp})")
    X, Y = np.meshgrid(cell_centers(L), cell_centers(Lp), indexing="ij")
    try:
        with np.errstate(all="ignore"):
            vals = np.asarray(scalar_fn(X, Y), dtype=np.float64)
        if vals.shape != X.shape:
            vals = np.broadcast_to(vals, X.shape).copy()
    except (TypeError, ValueError):
        vals = np.array([[float(scalar_fn(float(x), float(y))) for x, y in zip(rx, ry)]
                         for rx, ry in zip(X, Y)])
    bad = ~np.isfinite(vals)
    if bad.any():
        r, c = np.argwhere(bad)[0]
        raise SamplingError(
            f"non-finite sample {vals[r, c]!r} at cell ({r}, {c}), "
            f"center ({X[r, c]:.6g}, {Y[r, c]:.6g})")
    return UnitGridField(vals)
