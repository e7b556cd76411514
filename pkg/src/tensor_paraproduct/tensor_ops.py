"""Tensor Haar coefficients and the four tensor convolution operators.

Operators are orthogonal projections evaluated by separable passes: the
x-direction factor is applied along axis 0, then the y-direction factor
along axis 1.  ``P^j`` replaces each level-``j`` block by its mean and
``Q^j = P^(j+1) - P^j``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .dyadic import UnitGridField
from .errors import DomainError, LevelError, ShapeError
from .wavelet1d import analyze_axis, projection_along, synthesize_axis

FAMILIES = ("eta", "omega_ws", "omega_sw", "alpha")


class OperatorKind(enum.Enum):
    """Which factor (scaling ``P`` or wavelet ``Q``) acts along x and along y."""

    SCALING_SCALING = "PP"
    SCALING_WAVELET = "PQ"
    WAVELET_SCALING = "QP"
    WAVELET_WAVELET = "QQ"

    @property
    def x_factor(self) -> str:
        return self.value[0]

    @property
    def y_factor(self) -> str:
        return self.value[1]


@dataclass(frozen=True, eq=False)
class TensorCoeffPyramid:
    """Tensor coefficients indexed by level pair ``(j, j')``.

    Each family maps ``(j, j')`` to an array of shape ``(2^j, 2^j')``:

    * ``eta``      -- <f, phi^j_k (x) phi^j'_k'>
    * ``omega_ws`` -- <f, psi^j_k (x) phi^j'_k'>   (wavelet in x)
    * ``omega_sw`` -- <f, phi^j_k (x) psi^j'_k'>   (wavelet in y)
    * ``alpha``    -- <f, psi^j_k (x) psi^j'_k'>

    The orthonormal basis subset is ``eta[0,0]``, ``omega_ws[j,0]``,
    ``omega_sw[0,j']`` and all of ``alpha``; synthesis reads only those.
    """

    N: int
    Np: int
    eta: dict = field(default_factory=dict)
    omega_ws: dict = field(default_factory=dict)
    omega_sw: dict = field(default_factory=dict)
    alpha: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.N < 0 or self.Np < 0:
            raise DomainError(f"negative pyramid levels ({self.N}, {self.Np})")
        for name in FAMILIES:
            fam = getattr(self, name)
            for j in range(self.N + 1):
                for jp in range(self.Np + 1):
                    arr = fam.get((j, jp))
                    if arr is None:
                        fam[(j, jp)] = np.zeros((2**j, 2**jp))
                    elif np.shape(arr) != (2**j, 2**jp):
                        raise ShapeError(f"{name}[{j},{jp}] has shape {np.shape(arr)}")
            extra = set(fam) - {(j, jp) for j in range(self.N + 1) for jp in range(self.Np + 1)}
            if extra:
                raise ShapeError(f"{name} has entries outside the pyramid: {sorted(extra)}")

    def family(self, name: str) -> dict:
        if name not in FAMILIES:
            raise KeyError(f"unknown family {name!r}; expected one of {FAMILIES}")
        return getattr(self, name)

    def level_pairs(self):
        return [(j, jp) for j in range(self.N + 1) for jp in range(self.Np + 1)]

    def energy(self) -> float:
        """Squared L2 norm carried by the orthonormal basis subset."""
        total = float(self.eta[(0, 0)][0, 0]) ** 2
        for j in range(self.N + 1):
            total += float(np.sum(self.omega_ws[(j, 0)] ** 2))
        for jp in range(self.Np + 1):
            total += float(np.sum(self.omega_sw[(0, jp)] ** 2))
        for key in self.level_pairs():
            total += float(np.sum(self.alpha[key] ** 2))
        return total


def _check_levels(field_: UnitGridField, N: int, Np: int) -> None:
    L, Lp = field_.levels
    if N < 0 or Np < 0:
        raise LevelError(f"negative levels ({N}, {Np})")
    if N + 1 > L or Np + 1 > Lp:
        raise LevelError(f"levels ({N}, {Np}) need a grid of at least ({N + 1}, {Np + 1}), "
                         f"field has ({L}, {Lp})")


def tensor_analyze(field_: UnitGridField, N: int, Np: int) -> TensorCoeffPyramid:
    """All four coefficient families for ``j <= N``, ``j' <= N'``.

    Rows are transformed first; each x-level result is then transformed
    along y.  Inner products are exact for the piecewise-constant field.
    """
    _check_levels(field_, N, Np)
    cx, dx = analyze_axis(field_.values, 0, N)
    fams = {name: {} for name in FAMILIES}
    for j in range(N + 1):
        cy, dy = analyze_axis(cx[j], 1, Np)
        wy, ay = analyze_axis(dx[j], 1, Np)
        for jp in range(Np + 1):
            fams["eta"][(j, jp)] = cy[jp]
            fams["omega_sw"][(j, jp)] = dy[jp]
            fams["omega_ws"][(j, jp)] = wy[jp]
            fams["alpha"][(j, jp)] = ay[jp]
    return TensorCoeffPyramid(N, Np, **fams)


def synthesize_basis(eta00: float, omega_ws0, omega_sw0, alpha) -> np.ndarray:
    """Cell values at levels ``(N+1, N'+1)`` from orthonormal-basis coefficients.

    ``omega_ws0[j]`` has shape ``(2^j, 1)``, ``omega_sw0[j']`` shape
    ``(1, 2^j')`` and ``alpha[j][j']`` shape ``(2^j, 2^j')``.
    """
    N = len(omega_ws0) - 1
    # y-synthesis of the x-scaling row, then of every x-detail row
    row0 = synthesize_axis(np.array([[eta00]], dtype=np.float64), omega_sw0, 1)
    x_details = [synthesize_axis(omega_ws0[j], alpha[j], 1) for j in range(N + 1)]
    return synthesize_axis(row0, x_details, 0)


def tensor_synthesize(pyramid: TensorCoeffPyramid, L: int, Lp: int) -> UnitGridField:
    """Rebuild a field on a ``2^L x 2^L'`` grid from ``pyramid``.

    For ``L = N+1, L' = N'+1`` this inverts :func:`tensor_analyze`; on finer
    grids the result is ``P^(N+1) P'^(N'+1) f`` represented at that resolution.
    """
    N, Np = pyramid.N, pyramid.Np
    if L < N + 1 or Lp < Np + 1:
        raise ShapeError(f"pyramid levels ({N}, {Np}) need a grid of at least "
                         f"({N + 1}, {Np + 1}), asked for ({L}, {Lp})")
    values = synthesize_basis(
        float(pyramid.eta[(0, 0)][0, 0]),
        [pyramid.omega_ws[(j, 0)] for j in range(N + 1)],
        [pyramid.omega_sw[(0, jp)] for jp in range(Np + 1)],
        [[pyramid.alpha[(j, jp)] for jp in range(Np + 1)] for j in range(N + 1)],
    )
    return UnitGridField(values).refine(L, Lp)


def _factor(values: np.ndarray, kind: str, j: int, axis: int) -> np.ndarray:
    if kind == "P":
        return projection_along(values, j, axis)
    return projection_along(values, j + 1, axis) - projection_along(values, j, axis)


def apply_operator(field_: UnitGridField, j: int, jp: int, kind: OperatorKind) -> UnitGridField:
    """Apply ``P^j P'^j'``, ``P^j Q'^j'``, ``Q^j P'^j'`` or ``Q^j Q'^j'``.

    The result has the resolution of the input.
    """
    L, Lp = field_.levels
    kind = OperatorKind(kind)
    need_x = j + (kind.x_factor == "Q")
    need_y = jp + (kind.y_factor == "Q")
    if j < 0 or jp < 0 or need_x > L or need_y > Lp:
        raise LevelError(f"{kind.value} at ({j}, {jp}) exceeds field levels ({L}, {Lp})")
    out = _factor(field_.values, kind.x_factor, j, 0)
    out = _factor(out, kind.y_factor, jp, 1)
    return UnitGridField(out)


def apply_operator_yx(field_: UnitGridField, j: int, jp: int, kind: OperatorKind) -> UnitGridField:
    """Same operator as :func:`apply_operator` with the y pass done first."""
    kind = OperatorKind(kind)
    out = _factor(field_.values, kind.y_factor, jp, 1)
    out = _factor(out, kind.x_factor, j, 0)
    return UnitGridField(out)
