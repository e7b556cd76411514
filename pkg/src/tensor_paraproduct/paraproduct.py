"""Multiscale tensor paraproduct of a nonlinear composition ``A(f)``.

For scales ``j <= N``, ``j' <= N'`` the approximation is::

    sum_{j,j'} A'(PP f) QQ f + A''(PP f) QP f PQ f

with ``PP = P^j P'^j'``, ``QQ = Q^j Q'^j'``, ``QP = Q^j P'^j'``,
``PQ = P^j Q'^j'``.  The residual is the exact difference ``A(f) - approx``.

Every per-scale quantity is constant on ``I^(j+1) x I^(j'+1)`` blocks, so it
is computed on that coarse grid and only expanded when accumulated.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dyadic import UnitGridField, expand, pair_mean
from .errors import DomainError, EvaluationError, LevelError
from .regularity import (DecayReport, anchored_constant, check_decay_bound, decay_report,
                         mixed_holder_norm, tightest_constant)
from .tensor_ops import tensor_analyze

DEFAULT_QUAD_ORDER = 8


@dataclass(frozen=True)
class Nonlinearity:
    """A C^2 scalar map given by vectorised evaluators for A, A' and A''.

    ``domain`` is the closed interval on which the evaluators are valid; field
    ranges are checked against it before evaluation.
    """

    name: str
    value: Callable
    d1: Callable
    d2: Callable
    domain: tuple = (-math.inf, math.inf)

    def evaluate(self, u, derivative: int = 0) -> np.ndarray:
        if derivative not in (0, 1, 2):
            raise DomainError(f"derivative must be 0, 1 or 2, got {derivative}")
        u = np.asarray(u, dtype=np.float64)
        lo, hi = self.domain
        if u.size and (u.min() < lo or u.max() > hi):
            raise EvaluationError(f"{self.name}: data range [{u.min():.6g}, {u.max():.6g}] "
                                  f"leaves the domain [{lo}, {hi}]")
        fn = (self.value, self.d1, self.d2)[derivative]
        with np.errstate(all="ignore"):
            out = np.asarray(fn(u), dtype=np.float64)
        out = np.broadcast_to(out, u.shape)
        bad = ~np.isfinite(out)
        if bad.any():
            idx = tuple(int(i) for i in np.argwhere(bad)[0])
            raise EvaluationError(f"{self.name}: non-finite derivative-{derivative} value "
                                  f"at cell {idx} (input {u[idx]!r})")
        return np.array(out)


def exp_nonlinearity(rate: float = 0.2) -> Nonlinearity:
    """``A(u) = exp(-rate u)``."""
    return Nonlinearity(
        f"exp(-{rate:g}u)",
        lambda u: np.exp(-rate * u),
        lambda u: -rate * np.exp(-rate * u),
        lambda u: rate * rate * np.exp(-rate * u),
    )


def linear_nonlinearity(c: float = 1.0) -> Nonlinearity:
    return Nonlinearity(
        "identity" if c == 1.0 else f"{c:g}u",
        lambda u: c * u,
        lambda u: np.full_like(u, c),
        lambda u: np.zeros_like(u),
    )


def square_nonlinearity() -> Nonlinearity:
    return Nonlinearity("square", lambda u: u * u, lambda u: 2.0 * u, lambda u: np.full_like(u, 2.0))


def table_nonlinearity(u, a, da, d2a, name: str = "table") -> Nonlinearity:
    """Piecewise-linear interpolation of tabulated A, A', A'' on sorted nodes ``u``.

    The domain is the node range; nothing is extrapolated.
    """
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1 or len(u) < 2 or np.any(np.diff(u) <= 0):
        raise DomainError("table nodes must be a strictly increasing vector of length >= 2")
    cols = [np.asarray(c, dtype=np.float64) for c in (a, da, d2a)]
    if any(c.shape != u.shape for c in cols):
        raise DomainError("table columns must match the node count")
    a, da, d2a = cols
    return Nonlinearity(name, lambda x: np.interp(x, u, a), lambda x: np.interp(x, u, da),
                        lambda x: np.interp(x, u, d2a), (float(u[0]), float(u[-1])))


def load_table_nonlinearity(path) -> Nonlinearity:
    """Read a CSV with header ``u,A,dA,d2A``."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    try:
        cols = {k: [float(r[k]) for r in rows] for k in ("u", "A", "dA", "d2A")}
    except KeyError as exc:
        raise DomainError(f"{path}: missing column {exc}") from None
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{path}: {exc}") from None
    return table_nonlinearity(cols["u"], cols["A"], cols["dA"], cols["d2A"], name=f"table:{path}")


NONLINEARITIES = {
    "exp02": exp_nonlinearity,
    "identity": linear_nonlinearity,
    "square": square_nonlinearity,
}


def evaluate_nonlinearity(A: Nonlinearity, field_: UnitGridField, derivative: int = 0) -> UnitGridField:
    return UnitGridField(A.evaluate(field_.values, derivative))


@dataclass(frozen=True)
class ScaleRange:
    N: int
    Np: int

    def __post_init__(self):
        if self.N < 0 or self.Np < 0:
            raise LevelError(f"negative scales ({self.N}, {self.Np})")

    def check(self, field_: UnitGridField) -> None:
        L, Lp = field_.levels
        if self.N + 1 > L or self.Np + 1 > Lp:
            raise LevelError(f"scales ({self.N}, {self.Np}) need a grid of at least "
                             f"({self.N + 1}, {self.Np + 1}); field has ({L}, {Lp})")

    def pairs(self):
        """Level pairs in ascending lexicographic order."""
        return [(j, jp) for j in range(self.N + 1) for jp in range(self.Np + 1)]


class _Neumaier:
    """Elementwise compensated summation of equally shaped arrays."""

    def __init__(self, shape):
        self.total = np.zeros(shape)
        self.comp = np.zeros(shape)

    def add(self, x: np.ndarray) -> None:
        t = self.total + x
        big = np.abs(self.total) >= np.abs(x)
        self.comp += np.where(big, (self.total - t) + x, (x - t) + self.total)
        self.total = t

    def result(self) -> np.ndarray:
        return self.total + self.comp


class _MeanLadder:
    """Block means ``M[j, j']`` of a field for all ``j <= jmax``, ``j' <= jpmax``."""

    def __init__(self, field_: UnitGridField, jmax: int, jpmax: int):
        L, Lp = field_.levels
        by_x = {L: field_.values}
        for j in range(L - 1, -1, -1):
            by_x[j] = pair_mean(by_x[j + 1], 0)
        self._m = {}
        for j in range(jmax + 1):
            col = {Lp: by_x[j]}
            for jp in range(Lp - 1, -1, -1):
                col[jp] = pair_mean(col[jp + 1], 1)
            for jp in range(jpmax + 1):
                self._m[(j, jp)] = col[jp]

    def __call__(self, j: int, jp: int) -> np.ndarray:
        return self._m[(j, jp)]


@dataclass
class ScaleBlocks:
    """The four scaling projections around ``(j, j')`` and the derived
    wavelet parts, all on the ``(j+1, j'+1)`` grid."""

    j: int
    jp: int
    p00: np.ndarray
    p10: np.ndarray
    p01: np.ndarray
    p11: np.ndarray

    @property
    def qq(self) -> np.ndarray:
        return (self.p11 - self.p01) - (self.p10 - self.p00)

    @property
    def qp(self) -> np.ndarray:
        return self.p10 - self.p00

    @property
    def pq(self) -> np.ndarray:
        return self.p01 - self.p00


def _scale_blocks(ladder: _MeanLadder, j: int, jp: int) -> ScaleBlocks:
    up = lambda a: expand(a, j + 1, jp + 1)
    return ScaleBlocks(j, jp, up(ladder(j, jp)), up(ladder(j + 1, jp)),
                       up(ladder(j, jp + 1)), ladder(j + 1, jp + 1))


def scale_blocks(field_: UnitGridField, j: int, jp: int) -> ScaleBlocks:
    """Coarse-grid ``P^a P'^b f`` for ``a in {j, j+1}``, ``b in {j', j'+1}``."""
    ScaleRange(j, jp).check(field_)
    return _scale_blocks(_MeanLadder(field_, j + 1, jp + 1), j, jp)


def paraproduct_approx(field_: UnitGridField, A: Nonlinearity, scales: ScaleRange):
    """Approximation field plus per-scale first- and second-order terms.

    Terms are returned as dicts keyed by ``(j, j')`` holding fields on the
    ``(j+1, j'+1)`` grid.
    """
    scales.check(field_)
    L, Lp = field_.levels
    A.evaluate([field_.values.min(), field_.values.max()])
    ladder = _MeanLadder(field_, scales.N + 1, scales.Np + 1)
    acc = _Neumaier(field_.shape)
    first, second = {}, {}
    for j, jp in scales.pairs():
        b = _scale_blocks(ladder, j, jp)
        t1 = A.evaluate(b.p00, 1) * b.qq
        t2 = A.evaluate(b.p00, 2) * b.qp * b.pq
        first[(j, jp)] = UnitGridField(t1)
        second[(j, jp)] = UnitGridField(t2)
        acc.add(expand(t1, L, Lp))
        acc.add(expand(t2, L, Lp))
    return UnitGridField(acc.result()), first, second


@dataclass
class TelescopeResult:
    """Double mixed sum, its four-corner collapse and the corners themselves.

    ``corners`` maps a level pair ``(a, b)`` to ``A(P^a P'^b f)`` on the
    ``(a, b)`` grid, for ``a in {0, N+1}`` and ``b in {0, N'+1}``.
    """

    total: UnitGridField
    collapse: UnitGridField
    corners: dict

    @property
    def max_abs_error(self) -> float:
        return float(np.max(np.abs(self.total.values - self.collapse.values)))


def telescoping_mixed_sum(field_: UnitGridField, A: Nonlinearity, scales: ScaleRange) -> TelescopeResult:
    scales.check(field_)
    L, Lp = field_.levels
    N1, Np1 = scales.N + 1, scales.Np + 1
    ladder = _MeanLadder(field_, N1, Np1)
    acc = _Neumaier(field_.shape)
    for j, jp in scales.pairs():
        b = _scale_blocks(ladder, j, jp)
        a11, a01 = A.evaluate(b.p11), A.evaluate(b.p01)
        a10, a00 = A.evaluate(b.p10), A.evaluate(b.p00)
        acc.add(expand((a11 - a01) - (a10 - a00), L, Lp))
    corners = {key: A.evaluate(ladder(*key)) for key in ((N1, Np1), (0, Np1), (N1, 0), (0, 0))}
    full = {key: expand(v, L, Lp) for key, v in corners.items()}
    collapse = (full[(N1, Np1)] - full[(0, Np1)]) - (full[(N1, 0)] - full[(0, 0)])
    return TelescopeResult(UnitGridField(acc.result()), UnitGridField(collapse),
                           {k: UnitGridField(v) for k, v in corners.items()})


def bilinear_interp_h(field_: UnitGridField, j: int, jp: int, mu: float, omega: float) -> UnitGridField:
    """Bilinear interpolation between the four scaling projections around ``(j, j')``.

    ``omega`` moves the x-scale from ``j`` to ``j+1`` and ``mu`` the y-scale
    from ``j'`` to ``j'+1``; ``P^j P'^j' f + h`` hits each corner projection
    at ``(mu, omega) in {0, 1}^2``.
    """
    for name, t in (("mu", mu), ("omega", omega)):
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"{name}={t!r} outside [0, 1]")
    b = scale_blocks(field_, j, jp)
    lower = b.p00 + omega * (b.p10 - b.p00)
    upper = b.p01 + omega * (b.p11 - b.p01)
    h = omega * (b.p10 - b.p00) + mu * (upper - lower)
    L, Lp = field_.levels
    return UnitGridField(expand(h, L, Lp))


def _unit_gauss_legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def residual_integral_form(field_: UnitGridField, A: Nonlinearity, scales: ScaleRange,
                           quad_order: int = DEFAULT_QUAD_ORDER) -> UnitGridField:
    """Quadrature evaluation of the (mu, omega) integral form of the residual.

    Per scale the integrand is::

        A'(PP + h) v1 + A''(PP + h) v2 - A'(PP) v1 - A''(PP) v2~

    with ``v1 = QQ``, ``v2 = (PQ + omega QQ)(QP + mu QQ)``, ``v2~ = QP PQ``.
    This is a cross-check only; it equals the telescoped sum minus the
    approximation up to quadrature error.
    """
    if quad_order < 2:
        raise DomainError(f"quad_order must be >= 2, got {quad_order}")
    scales.check(field_)
    L, Lp = field_.levels
    nodes, weights = _unit_gauss_legendre(quad_order)
    ladder = _MeanLadder(field_, scales.N + 1, scales.Np + 1)
    acc = _Neumaier(field_.shape)
    for j, jp in scales.pairs():
        b = _scale_blocks(ladder, j, jp)
        qq, qp, pq = b.qq, b.qp, b.pq
        integral = np.zeros_like(qq)
        for om, w_om in zip(nodes, weights):
            for mu, w_mu in zip(nodes, weights):
                g = b.p00 + om * qp + mu * (pq + om * qq)
                v2 = (pq + om * qq) * (qp + mu * qq)
                integral += (w_om * w_mu) * (A.evaluate(g, 1) * qq + A.evaluate(g, 2) * v2)
        integral -= A.evaluate(b.p00, 1) * qq + A.evaluate(b.p00, 2) * qp * pq
        acc.add(expand(integral, L, Lp))
    return UnitGridField(acc.result())


@dataclass
class Decomposition:
    """``A(f) = approx + residual`` with the per-scale pieces that built it.

    ``first_order[(j, j')]`` is ``A'(PP f) QQ f`` and ``second_order[(j, j')]``
    is ``A''(PP f) QP f PQ f``, each on the ``(j+1, j'+1)`` grid.
    ``boundary`` holds ``A(P^a P'^b f)`` for the four corner level pairs of the
    telescoped sum, and ``remainder_sup`` is
    ``max |A(f) - A(P^(N+1) P'^(N'+1) f)|``.
    """

    field: UnitGridField
    nonlinearity: Nonlinearity
    scales: ScaleRange
    composed: UnitGridField
    approx: UnitGridField
    residual: UnitGridField
    first_order: dict
    second_order: dict
    boundary: dict
    remainder_sup: float

    @property
    def split_error(self) -> float:
        return float(np.max(np.abs(self.approx.values + self.residual.values
                                   - self.composed.values)))


def decompose(field_: UnitGridField, A: Nonlinearity, scales: ScaleRange) -> Decomposition:
    composed = evaluate_nonlinearity(A, field_, 0)
    approx, first, second = paraproduct_approx(field_, A, scales)
    residual = UnitGridField(composed.values - approx.values)
    N1, Np1 = scales.N + 1, scales.Np + 1
    L, Lp = field_.levels
    ladder = _MeanLadder(field_, N1, Np1)
    boundary = {key: UnitGridField(A.evaluate(ladder(*key)))
                for key in ((N1, Np1), (0, Np1), (N1, 0), (0, 0))}
    remainder = float(np.max(np.abs(composed.values - expand(boundary[(N1, Np1)].values, L, Lp))))
    return Decomposition(field_, A, scales, composed, approx, residual, first, second,
                         boundary, remainder)


@dataclass
class ResidualReport:
    """Decay statistics of the residual and its norm relative to the input.

    Both pyramids are truncated at the decomposition scales ``(N, N')``.
    ``bound_checks`` maps each rate ``2 alpha + 1/2`` and ``2 alpha + 1`` to a
    check whose constant is anchored at the coarsest nonzero diagonal.
    """

    alpha: float
    decay: DecayReport
    input_decay: DecayReport
    linf: float
    bound_checks: dict
    tight_constants: dict
    residual_norm: float
    input_norm: float
    ratio: float
    ratio_applicable: bool
    flags: list = field(default_factory=list)

    def metrics(self) -> list:
        rows = [("alpha", self.alpha), ("residual_linf", self.linf),
                ("residual_slope", self.decay.slope), ("input_slope", self.input_decay.slope),
                ("residual_norm_2alpha", self.residual_norm), ("input_norm_alpha", self.input_norm),
                ("norm_ratio", self.ratio), ("ratio_applicable", int(self.ratio_applicable))]
        for rate, chk in self.bound_checks.items():
            rows.append((f"bound_rate_{rate:g}_C", chk.C))
            rows.append((f"bound_rate_{rate:g}_passed", int(chk.passed)))
            rows.append((f"tight_C_rate_{rate:g}", self.tight_constants[rate]))
        return rows

    def to_csv(self) -> str:
        lines = [self.decay.to_csv(), "metric,value"]
        lines += [f"{k},{v!r}" for k, v in self.metrics()]
        return "\n".join(lines) + "\n"


def residual_report(dec: Decomposition, alpha: float) -> ResidualReport:
    N, Np = dec.scales.N, dec.scales.Np
    d_pyr = tensor_analyze(dec.residual, N, Np)
    f_pyr = tensor_analyze(dec.field, N, Np)
    decay = decay_report(d_pyr)
    input_decay = decay_report(f_pyr)
    flags = []
    if alpha >= 0.5:
        flags.append("alpha >= 1/2: outside the range the residual estimate assumes")

    checks, tight = {}, {}
    for rate in (2 * alpha + 0.5, 2 * alpha + 1.0):
        C = anchored_constant(decay, rate)
        checks[rate] = check_decay_bound(decay, rate, C)
        tight[rate] = tightest_constant(decay, rate)

    res_norm = mixed_holder_norm(d_pyr, 2 * alpha, 0.5) if not decay.all_zero else 0.0
    in_norm = mixed_holder_norm(f_pyr, alpha, 0.5) if not input_decay.all_zero else 0.0
    applicable = in_norm > 0.0
    ratio = res_norm / in_norm if applicable else math.nan
    if not applicable:
        flags.append("input has no wavelet-wavelet content; ratio not applicable")
    return ResidualReport(alpha, decay, input_decay,
                          float(np.max(np.abs(dec.residual.values))), checks, tight,
                          res_norm, in_norm, ratio, applicable, flags)
