"""Mixed-Hölder norms, coefficient-decay reports and Hölder exponent estimates.

Decay is summarised per level pair ``(j, j')`` by the supremum of absolute
coefficients.  Fits regress ``log2`` of the wavelet-wavelet suprema,
max-aggregated over each diagonal ``s = j + j'``, against ``s``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .dyadic import UnitGridField, cell_dyadic_distance, dyadic_distance
from .errors import DomainError, EstimateUndefinedError
from .tensor_ops import FAMILIES, TensorCoeffPyramid

FIT_FAMILY = "alpha"
# suprema at or below this fraction of the pyramid's largest |coefficient| are zero
ZERO_RTOL = 1e-13


def mixed_holder_norm(pyramid: TensorCoeffPyramid, alpha: float, offset: float = 0.5) -> float:
    """``sup |<f, psi (x) psi>| / 2^(-(j+j')(alpha + offset))``."""
    if alpha <= 0 or offset <= 0:
        raise DomainError(f"alpha and offset must be positive, got {alpha}, {offset}")
    if not pyramid.alpha:
        raise DomainError("empty pyramid")
    best = 0.0
    for (j, jp), arr in pyramid.alpha.items():
        if arr.size:
            best = max(best, float(np.max(np.abs(arr))) * 2.0 ** ((j + jp) * (alpha + offset)))
    return best


def point_quotients(field_: UnitGridField, x: float, y: float, xp: float, yp: float,
                    alpha: float):
    """The three Hölder quotients for the rectangle with corners
    ``(x, xp), (y, xp), (x, yp), (y, yp)``.

    Returns ``(mixed, along_x, along_y)``; a quotient whose dyadic distance
    vanishes is ``None``.
    """
    dx = dyadic_distance(x, y)
    dy = dyadic_distance(xp, yp)
    f = field_.at
    mixed = along_x = along_y = None
    if dx > 0 and dy > 0:
        mixed = abs(f(x, xp) - f(y, xp) - f(x, yp) + f(y, yp)) / (dx * dy) ** alpha
    if dx > 0:
        along_x = abs(f(x, xp) - f(y, xp)) / dx**alpha
    if dy > 0:
        along_y = abs(f(x, xp) - f(x, yp)) / dy**alpha
    return mixed, along_x, along_y


def _index_pairs(n: int, cap: int) -> tuple[np.ndarray, np.ndarray]:
    i1, i2 = np.triu_indices(n, k=1)
    if len(i1) > cap:
        keep = np.linspace(0, len(i1) - 1, cap).round().astype(int)
        i1, i2 = i1[keep], i2[keep]
    return i1, i2


def direct_mixed_holder_quotients(field_: UnitGridField, alpha: float,
                                  sample_count: int = 4096) -> float:
    """Brute-force maximum of the three Hölder quotients over cell-center rectangles.

    All index pairs per axis are used while there are at most ``sample_count``
    of them; beyond that an evenly strided subset of that size is taken.
    Pairs at zero dyadic distance cannot occur between distinct cells.
    """
    if sample_count < 1:
        raise DomainError(f"sample_count must be >= 1, got {sample_count}")
    v = field_.values
    L, Lp = field_.levels
    rx1, rx2 = _index_pairs(v.shape[0], sample_count)
    ry1, ry2 = _index_pairs(v.shape[1], sample_count)
    dx = cell_dyadic_distance(rx1, rx2, L) ** alpha
    dy = cell_dyadic_distance(ry1, ry2, Lp) ** alpha

    best = 0.0
    if len(rx1):
        xdiff = v[rx1, :] - v[rx2, :]                       # (pairs_x, n')
        best = max(best, float(np.max(np.abs(xdiff) / dx[:, None])))
        if len(ry1):
            # chunk to bound memory on large grids
            for start in range(0, len(rx1), 256):
                block = xdiff[start:start + 256]
                mixed = block[:, ry1] - block[:, ry2]
                q = np.abs(mixed) / (dx[start:start + 256, None] * dy[None, :])
                best = max(best, float(q.max()))
    if len(ry1):
        ydiff = v[:, ry1] - v[:, ry2]
        best = max(best, float(np.max(np.abs(ydiff) / dy[None, :])))
    return best


@dataclass
class DecayReport:
    """Per-level-pair suprema for each family plus a log-linear decay fit.

    ``sups[family]`` is an ``(N+1, N'+1)`` array.  The fit regresses
    ``log2(diag_sup[s])`` on ``s`` over nonzero diagonals.  With fewer than
    two usable diagonals ``fit_ok`` is False and ``slope`` is ``+inf``.
    """

    N: int
    Np: int
    sups: dict
    diag_sup: np.ndarray
    slope: float
    intercept: float
    r2: float
    fit_points: int
    all_zero: bool
    fit_ok: bool
    notes: list = field(default_factory=list)

    def diagonal_points(self):
        """``(s, sup)`` pairs used by the fit."""
        return [(s, float(v)) for s, v in enumerate(self.diag_sup) if v > 0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "jp", "family", "sup_abs"])
        for j in range(self.N + 1):
            for jp in range(self.Np + 1):
                for fam in FAMILIES:
                    w.writerow([j, jp, fam, repr(float(self.sups[fam][j, jp]))])
        w.writerow([])
        w.writerow(["slope", "intercept", "r2", "fit_points", "all_zero"])
        w.writerow([repr(self.slope), repr(self.intercept), repr(self.r2),
                    self.fit_points, int(self.all_zero)])
        return buf.getvalue()


def read_decay_csv(text: str) -> dict:
    """Parse the output of :meth:`DecayReport.to_csv` back into plain data."""
    blocks = text.split("\n\n")
    rows = list(csv.DictReader(io.StringIO(blocks[0])))
    fit = next(csv.DictReader(io.StringIO(blocks[1])))
    return {
        "rows": [(int(r["j"]), int(r["jp"]), r["family"], float(r["sup_abs"])) for r in rows],
        "slope": float(fit["slope"]),
        "intercept": float(fit["intercept"]),
        "r2": float(fit["r2"]),
        "fit_points": int(fit["fit_points"]),
        "all_zero": bool(int(fit["all_zero"])),
    }


def decay_report(pyramid: TensorCoeffPyramid, zero_rtol: float = ZERO_RTOL) -> DecayReport:
    N, Np = pyramid.N, pyramid.Np
    sups = {}
    scale = 0.0
    for fam in FAMILIES:
        table = np.zeros((N + 1, Np + 1))
        for (j, jp), arr in pyramid.family(fam).items():
            table[j, jp] = float(np.max(np.abs(arr))) if arr.size else 0.0
        sups[fam] = table
        scale = max(scale, float(table.max()))
    threshold = zero_rtol * scale

    diag = np.zeros(N + Np + 1)
    table = sups[FIT_FAMILY]
    for j in range(N + 1):
        for jp in range(Np + 1):
            diag[j + jp] = max(diag[j + jp], table[j, jp])
    diag[diag <= threshold] = 0.0

    nz = np.flatnonzero(diag)
    all_zero = len(nz) == 0
    notes = []
    if all_zero:
        notes.append("all wavelet-wavelet suprema vanish")
    if len(nz) >= 2:
        s = nz.astype(float)
        y = np.log2(diag[nz])
        slope, intercept = np.polyfit(s, y, 1)
        pred = slope * s + intercept
        ss_res = float(np.sum((y - pred) ** 2))
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
        return DecayReport(N, Np, sups, diag, float(slope), float(intercept), r2,
                           len(nz), all_zero, True, notes)
    if not all_zero:
        notes.append("fewer than two nonzero diagonals; no fit")
    return DecayReport(N, Np, sups, diag, math.inf, math.nan, math.nan,
                       len(nz), all_zero, False, notes)


@dataclass(frozen=True)
class BoundCheck:
    passed: bool
    rate: float
    C: float
    witness: tuple | None = None   # (j, j') of the worst violation
    ratio: float | None = None     # sup / (C 2^(-(j+j') rate)) at the witness


def check_decay_bound(report: DecayReport, rate: float, C: float,
                      family: str = FIT_FAMILY) -> BoundCheck:
    """Is ``sup_(j,j') <= C 2^(-(j+j') rate)`` at every level pair?

    On failure the witness is the level pair with the largest violation
    ratio, ties resolved toward larger ``j + j'``.
    """
    table = report.sups[family]
    worst, worst_ratio = None, 1.0
    for j in range(report.N + 1):
        for jp in range(report.Np + 1):
            bound = C * 2.0 ** (-(j + jp) * rate)
            if bound > 0:
                ratio = table[j, jp] / bound
            else:
                ratio = math.inf if table[j, jp] > 0 else 0.0
            if ratio > 1.0 and (worst is None or ratio > worst_ratio
                                or (ratio == worst_ratio and j + jp > sum(worst))):
                worst, worst_ratio = (j, jp), ratio
    if worst is None:
        return BoundCheck(True, rate, C)
    return BoundCheck(False, rate, C, worst, worst_ratio)


def tightest_constant(report: DecayReport, rate: float, family: str = FIT_FAMILY) -> float:
    """Smallest ``C`` for which :func:`check_decay_bound` passes at ``rate``."""
    table = report.sups[family]
    s = np.add.outer(np.arange(report.N + 1), np.arange(report.Np + 1))
    return float(np.max(table * 2.0 ** (s * rate)))


def anchored_constant(report: DecayReport, rate: float) -> float:
    """``C`` pinned by the coarsest nonzero diagonal of the fit family."""
    pts = report.diagonal_points()
    if not pts:
        return 0.0
    s, sup = pts[0]
    return sup * 2.0 ** (s * rate)


@dataclass(frozen=True)
class HolderEstimate:
    alpha_hat: float
    norm_value: float
    exponent_offset: float


def estimate_alpha(report: DecayReport, offset: float = 0.5) -> HolderEstimate:
    """Invert the decay fit: ``alpha_hat = -slope - offset``.

    ``norm_value`` is the wavelet-coefficient norm at ``alpha_hat``, i.e. the
    tightest constant for the fitted rate.
    """
    if report.all_zero:
        raise EstimateUndefinedError("all coefficients vanish; no decay to fit")
    if not report.fit_ok:
        raise EstimateUndefinedError("fewer than two nonzero diagonals")
    alpha_hat = -report.slope - offset
    norm = max(sup * 2.0 ** (-report.slope * s) for s, sup in report.diagonal_points())
    return HolderEstimate(alpha_hat, norm, offset)
