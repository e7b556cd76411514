"""Invariant suites run by ``tensor-paraproduct verify``.

Each suite returns a list of :class:`Check` rows; a suite passes when every
row does.  Random inputs are seeded decay-pyramid fields, so a given
``(size, seed)`` always produces the same report.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .dyadic import UnitGridField, _log2_exact
from .errors import DomainError
from .fields import RingFieldSpec, decay_field, generate_ring
from .paraproduct import (ScaleRange, decompose, exp_nonlinearity, linear_nonlinearity,
                          paraproduct_approx, residual_integral_form, residual_report,
                          square_nonlinearity, telescoping_mixed_sum)
from .regularity import decay_report
from .tensor_ops import tensor_analyze, tensor_synthesize
from .wavelet1d import analyze_1d, synthesize_1d

SUITES = ("parseval", "telescope", "ftc", "decay", "residual")
# slope margins for the ring-field decay check
INPUT_SLOPE_SLACK = 0.15
RESIDUAL_SLOPE_SLACK = 0.2
MIN_SLOPE_GAP = 0.25


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    limit: float
    passed: bool

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.suite}/{self.name}: {self.value:.6g} (limit {self.limit:.6g})"


def _below(suite, name, value, limit):
    return Check(suite, name, float(value), float(limit), bool(value < limit))


def _at_most(suite, name, value, limit):
    return Check(suite, name, float(value), float(limit), bool(value <= limit))


def _level(size: int) -> int:
    L = _log2_exact(size, "size")
    if L < 2:
        raise DomainError(f"size must be a power of two >= 4, got {size}")
    return L


def _random_field(L: int, seed: int) -> UnitGridField:
    return decay_field(L, L, 0.9, seed, exact=False, mean=0.3)


def suite_parseval(size: int, seed: int) -> list[Check]:
    L = _level(size)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(size * size)
    pyr = analyze_1d(v)
    out = [
        _below("parseval", "energy_1d", abs(pyr.energy() - np.mean(v * v)) / np.mean(v * v), 1e-12),
        _below("parseval", "roundtrip_1d",
               np.max(np.abs(synthesize_1d(pyr, pyr.max_level + 1) - v)), 1e-12),
    ]
    f = UnitGridField(rng.standard_normal((size, size)))
    tp = tensor_analyze(f, L - 1, L - 1)
    norm2 = float(np.mean(f.values**2))
    out.append(_below("parseval", "energy_2d", abs(tp.energy() - norm2) / norm2, 1e-12))
    back = tensor_synthesize(tp, L, L)
    out.append(_below("parseval", "roundtrip_2d", np.max(np.abs(back.values - f.values)), 1e-12))
    return out


def _nonlinearities():
    return (linear_nonlinearity(), square_nonlinearity(), exp_nonlinearity(0.2))


def suite_telescope(size: int, seed: int) -> list[Check]:
    L = _level(size)
    f = _random_field(L, seed)
    scales = ScaleRange(L - 2, L - 2)
    out = []
    for A in _nonlinearities():
        dec = decompose(f, A, scales)
        tel = telescoping_mixed_sum(f, A, scales)
        out.append(_below("telescope", f"split[{A.name}]", dec.split_error, 1e-12))
        out.append(_below("telescope", f"collapse[{A.name}]", tel.max_abs_error, 1e-12))
    return out


def suite_ftc(size: int, seed: int) -> list[Check]:
    L = _level(size)
    f = _random_field(L, seed)
    n = min(3, L - 1)
    scales = ScaleRange(n, n)
    out = []
    for A in (square_nonlinearity(), linear_nonlinearity()):
        tel = telescoping_mixed_sum(f, A, scales)
        approx, _, _ = paraproduct_approx(f, A, scales)
        integral = residual_integral_form(f, A, scales, quad_order=4)
        err = np.max(np.abs(integral.values - (tel.total.values - approx.values)))
        out.append(_below("ftc", f"integral_vs_telescope[{A.name}]", err, 1e-10))
    return out


def ring_decay_checks(alpha: float = 0.4, grid_level: int = 9, n: int = 6) -> list[Check]:
    """Slope checks for the ring field and its residual at scales ``(n, n)``."""
    f = generate_ring(RingFieldSpec(alpha, grid_level=grid_level))
    dec = decompose(f, exp_nonlinearity(0.2), ScaleRange(n, n))
    f_slope = decay_report(tensor_analyze(f, n, n)).slope
    d_slope = decay_report(tensor_analyze(dec.residual, n, n)).slope
    return [
        _at_most("decay", "input_slope", f_slope, -(alpha + 0.5) + INPUT_SLOPE_SLACK),
        _at_most("decay", "residual_slope", d_slope, -(2 * alpha + 0.5) + RESIDUAL_SLOPE_SLACK),
        Check("decay", "slope_gap", f_slope - d_slope, MIN_SLOPE_GAP,
              bool(f_slope - d_slope >= MIN_SLOPE_GAP)),
    ]


def suite_decay(size: int, seed: int) -> list[Check]:
    # the ring field is deterministic; seed is unused
    L = _level(size)
    return ring_decay_checks(grid_level=L, n=min(6, L - 1))


def suite_residual(size: int, seed: int) -> list[Check]:
    L = _level(size)
    f = _random_field(L, seed)
    n = L - 2
    scales = ScaleRange(n, n)
    out = []

    rep = residual_report(decompose(f, exp_nonlinearity(0.2), scales), 0.4)
    out.append(Check("residual", "ratio_finite", rep.ratio, math.inf, bool(np.isfinite(rep.ratio))))

    # a linear map leaves no wavelet-wavelet content inside the analysed scales
    lin = decompose(f, linear_nonlinearity(), scales)
    pyr = tensor_analyze(lin.residual, n, n)
    worst = max(float(np.max(np.abs(a))) for a in pyr.alpha.values())
    out.append(_below("residual", "linear_alpha_coeffs", worst, 1e-12))

    const = residual_report(decompose(UnitGridField(np.full((size, size), 0.7)),
                                      exp_nonlinearity(0.2), scales), 0.4)
    out.append(Check("residual", "constant_not_applicable", float(const.ratio_applicable), 0.0,
                     not const.ratio_applicable))
    return out


_RUNNERS = {
    "parseval": suite_parseval,
    "telescope": suite_telescope,
    "ftc": suite_ftc,
    "decay": suite_decay,
    "residual": suite_residual,
}


def run_verify(suite_name: str, size: int, seed: int) -> list[Check]:
    if suite_name == "all":
        return [c for name in SUITES for c in _RUNNERS[name](size, seed)]
    if suite_name not in _RUNNERS:
        raise KeyError(f"unknown suite {suite_name!r}")
    return _RUNNERS[suite_name](size, seed)


def checks_csv(checks: list[Check]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "check", "value", "limit", "passed"])
    for c in checks:
        w.writerow([c.suite, c.name, repr(c.value), repr(c.limit), int(c.passed)])
    return buf.getvalue()
