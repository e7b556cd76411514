import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensor_paraproduct import RingFieldSpec, UnitGridField, generate_ring
from tensor_paraproduct.errors import DomainError, EstimateUndefinedError
from tensor_paraproduct.fields import decay_field
from tensor_paraproduct.regularity import (check_decay_bound, decay_report,
                                           direct_mixed_holder_quotients, estimate_alpha,
                                           mixed_holder_norm, point_quotients, read_decay_csv,
                                           tightest_constant)
from tensor_paraproduct.tensor_ops import TensorCoeffPyramid, tensor_analyze, tensor_synthesize

from conftest import random_field


def exact_pyramid(N, rate, sign_seed=None):
    rng = np.random.default_rng(sign_seed)
    alpha = {}
    for j in range(N + 1):
        for jp in range(N + 1):
            signs = 1.0 if sign_seed is None else rng.choice([-1.0, 1.0], (2**j, 2**jp))
            alpha[(j, jp)] = signs * np.full((2**j, 2**jp), 2.0 ** (-(j + jp) * rate))
    return TensorCoeffPyramid(N, N, alpha=alpha)


def test_norm_of_constant_is_zero():
    pyr = tensor_analyze(UnitGridField(np.full((8, 8), 3.0)), 2, 2)
    assert mixed_holder_norm(pyr, 0.3) == 0.0


@pytest.mark.parametrize("a", [0.1, 0.4, 0.9])
def test_norm_of_exact_pyramid_is_one(a):
    assert mixed_holder_norm(exact_pyramid(4, a + 0.5), a) == pytest.approx(1.0, rel=1e-12)


def test_norm_domain():
    with pytest.raises(DomainError):
        mixed_holder_norm(exact_pyramid(2, 1.0), 0.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(-8, 8).filter(lambda c: c != 0))
def test_norm_scales_linearly(seed, c):
    f = random_field(np.random.default_rng(seed), 3)
    base = mixed_holder_norm(tensor_analyze(f, 2, 2), 0.3)
    scaled = mixed_holder_norm(tensor_analyze(f * c, 2, 2), 0.3)
    assert scaled == pytest.approx(abs(c) * base, rel=1e-13)


@pytest.mark.xfail(strict=True, reason="norm grows about 2.2x from (7,7) to (8,8): the ring's "
                   "coefficients decay slower than the 0.9 rate at this resolution")
def test_ring_norm_stable_between_truncations():
    # the two deepest truncations a 512 grid supports
    f = generate_ring(RingFieldSpec(0.4))
    a = mixed_holder_norm(tensor_analyze(f, 7, 7), 0.4)
    b = mixed_holder_norm(tensor_analyze(f, 8, 8), 0.4)
    assert 0 < a < math.inf
    assert abs(b / a - 1) <= 0.05


def test_direct_quotients_constant_and_step():
    assert direct_mixed_holder_quotients(UnitGridField(np.full((8, 8), 1.5)), 0.4) == 0.0
    step = UnitGridField(np.repeat((np.arange(8) >= 4).astype(float)[:, None], 8, axis=1))
    _, along_x, _ = point_quotients(step, 0.49, 0.51, 0.2, 0.7, 0.4)
    assert along_x == 1.0
    mixed, _, along_y = point_quotients(step, 0.49, 0.51, 0.2, 0.7, 0.4)
    assert mixed == 0.0 and along_y == 0.0
    assert point_quotients(step, 0.3, 0.3, 0.2, 0.7, 0.4)[:2] == (None, None)
    assert direct_mixed_holder_quotients(step, 0.4) == 1.0


def test_direct_quotients_match_point_quotients(rng):
    f = random_field(rng, 3)
    centers = (np.arange(8) + 0.5) / 8
    best = 0.0
    for x in centers:
        for y in centers:
            for xp in centers:
                for yp in centers:
                    for q in point_quotients(f, x, y, xp, yp, 0.3):
                        if q is not None:
                            best = max(best, q)
    assert direct_mixed_holder_quotients(f, 0.3) == pytest.approx(best, rel=1e-13)


def test_direct_quotients_sampled_is_lower_bound(rng):
    f = random_field(rng, 5)
    assert direct_mixed_holder_quotients(f, 0.3, 50) <= direct_mixed_holder_quotients(f, 0.3)


def test_finest_atom_norm_ratio_is_four():
    # one psi (x) psi atom on the finest 8x8 cells: the quotient sees the parent
    # interval length and the coefficient carries a 1/2 per axis
    pyr = TensorCoeffPyramid(2, 2, alpha={(2, 2): np.eye(4)[[1]].T @ np.eye(4)[[2]]})
    f = tensor_synthesize(pyr, 3, 3)
    for a in (0.2, 0.4):
        ratio = direct_mixed_holder_quotients(f, a) / mixed_holder_norm(pyr, a)
        assert ratio == pytest.approx(4.0, rel=1e-12)


@pytest.mark.xfail(strict=True, reason="measured factor is 4.0 to 6.1: the finest atom alone "
                   "already sits at 4 and one-axis quotients push random fields above it")
def test_direct_quotients_within_factor_four_of_norm():
    for seed in range(50):
        f = random_field(np.random.default_rng(seed), 3)
        for a in (0.2, 0.4):
            ratio = direct_mixed_holder_quotients(f, a) / mixed_holder_norm(tensor_analyze(f, 2, 2), a)
            assert 0.25 <= ratio <= 4.0


@pytest.mark.parametrize("rate", [0.7, 1.3])
def test_exact_decay_fit(rate):
    rep = decay_report(exact_pyramid(5, rate, sign_seed=3))
    assert rep.fit_ok and not rep.all_zero
    assert rep.slope == pytest.approx(-rate, abs=1e-9)
    assert rep.r2 == pytest.approx(1.0)
    assert rep.fit_points == 11


def test_constant_report_is_all_zero():
    rep = decay_report(tensor_analyze(UnitGridField(np.full((8, 8), 2.0)), 2, 2))
    assert rep.all_zero and not rep.fit_ok and rep.slope == math.inf
    with pytest.raises(EstimateUndefinedError):
        estimate_alpha(rep)


def test_single_diagonal_has_no_fit():
    pyr = TensorCoeffPyramid(1, 1, alpha={(0, 0): np.ones((1, 1))})
    rep = decay_report(pyr)
    assert rep.fit_points == 1 and not rep.fit_ok
    with pytest.raises(EstimateUndefinedError):
        estimate_alpha(rep)


def test_roundoff_suprema_count_as_zero():
    pyr = exact_pyramid(3, 1.0)
    pyr.alpha[(3, 3)][:] = 1e-17
    rep = decay_report(pyr)
    assert rep.diag_sup[6] == 0.0 and rep.fit_points == 6


def test_bound_checks_on_exact_pyramid():
    rep = decay_report(exact_pyramid(4, 1.1))
    assert check_decay_bound(rep, 1.1, 1.0).passed
    bad = check_decay_bound(rep, 1.2, 1.0)
    assert not bad.passed and bad.witness == (4, 4)
    assert bad.ratio == pytest.approx(2 ** (8 * 0.1))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.05, 2.0))
def test_norm_is_tightest_constant(seed, a):
    f = random_field(np.random.default_rng(seed), 4)
    pyr = tensor_analyze(f, 3, 3)
    rep = decay_report(pyr)
    norm = mixed_holder_norm(pyr, a)
    assert tightest_constant(rep, a + 0.5) == pytest.approx(norm, rel=1e-12)
    assert check_decay_bound(rep, a + 0.5, norm * (1 + 1e-12)).passed
    assert not check_decay_bound(rep, a + 0.5, norm * (1 - 1e-9)).passed


@pytest.mark.parametrize("a", [0.05, 0.3, 0.8])
def test_estimate_exact_decay_field(a):
    f = decay_field(7, 7, a + 0.5, seed=11)
    est = estimate_alpha(decay_report(tensor_analyze(f, 6, 6)))
    assert est.alpha_hat == pytest.approx(a, abs=1e-9)
    assert est.norm_value == pytest.approx(1.0, rel=1e-9)
    assert est.exponent_offset == 0.5


@pytest.mark.parametrize("a", [0.2, 0.45])
def test_characteristic_sums_decay_at_double_rate(a):
    # random-magnitude coefficients bounded by 2^-(j+j')(2a+1/2)
    f = decay_field(7, 7, 2 * a + 0.5, seed=5, exact=False)
    rep = decay_report(tensor_analyze(f, 6, 6))
    assert rep.slope <= -(2 * a + 0.5) + 0.05


def test_decay_csv_roundtrip():
    rep = decay_report(exact_pyramid(3, 0.8, sign_seed=1))
    text = rep.to_csv()
    assert text.splitlines()[0] == "j,jp,family,sup_abs"
    back = read_decay_csv(text)
    assert len(back["rows"]) == 4 * 16
    assert back["slope"] == rep.slope and back["fit_points"] == rep.fit_points
    assert not back["all_zero"]


RING_SLOPE_REASON = ("the ring cusp is a curve, so its wavelet-wavelet suprema decay at about "
                     "-0.54 for alpha=0.4 on a 512 grid, not the point-cusp rate")


@pytest.mark.xfail(strict=True, reason=RING_SLOPE_REASON)
def test_ring_input_slope():
    f = generate_ring(RingFieldSpec(0.4))
    assert decay_report(tensor_analyze(f, 6, 6)).slope <= -(0.4 + 0.5) + 0.15


@pytest.mark.xfail(strict=True, reason=RING_SLOPE_REASON)
@pytest.mark.parametrize("a, lo, hi", [(0.04, 0.02, 0.08), (0.4, 0.3, 0.5)])
def test_ring_alpha_estimate(a, lo, hi):
    f = generate_ring(RingFieldSpec(a))
    est = estimate_alpha(decay_report(tensor_analyze(f, 8, 8)))
    assert lo <= est.alpha_hat <= hi
