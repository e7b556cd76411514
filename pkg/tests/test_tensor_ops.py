import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensor_paraproduct import RingFieldSpec, UnitGridField, generate_ring
from tensor_paraproduct.errors import LevelError, ShapeError
from tensor_paraproduct.tensor_ops import (FAMILIES, OperatorKind, TensorCoeffPyramid,
                                           apply_operator, apply_operator_yx, synthesize_basis,
                                           tensor_analyze, tensor_synthesize)
from tensor_paraproduct.wavelet1d import analyze_1d

from conftest import random_field

PP, PQ, QP, QQ = (OperatorKind.SCALING_SCALING, OperatorKind.SCALING_WAVELET,
                  OperatorKind.WAVELET_SCALING, OperatorKind.WAVELET_WAVELET)


def basis_1d(n, j, k, wavelet):
    x = (np.arange(n) + 0.5) / n
    inside = (x >= k / 2**j) & (x < (k + 1) / 2**j)
    if not wavelet:
        return 2 ** (j / 2) * inside
    left = (x >= k / 2**j) & (x < (k + 0.5) / 2**j)
    return 2 ** (j / 2) * (left.astype(float) - (inside & ~left))


def brute_coefficient(values, fam, j, k, jp, kp):
    n, m = values.shape
    wx = fam in ("omega_ws", "alpha")
    wy = fam in ("omega_sw", "alpha")
    g = np.outer(basis_1d(n, j, k, wx), basis_1d(m, jp, kp, wy))
    return np.sum(values * g) / (n * m)


def block_mean_oracle(values, j, jp):
    n, m = values.shape
    out = np.empty_like(values)
    bx, by = n // 2**j, m // 2**jp
    for a in range(2**j):
        for b in range(2**jp):
            blk = (slice(a * bx, (a + 1) * bx), slice(b * by, (b + 1) * by))
            out[blk] = values[blk].sum() / values[blk].size
    return out


def test_constant_field():
    pyr = tensor_analyze(UnitGridField(np.full((8, 8), 2.5)), 2, 2)
    assert pyr.eta[(0, 0)][0, 0] == 2.5
    for fam in ("omega_ws", "omega_sw", "alpha"):
        assert all(np.all(a == 0) for a in pyr.family(fam).values())


def test_single_cell_matches_brute_force():
    v = np.zeros((4, 4))
    v[1, 2] = 1.0
    pyr = tensor_analyze(UnitGridField(v), 1, 1)
    for fam in FAMILIES:
        for (j, jp), arr in pyr.family(fam).items():
            for k in range(2**j):
                for kp in range(2**jp):
                    assert arr[k, kp] == pytest.approx(brute_coefficient(v, fam, j, k, jp, kp), abs=1e-15)


def test_random_field_matches_brute_force(rng):
    f = random_field(rng, 3, 2)
    pyr = tensor_analyze(f, 2, 1)
    for fam in FAMILIES:
        for (j, jp), arr in pyr.family(fam).items():
            want = [[brute_coefficient(f.values, fam, j, k, jp, kp) for kp in range(2**jp)]
                    for k in range(2**j)]
            np.testing.assert_allclose(arr, want, atol=1e-14)


def test_separable_field(rng):
    fx, gy = rng.standard_normal(16), rng.standard_normal(8)
    pyr = tensor_analyze(UnitGridField(np.outer(fx, gy)), 3, 2)
    px, py = analyze_1d(fx), analyze_1d(gy)
    for j in range(4):
        for jp in range(3):
            np.testing.assert_allclose(pyr.alpha[(j, jp)], np.outer(px.detail[j], py.detail[jp]),
                                       atol=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 5), st.integers(1, 5))
def test_parseval_and_roundtrip(seed, L, Lp):
    f = random_field(np.random.default_rng(seed), L, Lp)
    pyr = tensor_analyze(f, L - 1, Lp - 1)
    assert abs(pyr.energy() - np.mean(f.values**2)) < 1e-12
    np.testing.assert_allclose(tensor_synthesize(pyr, L, Lp).values, f.values, atol=1e-12)


def test_roundtrip_ring_512():
    f = generate_ring(RingFieldSpec(0.4))
    back = tensor_synthesize(tensor_analyze(f, 8, 8), 9, 9)
    assert np.max(np.abs(back.values - f.values)) < 1e-10


def test_zero_and_truncated_synthesis(rng):
    zero = TensorCoeffPyramid(2, 1)
    assert np.all(tensor_synthesize(zero, 3, 2).values == 0)
    f = random_field(rng, 4)
    coarse = tensor_synthesize(tensor_analyze(f, 1, 1), 4, 4)
    np.testing.assert_allclose(coarse.values, apply_operator(f, 2, 2, PP).values, atol=1e-14)
    with pytest.raises(ShapeError):
        tensor_synthesize(zero, 2, 2)


def test_pyramid_validation():
    with pytest.raises(ShapeError):
        TensorCoeffPyramid(1, 1, alpha={(1, 1): np.zeros((1, 1))})
    with pytest.raises(ShapeError):
        TensorCoeffPyramid(0, 0, eta={(1, 0): np.zeros((2, 1))})
    with pytest.raises(KeyError):
        TensorCoeffPyramid(0, 0).family("beta")


def test_level_errors(rng):
    f = random_field(rng, 3)
    with pytest.raises(LevelError):
        tensor_analyze(f, 3, 0)
    with pytest.raises(LevelError):
        apply_operator(f, 3, 0, QP)
    apply_operator(f, 3, 3, PP)


def test_operators_on_constants():
    c = UnitGridField(np.full((8, 8), 4.0))
    assert np.all(apply_operator(c, 1, 2, QQ).values == 0)
    assert apply_operator(c, 1, 2, PP) == c


def test_scaling_operator_is_block_mean(rng):
    f = random_field(rng, 4, 3)
    for j in range(5):
        for jp in range(4):
            np.testing.assert_allclose(apply_operator(f, j, jp, PP).values,
                                       block_mean_oracle(f.values, j, jp), atol=1e-14)


@pytest.mark.parametrize("j, jp", [(0, 0), (1, 2), (3, 3), (2, 0)])
def test_wavelet_operator_from_scaling_corners(rng, j, jp):
    f = random_field(rng, 4)
    pp = lambda a, b: apply_operator(f, a, b, PP).values
    corners = pp(j + 1, jp + 1) - pp(j, jp + 1) - pp(j + 1, jp) + pp(j, jp)
    np.testing.assert_allclose(apply_operator(f, j, jp, QQ).values, corners, atol=1e-12)
    np.testing.assert_allclose(apply_operator(f, j, jp, QP).values, pp(j + 1, jp) - pp(j, jp), atol=1e-12)
    np.testing.assert_allclose(apply_operator(f, j, jp, PQ).values, pp(j, jp + 1) - pp(j, jp), atol=1e-12)


@pytest.mark.parametrize("kind", list(OperatorKind))
def test_axis_order_commutes(rng, kind):
    f = random_field(rng, 4)
    for j in range(4):
        for jp in range(4):
            a = apply_operator(f, j, jp, kind).values
            b = apply_operator_yx(f, j, jp, kind).values
            np.testing.assert_allclose(a, b, rtol=0, atol=1e-15)


def test_synthesize_basis_single_atom():
    alpha = [[np.zeros((1, 1)), np.zeros((1, 2))], [np.zeros((2, 1)), np.zeros((2, 2))]]
    alpha[1][1][0, 1] = 1.0
    v = synthesize_basis(0.0, [np.zeros((1, 1)), np.zeros((2, 1))],
                         [np.zeros((1, 1)), np.zeros((1, 2))], alpha)
    expected = np.outer(basis_1d(4, 1, 0, True), basis_1d(4, 1, 1, True))
    np.testing.assert_allclose(v, expected, atol=1e-15)
