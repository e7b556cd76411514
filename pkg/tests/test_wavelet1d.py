import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from tensor_paraproduct.errors import LevelError, ShapeError
from tensor_paraproduct.wavelet1d import (CoeffPyramid1D, analyze_1d, detail_Q, project_P,
                                          synthesize_1d)


def haar_oracle(v):
    """Inner products against explicit L2-normalised Haar functions."""
    n = len(v)
    L = n.bit_length() - 1
    x = (np.arange(n) + 0.5) / n
    c, d = [], []
    for j in range(L):
        cj, dj = [], []
        for k in range(2**j):
            inside = (x >= k / 2**j) & (x < (k + 1) / 2**j)
            left = (x >= k / 2**j) & (x < (k + 0.5) / 2**j)
            phi = 2 ** (j / 2) * inside
            psi = 2 ** (j / 2) * (left.astype(float) - (inside & ~left))
            cj.append(np.sum(v * phi) / n)
            dj.append(np.sum(v * psi) / n)
        c.append(np.array(cj))
        d.append(np.array(dj))
    return c, d


vectors = st.integers(1, 7).flatmap(
    lambda L: arrays(np.float64, 2**L, elements=st.floats(-1e3, 1e3)))


def test_constant_has_no_detail():
    p = analyze_1d([1.0, 1.0, 1.0, 1.0])
    assert p.scaling[0][0] == 1.0
    assert all(np.all(d == 0) for d in p.detail)


@pytest.mark.parametrize("a, b", [(3.0, 1.0), (-2.0, 5.0)])
def test_two_cells(a, b):
    p = analyze_1d([a, b])
    assert p.scaling[0][0] == (a + b) / 2
    assert p.detail[0][0] == (a - b) / 2


@pytest.mark.parametrize("v", [[1.0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1.0, 0], list(range(16))])
def test_matches_inner_product_oracle(v):
    v = np.asarray(v, dtype=float)
    p = analyze_1d(v)
    c, d = haar_oracle(v)
    for j in range(p.max_level + 1):
        np.testing.assert_allclose(p.scaling[j], c[j], atol=1e-14)
        np.testing.assert_allclose(p.detail[j], d[j], atol=1e-14)


@given(vectors)
def test_parseval_and_roundtrip(v):
    p = analyze_1d(v)
    scale = 1.0 + np.mean(v * v)
    assert abs(p.energy() - np.mean(v * v)) <= 1e-12 * scale
    np.testing.assert_allclose(synthesize_1d(p, p.max_level + 1), v, rtol=0, atol=1e-12 * np.sqrt(scale))


@pytest.mark.parametrize("v", [[1.0, 1, 1, 1], [1.0, 0, 0, 0]])
def test_roundtrip_examples(v):
    np.testing.assert_allclose(synthesize_1d(analyze_1d(v), 2), v, rtol=0, atol=1e-15)


def test_roundtrip_1024(rng):
    v = rng.uniform(-1, 1, 1024)
    assert np.max(np.abs(synthesize_1d(analyze_1d(v), 10) - v)) < 1e-12


def test_shape_errors():
    with pytest.raises(ShapeError):
        analyze_1d([1.0, 2.0, 3.0])
    with pytest.raises(ShapeError):
        synthesize_1d(analyze_1d([1.0, 2.0, 3.0, 4.0]), 3)
    with pytest.raises(ShapeError):
        CoeffPyramid1D(0, (np.zeros(1),), (np.zeros(2),))


def test_projection_examples():
    v = [1.0, 2.0, 3.0, 4.0]
    np.testing.assert_array_equal(project_P(v, 1), [1.5, 1.5, 3.5, 3.5])
    np.testing.assert_array_equal(project_P(v, 2), v)
    np.testing.assert_array_equal(project_P(v, 0), [2.5] * 4)
    np.testing.assert_array_equal(detail_Q(v, 0), [-1.0, -1.0, 1.0, 1.0])
    np.testing.assert_array_equal(detail_Q([2.0] * 8, 1), np.zeros(8))
    with pytest.raises(LevelError):
        project_P(v, 3)
    with pytest.raises(LevelError):
        detail_Q(v, 2)


@given(vectors, st.data())
def test_projection_properties(v, data):
    L = len(v).bit_length() - 1
    j = data.draw(st.integers(0, L))
    pv = project_P(v, j)
    np.testing.assert_array_equal(project_P(pv, j), pv)
    if j < L:
        q = detail_Q(v, j)
        tol = 1e-12 * (1 + np.max(np.abs(v)))
        assert abs(np.dot(q, pv)) / len(v) <= tol * (1 + np.max(np.abs(v)))
        # zero mean on every level-j block
        assert np.max(np.abs(q.reshape(2**j, -1).mean(axis=1))) <= tol


@given(vectors)
def test_details_telescope(v):
    L = len(v).bit_length() - 1
    total = project_P(v, 0) + sum(detail_Q(v, j) for j in range(L))
    np.testing.assert_allclose(total, v, atol=1e-12 * (1 + np.max(np.abs(v))))
