import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tubegeom.jets import Jet2, UnsupportedJetOrder, jet_cross, jet_dot, series_mul

from oracles import fd_partial


def eval_example(v1, v2):
    """sin(v1) cos(v2) + v1^2 v2 / (1 + v2^2), built from jet primitives."""
    x = Jet2.variable(v1, 0)
    y = Jet2.variable(v2, 1)
    return x.sin() * y.cos() + x * x * y / (1.0 + y * y)


def eval_example_plain(v1, v2):
    return np.sin(v1) * np.cos(v2) + v1**2 * v2 / (1.0 + v2**2)


@pytest.mark.parametrize("i,j", [(i, j) for i in range(4) for j in range(4 - i)])
def test_jet_partials_match_finite_differences(i, j):
    v1, v2 = 0.37, -0.81
    jet = eval_example(v1, v2)
    want = fd_partial(eval_example_plain, v1, v2, i, j)
    tol = 1e-9 if i + j <= 2 else 1e-5
    assert jet.deriv(i, j) == pytest.approx(want, abs=tol)


def test_reads_beyond_order_rejected():
    jet = eval_example(0.1, 0.2)
    d1 = jet.d_dv(0)
    assert d1.order == 2
    with pytest.raises(UnsupportedJetOrder):
        d1.deriv(2, 1)


def test_batched_evaluation_matches_scalar():
    rng = np.random.default_rng(7)
    v1 = rng.uniform(-1, 1, size=50)
    v2 = rng.uniform(-1, 1, size=50)
    batch = eval_example(v1, v2)
    for k in (0, 17, 49):
        single = eval_example(v1[k], v2[k])
        np.testing.assert_allclose(batch.coeff[k], single.coeff, atol=1e-15)


def test_sqrt_reciprocal_roundtrip():
    v1, v2 = 0.9, 0.4
    x = Jet2.variable(v1, 0) + 2.0
    y = Jet2.variable(v2, 1)
    f = x * x + y * y + 1.0
    g = f.sqrt() * f.sqrt()
    np.testing.assert_allclose(g.coeff, f.coeff, atol=1e-12)
    h = f * f.reciprocal()
    one = Jet2.constant(1.0)
    np.testing.assert_allclose(h.coeff, one.coeff, atol=1e-12)


def test_cross_dot_identities():
    v1, v2 = 0.3, 1.1
    u = (Jet2.variable(v1, 0).sin(), Jet2.variable(v2, 1).cos(), Jet2.variable(v1, 0))
    w = (Jet2.variable(v2, 1), Jet2.constant(2.0), Jet2.variable(v1, 0).cos())
    c = jet_cross(u, w)
    # c is orthogonal to both factors, as jets (all coefficients)
    for factor in (u, w):
        d = jet_dot(c, factor)
        np.testing.assert_allclose(d.coeff, 0.0, atol=1e-12)


coeffs = st.lists(
    st.floats(min_value=-2.0, max_value=2.0, allow_nan=False), min_size=10, max_size=10
)


def _jet_from_list(vals, const_shift=0.0):
    c = np.zeros((4, 4))
    idx = [(i, j) for i in range(4) for j in range(4 - i)]
    for (i, j), v in zip(idx, vals):
        c[i, j] = v
    c[0, 0] += const_shift
    return Jet2(c)


@settings(max_examples=60, deadline=None)
@given(coeffs, coeffs)
def test_product_rule_first_partials(a_vals, b_vals):
    a = _jet_from_list(a_vals)
    b = _jet_from_list(b_vals)
    p = a * b
    for i, j in ((1, 0), (0, 1)):
        rhs = a.deriv(i, j) * b.value + a.value * b.deriv(i, j)
        assert p.deriv(i, j) == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(coeffs)
def test_reciprocal_inverts(vals):
    a = _jet_from_list(vals, const_shift=5.0)  # keep the constant term away from 0
    prod = a * a.reciprocal()
    np.testing.assert_allclose(prod.coeff, Jet2.constant(1.0).coeff, atol=1e-9)


def test_series_mul_matches_polynomial_product():
    a = np.array([1.0, 2.0, 0.5, -1.0])
    b = np.array([3.0, -1.0, 0.25, 2.0])
    got = series_mul(a, b)
    want = np.convolve(a, b)[:4]
    np.testing.assert_allclose(got, want, atol=1e-15)


def test_from_series_places_coefficients_on_one_axis():
    s = np.array([2.0, -1.0, 0.5, 0.125])
    ju = Jet2.from_series(s, 0)
    assert ju.deriv(1, 0) == pytest.approx(-1.0)
    assert ju.deriv(2, 0) == pytest.approx(1.0)  # 0.5 * 2!
    assert ju.deriv(0, 1) == 0.0
