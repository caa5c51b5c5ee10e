import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial import hermite as nph

from discofield.errors import FamilyMismatch, QuadratureUnderResolved
from discofield.hermite import (GaussianParams, HermiteState, QuadratureSpec, eval_phi, eval_phi_derivatives,
                                eval_phi_momentum, fourier_transform_numeric, hermite_functions,
                                hermite_polynomial, inner_product, moment, moment_trapezoid, norm_constant)

families = st.builds(
    GaussianParams,
    X=st.floats(-3, 3),
    P=st.floats(-3, 3),
    dp=st.floats(0.1, 10.0),
)


@pytest.mark.parametrize("n,u,want", [(0, 0.7, 1.0), (1, 0.5, 1.0), (3, 1.0, -4.0)])
def test_hermite_polynomial_examples(n, u, want):
    assert hermite_polynomial(n, u) == pytest.approx(want, abs=1e-14)


def test_hermite_polynomial_matches_numpy_series():
    u = np.linspace(-3, 3, 31)
    for n in range(25):
        coef = np.zeros(n + 1)
        coef[n] = 1.0
        want = nph.hermval(u, coef)
        np.testing.assert_allclose(hermite_polynomial(n, u), want, rtol=1e-12, atol=1e-12)


def test_ground_value_at_centre():
    phi = eval_phi(HermiteState(0, GaussianParams(0, 0, 0.5)), 0.0)
    assert phi.real > 0 and abs(phi.imag) < 1e-15
    assert abs(phi) ** 2 == pytest.approx(1 / np.sqrt(2 * np.pi), abs=1e-10)


def test_first_excited_vanishes_at_mean():
    g = GaussianParams(1.3, -0.4, 2.0)
    assert abs(eval_phi(HermiteState(1, g), g.X)) < 1e-15
    assert abs(eval_phi_momentum(HermiteState(1, g), g.P)) < 1e-15


def test_phase_follows_mean_momentum():
    phi = eval_phi(HermiteState(0, GaussianParams(0, 2.0, 0.5)), 1.0)
    assert np.angle(phi) == pytest.approx(2.0, abs=1e-12)


def test_momentum_ground_value():
    phit = eval_phi_momentum(HermiteState(0, GaussianParams(0, 0, 0.5)), 0.0)
    assert abs(phit) ** 2 == pytest.approx(1 / (np.sqrt(2 * np.pi) * 0.5), abs=1e-10)


@pytest.mark.parametrize("n,kind,params,want", [
    (0, "disp_p", GaussianParams(0, 0, 0.5), 0.25),
    (3, "disp_x", GaussianParams(0, 0, 0.5), 7.0),
    (0, "mean_x", GaussianParams(1.5, 0, 0.5), 1.5),
    (2, "disp_p", GaussianParams(0, 0, 0.5), 1.25),
])
def test_moment_examples(n, kind, params, want):
    assert moment(HermiteState(n, params), kind) == pytest.approx(want, abs=1e-10)


@pytest.mark.parametrize("m,n,want", [(2, 2, 1.0), (0, 1, 0.0), (5, 3, 0.0)])
def test_inner_product_examples(m, n, want):
    g = GaussianParams(0.3, 1.1, 0.8)
    assert abs(inner_product(HermiteState(m, g), HermiteState(n, g)) - want) <= 1e-10


def test_inner_product_against_trapezoid():
    # independent oracle: plain trapezoid on a wide uniform grid
    g = GaussianParams(0.5, 0.7, 1.3)
    x = np.linspace(g.X - 20 * g.dx, g.X + 20 * g.dx, 8001)
    for m, n in [(0, 0), (4, 4), (5, 3), (7, 2)]:
        want = np.trapezoid(np.conj(eval_phi(HermiteState(m, g), x)) * eval_phi(HermiteState(n, g), x), x)
        assert abs(inner_product(HermiteState(m, g), HermiteState(n, g)) - want) < 1e-10


def test_inner_product_rejects_mixed_families():
    with pytest.raises(FamilyMismatch):
        inner_product(HermiteState(0, GaussianParams(0, 0, 1)), HermiteState(0, GaussianParams(0, 0, 2)))


def test_quadrature_order_guard():
    with pytest.raises(QuadratureUnderResolved):
        moment(HermiteState(10, GaussianParams()), "norm_x", QuadratureSpec(order=11))


@pytest.mark.parametrize("bad", [0.0, -1.0, np.nan])
def test_params_reject_nonpositive_spread(bad):
    with pytest.raises(ValueError):
        GaussianParams(0, 0, bad)


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        HermiteState(-1, GaussianParams())


@given(st.floats(1e-3, 1e3))
def test_minimal_uncertainty_by_construction(dp):
    assert GaussianParams(dp=dp).dx * dp == pytest.approx(0.5, rel=1e-15)


@given(families, st.integers(0, 20))
def test_normalization(g, n):
    assert moment(HermiteState(n, g), "norm_x") == pytest.approx(1.0, abs=1e-10)


@given(families, st.integers(0, 10))
def test_parseval(g, n):
    s = HermiteState(n, g)
    assert moment(s, "norm_x") - moment(s, "norm_p") == pytest.approx(0.0, abs=1e-8)


@given(families, st.integers(0, 10))
def test_moment_laws(g, n):
    s = HermiteState(n, g)
    assert moment(s, "mean_x") == pytest.approx(g.X, abs=1e-8 * max(1, g.dx))
    assert moment(s, "mean_p") == pytest.approx(g.P, abs=1e-8 * max(1, g.dp))
    assert moment(s, "disp_x") == pytest.approx((2 * n + 1) * g.dx ** 2, rel=1e-8)
    assert moment(s, "disp_p") == pytest.approx((2 * n + 1) * g.dp ** 2, rel=1e-8)


@given(families, st.integers(0, 20))
def test_heisenberg_product(g, n):
    s = HermiteState(n, g)
    assert moment(s, "disp_x") * moment(s, "disp_p") == pytest.approx((2 * n + 1) ** 2 / 4, rel=1e-8)


@given(families, st.integers(0, 8))
def test_closed_form_fourier_matches_quadrature(g, n):
    s = HermiteState(n, g)
    half = 4 * np.sqrt(2 * n + 1) * g.dp
    p = np.linspace(g.P - half, g.P + half, 50)
    np.testing.assert_allclose(eval_phi_momentum(s, p), fourier_transform_numeric(s, p), atol=1e-7, rtol=0)


def test_functions_stay_finite_for_large_index():
    # far past the point where 2**n n! overflows; grid resolves the oscillations
    u = np.linspace(-50, 50, 12001)
    psi = hermite_functions(1000, u)
    assert np.all(np.isfinite(psi))
    assert np.trapezoid(psi[1000] ** 2, u) == pytest.approx(1.0, abs=1e-8)
    assert np.trapezoid(psi[1000] * psi[999], u) == pytest.approx(0.0, abs=1e-8)


def test_norm_constant_matches_evaluated_function():
    g = GaussianParams(0, 0, 0.5)
    x = 0.37
    for n in range(8):
        # closed-form prefactor times polynomial times envelope, no recurrence
        u = x / (np.sqrt(2) * g.dx)
        want = hermite_polynomial(n, u) * norm_constant(n, g.dx) * np.exp(-u * u / 2)
        assert eval_phi(HermiteState(n, g), x).real == pytest.approx(want, rel=1e-12)


def test_derivatives_against_finite_differences():
    g = GaussianParams(0.2, 1.7, 0.9)
    s = HermiteState(5, g)
    x = np.linspace(-2, 2, 9)
    h = 1e-4
    f, df, d2f = eval_phi_derivatives(s, x)
    fp, fm = eval_phi(s, x + h), eval_phi(s, x - h)
    np.testing.assert_allclose(f, eval_phi(s, x), atol=1e-15)
    np.testing.assert_allclose(df, (fp - fm) / (2 * h), atol=1e-6)
    np.testing.assert_allclose(d2f, (fp - 2 * f + fm) / h ** 2, atol=1e-5)


def test_literal_exponent_reports_mismatch():
    g = GaussianParams(0, 0, 0.5)
    s = HermiteState(0, g)
    assert moment_trapezoid(s, "norm_x") == pytest.approx(1.0, abs=1e-12)
    norm = moment_trapezoid(s, "norm_x", exponent="literal")
    disp = moment_trapezoid(s, "disp_x", exponent="literal") / norm
    # the narrower envelope halves the dispersion and loses a factor sqrt(2) in norm
    assert norm == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert disp == pytest.approx(g.dx ** 2 / 2, abs=1e-12)
