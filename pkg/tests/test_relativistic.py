import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from discofield.errors import DimensionCapExceeded, NonDiagonalUnsupported, SpacelikeMomentum
from discofield.operators import hermiticity_residual
from discofield.relativistic import (METRIC, DispersionTensor, FourMeans, ProductBasis, build_sigma_tensor,
                                     closed_form_metric_spectrum, commutation_check, contract_metric_sigma,
                                     interior_spectrum, on_shell, require_timelike, sigma_tensor_matrix,
                                     validate_mass_shell)

B4111 = DispersionTensor([4.0, 1.0, 1.0, 1.0])


def test_mass_shell_completion():
    m = on_shell(1.0, [0.6, 0.0, 0.0])
    assert m.P[0] == pytest.approx(np.sqrt(1.36), abs=1e-10)
    assert m.P[0] == pytest.approx(1.1661903789, abs=1e-10)
    assert validate_mass_shell(m, 1.0) == pytest.approx(0.0, abs=1e-14)


def test_mass_shell_massless_rest():
    m = on_shell(0.0, [0, 0, 0])
    assert m.P == (0.0, 0.0, 0.0, 0.0)
    assert validate_mass_shell(m, 0.0) == 0.0


def test_mass_shell_residual_value():
    assert validate_mass_shell(FourMeans(P=(2, 0, 0, 0)), 1.0) == pytest.approx(3.0)


def test_spacelike_rejected():
    with pytest.raises(SpacelikeMomentum):
        require_timelike((1.0, 2.0, 0.0, 0.0))


def test_metric_raise_lower_identity():
    np.testing.assert_array_equal(METRIC.upper @ METRIC.lower, np.eye(4))
    v = np.array([1.0, -2.0, 0.5, 3.0])
    np.testing.assert_array_equal(METRIC.lower_index(METRIC.raise_index(v)), v)


@pytest.mark.parametrize("bad, msg", [
    ([1.0, -1.0, 1.0, 1.0], "positive"),
    ([[1, 0.5, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], "symmetric"),
    ([[1, 2, 0, 0], [2, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], "positive definite"),
    ([1.0, 1.0, 1.0], "4x4"),
])
def test_dispersion_tensor_validation(bad, msg):
    with pytest.raises(ValueError, match=msg):
        DispersionTensor(bad)


def test_dispersion_tensor_is_read_only():
    with pytest.raises(ValueError):
        B4111.B[0, 0] = 3.0


def test_product_basis_cap():
    with pytest.raises(DimensionCapExceeded):
        ProductBasis((10, 10, 10, 10), (1, 1, 1, 1), cap=9999)


def test_diagonal_component_spectrum():
    basis = ProductBasis.for_tensor(B4111, (4, 4, 4, 4))
    op = build_sigma_tensor(1, 1, B4111, FourMeans(), basis)
    idx = basis.interior()
    tup = basis.tuples(idx)
    sub = op.matrix[idx][:, idx].toarray()
    # (2 n1 + 1) B11 on the diagonal and nothing else on the interior
    np.testing.assert_allclose(np.diag(sub).real, (2 * tup[:, 1] + 1) * 1.0, atol=1e-12)
    np.testing.assert_allclose(sub - np.diag(np.diag(sub)), 0, atol=1e-12)


def test_mixed_component_ground_expectation():
    basis = ProductBasis.for_tensor(B4111, (3, 3, 3, 3))
    for mu, nu in [(0, 1), (2, 3), (1, 3)]:
        assert abs(sigma_tensor_matrix(mu, nu, B4111, basis)[0, 0]) <= 1e-15


def test_index_symmetry_exact_for_general_tensor(rng):
    A = rng.normal(size=(4, 4)) * 0.3
    B = DispersionTensor(A @ A.T + np.eye(4))
    basis = ProductBasis.for_tensor(B, (3, 3, 3, 3))
    for mu, nu in itertools.combinations(range(4), 2):
        d = sigma_tensor_matrix(mu, nu, B, basis) - sigma_tensor_matrix(nu, mu, B, basis)
        assert d.nnz == 0 or abs(d).max() == 0


@pytest.mark.parametrize("B, want", [([4, 1, 1, 1], 1.0), ([1, 1, 1, 1], -2.0)])
def test_metric_contraction_ground(B, want):
    B = DispersionTensor(B)
    basis = ProductBasis.for_tensor(B, (3, 3, 3, 3))
    op = contract_metric_sigma(B, FourMeans(), basis)
    assert op.matrix[0, 0].real == pytest.approx(want, abs=1e-14)
    assert closed_form_metric_spectrum(B, [0, 0, 0, 0]) == pytest.approx(want)
    assert hermiticity_residual(op.matrix) <= 1e-12


@given(st.lists(st.floats(0.1, 5.0), min_size=4, max_size=4))
def test_interior_spectrum_matches_closed_form(diag):
    B = DispersionTensor(diag)
    basis = ProductBasis.for_tensor(B, (3, 3, 3, 3))
    op = contract_metric_sigma(B, FourMeans(), basis)
    for margin in (2, 1):
        got = interior_spectrum(op, basis, margin)
        want = np.sort(closed_form_metric_spectrum(B, basis.tuples(basis.interior(margin))))
        np.testing.assert_allclose(got, want, atol=1e-10)


@given(st.lists(st.floats(-5, 5), min_size=8, max_size=8))
def test_mean_shift_invariance(shift):
    basis = ProductBasis.for_tensor(B4111, (3, 3, 3, 3))
    a = interior_spectrum(contract_metric_sigma(B4111, FourMeans(), basis), basis, 1)
    b = interior_spectrum(contract_metric_sigma(B4111, FourMeans(shift[:4], shift[4:]), basis), basis, 1)
    np.testing.assert_allclose(a, b, atol=1e-10)


def test_closed_form_needs_diagonal():
    B = DispersionTensor([[2, 0.1, 0, 0], [0.1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(NonDiagonalUnsupported):
        closed_form_metric_spectrum(B, [0, 0, 0, 0])


def test_commutators():
    basis = ProductBasis.for_tensor(B4111, (4, 4, 4, 4))
    res = commutation_check(basis, FourMeans((0.3, -1, 2, 0.5), (1.2, 0.1, -0.4, 0.7)))
    assert res[("px", 0, 0)] <= 1e-12
    assert res[("px", 1, 2)] <= 1e-12
    assert res[("xx", 1, 3)] <= 1e-12
    assert max(res.values()) <= 1e-12
    # the positive sign: p_0 x^0 - x^0 p_0 = +i
    ops = basis.axis_ops()
    c = (ops[0][1] @ ops[0][0] - ops[0][0] @ ops[0][1])[0, 0]
    assert c == pytest.approx(1j)
