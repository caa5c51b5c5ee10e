import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import unitary_group

from discofield.clifford import (I4, RELATIONS, SPINOR_DIM, anticomm, build_factor_matrices, build_gammas,
                                 constraint_map, constraint_residual, constraint_solve,
                                 dirac_baseline_residual, gamma_residuals, relation_report)

F = build_factor_matrices()
sym4 = st.lists(st.floats(-3, 3), min_size=10, max_size=10)


def _sym(v):
    B = np.zeros((4, 4))
    B[np.triu_indices(4)] = v
    return B + np.triu(B, 1).T


def test_gamma_examples():
    g = build_gammas()
    np.testing.assert_array_equal(anticomm(g.gamma[0], g.gamma[0]), 2 * I4)
    np.testing.assert_array_equal(anticomm(g.gamma[1], g.gamma[2]), 0 * I4)
    np.testing.assert_allclose(g.gamma5 @ g.gamma5, I4, atol=1e-15)
    assert max(gamma_residuals(g).values()) <= 1e-14


def test_factor_matrix_shapes_and_structure():
    for name, m in F.all().items():
        assert m.shape == (SPINOR_DIM, SPINOR_DIM), name
        assert abs(np.trace(m)) <= 1e-14, name
    np.testing.assert_array_equal(np.diag(F.zeta), np.tile([1.0, -1.0], 16))
    assert np.count_nonzero(F.zeta - np.diag(np.diag(F.zeta))) == 0
    np.testing.assert_array_equal(F.alpha[0], F.alpha[0].conj().T)
    for j in (1, 2, 3):
        np.testing.assert_array_equal(F.alpha[j], -F.alpha[j].conj().T)


def test_squares():
    I = np.eye(SPINOR_DIM)
    np.testing.assert_allclose(F.alpha[0] @ F.alpha[0], I, atol=1e-15)
    for j in (1, 2, 3):
        np.testing.assert_allclose(F.alpha[j] @ F.alpha[j], -I, atol=1e-15)
    np.testing.assert_allclose(F.zeta @ F.zeta, I)
    np.testing.assert_allclose(F.theta @ F.theta, I)


def test_selected_relations_vanish():
    assert np.abs(anticomm(F.alpha[0], F.alpha[1])).max() == 0
    assert np.abs(F.zeta @ F.theta + F.theta @ F.zeta).max() == 0
    assert np.abs(F.theta @ F.beta[2] - F.beta[2] @ F.theta).max() == 0


def test_ten_relations_hold():
    rep = relation_report(F)
    assert list(rep) == [r for r, _ in RELATIONS]
    assert len(rep) == 10
    assert max(rep.values()) <= 1e-13


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_relations_are_representation_independent(seed):
    U = unitary_group.rvs(4, random_state=seed)
    g = build_gammas().conjugated(U)
    assert max(gamma_residuals(g).values()) <= 1e-13
    rep = relation_report(build_factor_matrices(g))
    assert max(rep.values()) <= 1e-13


def test_constraint_examples():
    assert constraint_residual(F, np.zeros((4, 4)), 0.0)["frobenius"] == 0.0
    r = constraint_residual(F, np.diag([1, 0.25, 0.25, 0.25]), 0.25)
    assert r["frobenius"] == pytest.approx(np.sqrt(40), abs=1e-12)


@given(st.lists(st.floats(0.01, 5), min_size=4, max_size=4), st.floats(0, 5))
def test_frobenius_formula_for_diagonal(diag, dm2):
    fro = constraint_residual(F, np.diag(diag), dm2)["frobenius"]
    want = 32 * (np.sum(np.square(diag)) + dm2 ** 2)
    assert fro ** 2 == pytest.approx(want, rel=1e-10)


@given(sym4, st.floats(0, 3), st.floats(0.01, 10))
def test_scaling(v, dm2, c):
    B = _sym(v)
    a = constraint_residual(F, c * B, c * dm2)["frobenius"]
    b = constraint_residual(F, B, dm2)["frobenius"]
    assert a == pytest.approx(c * b, rel=1e-12, abs=1e-12)


@given(sym4, sym4, st.floats(0, 3), st.floats(0, 3))
def test_triangle(v1, v2, d1, d2):
    B1, B2 = _sym(v1), _sym(v2)
    lhs = constraint_residual(F, B1 + B2, d1 + d2)["frobenius"]
    rhs = constraint_residual(F, B1, d1)["frobenius"] + constraint_residual(F, B2, d2)["frobenius"]
    assert lhs <= rhs + 1e-10


def test_negative_mass_dispersion_rejected():
    with pytest.raises(ValueError):
        constraint_residual(F, np.eye(4), -1.0)


def test_constraint_map_gram_matrix():
    # products of distinct Clifford monomials are trace-orthogonal, so the Gram
    # matrix is diagonal: 32 for B_mm and dm2, 64 for each symmetric off-diagonal pair
    A = constraint_map(F)
    assert A.shape == (2048, 11)
    diag_cols = [0, 4, 7, 9, 10]
    want = np.diag([32.0 if k in diag_cols else 64.0 for k in range(11)])
    np.testing.assert_allclose(A.T @ A, want, atol=1e-12)


def test_constraint_solve():
    sol = constraint_solve()
    s = sol["singular_values"]
    assert len(sol["minimizer"]) == 11
    assert s[-1] > 0.1
    assert s[-1] == pytest.approx(np.sqrt(32), abs=1e-10)
    assert sol["residual"] == pytest.approx(s[-1], abs=1e-12)


@pytest.mark.parametrize("p, m, want", [
    ((1, 0, 0, 0), 1.0, 0.0),
    ((np.sqrt(2), 0, 0, 1), 1.0, 0.0),
    ((2, 0, 0, 0), 1.0, 1.0),
])
def test_dirac_baseline(p, m, want):
    smin, fac = dirac_baseline_residual(p, m)
    assert smin == pytest.approx(want, abs=1e-12)
    assert fac <= 1e-12
