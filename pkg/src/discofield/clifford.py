"""
Gamma matrices and the 32x32 factor matrices of the first-order factorization.

Dirac representation::

    gamma^0 = [[I, 0], [0, -I]]
    gamma^j = [[0, sigma_j], [-sigma_j, 0]]
    gamma^5 = i gamma^0 gamma^1 gamma^2 gamma^3 = [[0, I], [I, 0]]

Factor matrices (Kronecker order: first factor slowest)::

    alpha^mu = gamma^mu (x) I4 (x) I2
    beta^mu  = gamma^5  (x) gamma^mu (x) I2
    zeta     = I4 (x) I4 (x) diag(1, -1)
    theta    = I4 (x) I4 (x) [[0, 1], [1, 0]]
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .relativistic import METRIC

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
SPINOR_DIM = 32


def kron(*mats):
    return reduce(np.kron, mats)


@dataclass(frozen=True)
class GammaSet:
    gamma: tuple
    gamma5: np.ndarray

    def conjugated(self, U):
        """Same algebra in another representation, ``U gamma U^dag``."""
        Ud = U.conj().T
        return GammaSet(tuple(U @ g @ Ud for g in self.gamma), U @ self.gamma5 @ Ud)


@dataclass(frozen=True)
class FactorMatrices:
    alpha: tuple
    beta: tuple
    zeta: np.ndarray
    theta: np.ndarray

    def all(self):
        return {**{f"alpha{m}": a for m, a in enumerate(self.alpha)},
                **{f"beta{m}": b for m, b in enumerate(self.beta)},
                "zeta": self.zeta, "theta": self.theta}


def build_gammas():
    Z = np.zeros((2, 2), dtype=complex)
    g0 = np.block([[I2, Z], [Z, -I2]])
    gj = [np.block([[Z, s], [-s, Z]]) for s in SIGMA]
    gamma = (g0, *gj)
    g5 = 1j * gamma[0] @ gamma[1] @ gamma[2] @ gamma[3]
    return GammaSet(gamma, g5)


def anticomm(a, b):
    return a @ b + b @ a


def comm(a, b):
    return a @ b - b @ a


def gamma_residuals(g):
    """Max residuals of the Clifford relations of a GammaSet."""
    cliff = max(np.abs(anticomm(g.gamma[m], g.gamma[n]) - 2 * METRIC.upper[m, n] * I4).max()
                for m in range(4) for n in range(4))
    g5sq = np.abs(g.gamma5 @ g.gamma5 - I4).max()
    g5anti = max(np.abs(anticomm(g.gamma5, gm)).max() for gm in g.gamma)
    return {"clifford": float(cliff), "gamma5_square": float(g5sq), "gamma5_anticomm": float(g5anti)}


def build_factor_matrices(g=None):
    g = build_gammas() if g is None else g
    zdiag = np.diag([1.0, -1.0]).astype(complex)
    xoff = np.array([[0, 1], [1, 0]], dtype=complex)
    alpha = tuple(kron(gm, I4, I2) for gm in g.gamma)
    beta = tuple(kron(g.gamma5, gm, I2) for gm in g.gamma)
    return FactorMatrices(alpha, beta, kron(I4, I4, zdiag), kron(I4, I4, xoff))


#: Relation identifiers, in report order, with a short description.
RELATIONS = (
    ("alpha_anticomm", "{alpha^mu, alpha^nu} = 2 g^{mu nu}"),
    ("beta_anticomm", "{beta^mu, beta^nu} = 2 g^{mu nu}"),
    ("alpha_beta_anticomm", "{alpha^mu, beta^nu} = 0"),
    ("zeta_square", "zeta^2 = 1"),
    ("theta_square", "theta^2 = 1"),
    ("zeta_theta_anticomm", "zeta theta + theta zeta = 0"),
    ("zeta_alpha_comm", "[zeta, alpha^mu] = 0"),
    ("theta_alpha_comm", "[theta, alpha^mu] = 0"),
    ("zeta_beta_comm", "[zeta, beta^mu] = 0"),
    ("theta_beta_comm", "[theta, beta^mu] = 0"),
)


def relation_report(f):
    """Max-abs residual of each of the ten algebraic relations.

    Returns
    -------
    dict
        ``{relation_id: residual}`` in :data:`RELATIONS` order.
    """
    I = np.eye(SPINOR_DIM)
    g = METRIC.upper
    r = lambda mats: float(max(np.abs(m).max() for m in mats))
    rng4 = range(4)
    return {
        "alpha_anticomm": r(anticomm(f.alpha[m], f.alpha[n]) - 2 * g[m, n] * I for m in rng4 for n in rng4),
        "beta_anticomm": r(anticomm(f.beta[m], f.beta[n]) - 2 * g[m, n] * I for m in rng4 for n in rng4),
        "alpha_beta_anticomm": r(anticomm(f.alpha[m], f.beta[n]) for m in rng4 for n in rng4),
        "zeta_square": r([f.zeta @ f.zeta - I]),
        "theta_square": r([f.theta @ f.theta - I]),
        "zeta_theta_anticomm": r([anticomm(f.zeta, f.theta)]),
        "zeta_alpha_comm": r(comm(f.zeta, a) for a in f.alpha),
        "theta_alpha_comm": r(comm(f.theta, a) for a in f.alpha),
        "zeta_beta_comm": r(comm(f.zeta, b) for b in f.beta),
        "theta_beta_comm": r(comm(f.theta, b) for b in f.beta),
    }


def constraint_matrix(f, B, dm2):
    """``sum_{mu nu} beta^mu alpha^nu B_{mu nu} - theta zeta dm2`` (no metric raising)."""
    B = np.asarray(getattr(B, "B", B), dtype=float)
    acc = -dm2 * (f.theta @ f.zeta)
    for m in range(4):
        for n in range(4):
            if B[m, n] != 0:
                acc = acc + B[m, n] * (f.beta[m] @ f.alpha[n])
    return acc


def constraint_residual(f, B, dm2):
    """Frobenius and max-abs norms of :func:`constraint_matrix`."""
    if dm2 < 0:
        raise ValueError("dm2 must be non-negative")
    C = constraint_matrix(f, B, dm2)
    return {"frobenius": float(np.linalg.norm(C)), "max_abs": float(np.abs(C).max())}


_PAIRS = [(m, n) for m in range(4) for n in range(m, 4)]


def _unpack(v):
    B = np.zeros((4, 4))
    for c, (m, n) in zip(v[:10], _PAIRS):
        B[m, n] = B[n, m] = c
    return B, float(v[10])


def constraint_map(f):
    """Real ``2048 x 11`` matrix of the linear map ``(B entries, dm2) -> constraint matrix``.

    Columns: the 10 independent entries of symmetric ``B`` in row-major upper
    triangular order, then ``dm2``. Rows: real parts then imaginary parts of
    the flattened 32x32 image.
    """
    cols = []
    for k in range(11):
        e = np.zeros(11)
        e[k] = 1.0
        B, dm2 = _unpack(e)
        C = constraint_matrix(f, B, dm2).ravel()
        cols.append(np.concatenate([C.real, C.imag]))
    return np.column_stack(cols)


def constraint_solve(f=None):
    """Singular values of the constraint map and its unit-norm minimizer.

    Returns
    -------
    dict
        ``singular_values`` (descending), ``minimizer`` (11-vector),
        ``B`` and ``dm2`` unpacked from it, and ``residual`` recomputed
        through :func:`constraint_residual`.
    """
    f = build_factor_matrices() if f is None else f
    A = constraint_map(f)
    _, s, vt = np.linalg.svd(A, full_matrices=False)
    v = vt[-1]
    B, dm2 = _unpack(v)
    if dm2 < 0:
        v, B, dm2 = -v, -B, -dm2
    return {"singular_values": s, "minimizer": v, "B": B, "dm2": dm2,
            "residual": constraint_residual(f, B, dm2)["frobenius"]}


def dirac_baseline_residual(p, m, g=None):
    """Smallest singular value of ``gamma^mu p_mu - m``.

    Also checks the factorization ``(gamma.p + m)(gamma.p - m) = (p.p - m**2) I``
    and returns its residual as the second item.
    """
    g = build_gammas() if g is None else g
    p = np.asarray(p, dtype=float)
    slash = sum(p[k] * g.gamma[k] for k in range(4))
    D = slash - m * I4
    smin = float(np.linalg.svd(D, compute_uv=False)[-1])
    fac = (slash + m * I4) @ (slash - m * I4) - (METRIC.square(p) - m * m) * I4
    return smin, float(np.abs(fac).max())
