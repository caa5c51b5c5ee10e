"""
Scalar and fermion field equations on five variables ``(x^0..x^3, tau)``.

The scalar operator is ``g^{mu nu} Sigma_{mu nu} - (m2 - M**2)``; its
separable normalizable solutions are Hermite products whose quantum numbers
satisfy the resonance condition

    (2 n_0 + 1) B_00 - sum_j (2 n_j + 1) B_jj = (2 k + 1) dm**2

(diagonal ``B`` only). The fermion operator is the first-order factor

    D = alpha^mu (p_mu - P_mu) + 2 beta^mu B_{mu nu} (x^nu - X^nu)
        - zeta (m - M) - 2 dm**2 theta (tau - T)

acting on (product basis) (x) C^32. Residuals are evaluated two ways: in the
truncated basis and pointwise from analytic Hermite derivatives.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .clifford import SPINOR_DIM, build_factor_matrices, constraint_matrix
from .errors import ConvergenceFailure, DimensionCapExceeded, NonDiagonalUnsupported, NotEvaluable, ValidationError
from .hermite import MAX_EXCITATION, GaussianParams, hermite_functions
from .mass import MassSectorParams
from .operators import DENSE_LIMIT, INTERIOR_MARGIN, OperatorMatrix
from .relativistic import (DIMENSION_CAP, METRIC, DispersionTensor, FourMeans, Metric, ProductBasis,
                           closed_form_metric_spectrum, metric_sigma_matrix, on_shell, validate_mass_shell)

NVARS = 5
MASS_SHELL_TOL = 1e-10


@dataclass(frozen=True)
class ModelConfig:
    B: DispersionTensor
    means: FourMeans
    mass: MassSectorParams
    metric: Metric = field(default=METRIC, compare=False)

    def __post_init__(self):
        if not isinstance(self.B, DispersionTensor):
            object.__setattr__(self, "B", DispersionTensor(self.B))
        r = validate_mass_shell(self.means, self.mass.M)
        if abs(r) > MASS_SHELL_TOL:
            raise ValidationError(f"mean momenta are off the mass shell: g.P.P - M^2 = {r:.3e}")

    @property
    def dm2(self):
        return self.mass.dm ** 2

    @property
    def scale(self):
        """``B_00 + sum_j B_jj + dm**2``, the residual normalization."""
        return float(np.trace(self.B.B) + self.dm2)

    def axis_params(self):
        """Per-axis Gaussian families of the five variables.

        The covariant momentum ``p_mu = i d/dx^mu`` means a state with mean
        ``P_mu`` carries the phase ``exp(-i P_mu x^mu)``; likewise
        ``exp(-i M tau)`` on the tau axis.
        """
        w = self.B.widths
        axes = [GaussianParams(self.means.X[m], -self.means.P[m], w[m]) for m in range(4)]
        axes.append(GaussianParams(self.mass.T, -self.mass.M, self.mass.dm))
        return axes

    def basis(self, cutoffs, cap=DIMENSION_CAP):
        cutoffs = tuple(cutoffs)
        if len(cutoffs) != NVARS:
            raise ValueError("five cutoffs (n0, n1, n2, n3, k) are required")
        return ProductBasis(cutoffs, [*self.B.widths, self.mass.dm], cap)


class QuantumTuple(NamedTuple):
    n0: int
    n1: int
    n2: int
    n3: int
    k: int


def _require_diagonal(B):
    if not B.diagonal:
        raise NonDiagonalUnsupported("resonance spectra need a diagonal dispersion tensor")


def resonance_residual(cfg, t):
    lhs = closed_form_metric_spectrum(cfg.B, np.array(t[:4]))
    return float(lhs - (2 * t[4] + 1) * cfg.dm2)


def resonance_enumerate(cfg, max_n, max_k=None, tol=1e-12):
    """Quantum tuples whose spacetime and mass eigenvalues coincide.

    Every spacetime index runs over ``0..max_n``; ``k`` is solved for and
    kept when it is a non-negative integer within `tol` (relative to
    :attr:`ModelConfig.scale`), optionally bounded by `max_k`.

    Returns
    -------
    list of QuantumTuple
        Lexicographic order.
    """
    _require_diagonal(cfg.B)
    b = np.diag(cfg.B.B)
    out = []
    for n in product(range(max_n + 1), repeat=4):
        lhs = float((2 * np.array(n) + 1) @ (METRIC.diag * b))
        kf = (lhs / cfg.dm2 - 1.0) / 2.0
        k = int(round(kf))
        if k < 0 or (max_k is not None and k > max_k):
            continue
        if abs(lhs - (2 * k + 1) * cfg.dm2) <= tol * max(1.0, cfg.scale):
            out.append(QuantumTuple(*n, k))
    return out


def resonance_brute_force(cfg, max_n, max_k, tol=1e-12):
    """Enumerate all ``(n0..n3, k)`` up to the bounds; oracle for :func:`resonance_enumerate`."""
    _require_diagonal(cfg.B)
    out = []
    for t in product(range(max_n + 1), range(max_n + 1), range(max_n + 1), range(max_n + 1), range(max_k + 1)):
        if abs(resonance_residual(cfg, t)) <= tol * max(1.0, cfg.scale):
            out.append(QuantumTuple(*t))
    return out


# --- pointwise evaluation -------------------------------------------------

def _axis_table(params, N, x):
    """Values and two derivatives of ``phi_0..phi_{N-1}`` on one axis.

    Returns three arrays of shape ``(len(x), N)``.
    """
    if N - 1 > MAX_EXCITATION:
        raise NotEvaluable(f"axis cutoff {N} exceeds evaluation cap")
    u = (x - params.X) / (np.sqrt(2.0) * params.dx)
    psi = hermite_functions(N - 1, u)
    c = 1.0 / np.sqrt(np.sqrt(2.0) * params.dx)
    n = np.arange(N)[:, None]
    h = c * psi
    lower = np.vstack([np.zeros_like(u)[None], psi[:-1]])
    s = 1.0 / (np.sqrt(2.0) * params.dx)
    dh = c * (np.sqrt(2.0 * n) * lower - u * psi) * s
    d2h = (u * u - 2 * n - 1) * h * s * s
    k = params.P
    ph = np.exp(1j * k * x)
    f = h * ph
    df = (dh + 1j * k * h) * ph
    d2f = (d2h + 2j * k * dh - k * k * h) * ph
    return f.T, df.T, d2f.T


def _check_points(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None]
    if pts.ndim != 2 or pts.shape[1] != NVARS:
        raise NotEvaluable(f"fields are functions of exactly {NVARS} variables, got shape {np.shape(points)}")
    return pts


class _Tables:
    def __init__(self, cfg, cutoffs, pts):
        self.tabs = [_axis_table(p, N, pts[:, a]) for a, (p, N) in enumerate(zip(cfg.axis_params(), cutoffs))]

    def contract(self, coeffs, deriv=None):
        """Evaluate the expansion with `deriv` = ``(axis, order)`` applied."""
        mats = []
        for a, t in enumerate(self.tabs):
            mats.append(t[deriv[1]] if deriv is not None and deriv[0] == a else t[0])
        letters = "abcde"
        spec = letters + ("s" if coeffs.ndim == NVARS + 1 else "")
        subs = ",".join(f"p{l}" for l in letters)
        return np.einsum(f"{spec},{subs}->p{spec[NVARS:]}", coeffs, *mats, optimize=True)


def sample_points(cfg, n=100, seed=0, corners=True):
    """Deterministic sample of five-vectors around the field's centre.

    `n` points from the product of ground-state envelopes (a counter-based
    Philox stream keyed by `seed`), followed by the 32 corners of the
    ``+-2 sigma`` hypercube when `corners` is set.
    """
    axes = cfg.axis_params()
    centre = np.array([p.X for p in axes])
    sigma = np.array([p.dx for p in axes])
    rng = np.random.Generator(np.random.Philox(key=seed))
    pts = centre + sigma * rng.standard_normal((n, NVARS))
    if corners:
        signs = np.array(list(product((-1.0, 1.0), repeat=NVARS)))
        pts = np.vstack([pts, centre + 2.0 * sigma * signs])
    return pts


def _coupled_offsets(cfg, pts):
    y = pts[:, :4] - np.array(cfg.means.X)
    return y


def scalar_lhs(cfg, coeffs, points):
    """Left-hand side of the five-variable scalar equation at `points`.

    ``{g^{mu nu}[(i d_mu - P_mu)(i d_nu - P_nu) + 4 B_{mu a} B_{nu b} y^a y^b]
    - [(i d_tau - M)^2 + 4 dm^4 (tau - T)^2]} phi``; twice the basis operator.

    Returns
    -------
    (ndarray, ndarray)
        The left-hand side and the field values.
    """
    pts = _check_points(points)
    coeffs = np.asarray(coeffs)
    T = _Tables(cfg, coeffs.shape[:NVARS], pts)
    phi = T.contract(coeffs)
    P = cfg.means.P
    out = np.zeros_like(phi, dtype=complex)
    for mu in range(4):
        d1 = T.contract(coeffs, (mu, 1))
        d2 = T.contract(coeffs, (mu, 2))
        out += METRIC.upper[mu, mu] * (-d2 - 2j * P[mu] * d1 + P[mu] ** 2 * phi)
    B = cfg.B.B
    y = _coupled_offsets(cfg, pts)
    quad = 4.0 * np.einsum("pa,ab,pb->p", y, B @ METRIC.upper @ B, y)
    out += quad * phi
    M = cfg.mass.M
    d1 = T.contract(coeffs, (4, 1))
    d2 = T.contract(coeffs, (4, 2))
    s = pts[:, 4] - cfg.mass.T
    out -= (-d2 - 2j * M * d1 + M * M * phi) + 4.0 * cfg.dm2 ** 2 * s * s * phi
    return out, phi


def _onehot(cutoffs, idx):
    c = np.zeros(cutoffs, dtype=complex)
    c[tuple(idx)] = 1.0
    return c


@dataclass
class ScalarSolution:
    """Separable candidate ``prod_mu phi_{n_mu}(x^mu) phi_k(tau)``."""

    tuple: QuantumTuple
    cfg: ModelConfig

    @property
    def coeffs(self):
        return _onehot(tuple(n + 1 for n in self.tuple), self.tuple)

    def evaluate(self, points):
        return scalar_lhs(self.cfg, self.coeffs, points)[1]


def _relative_max(res, phi, scale):
    denom = scale * float(np.max(np.abs(phi)))
    if denom == 0.0:
        return 0.0
    return float(np.max(np.abs(res))) / denom


def scalar_residual_pointwise(sol, points):
    """``max |LHS| / (scale * max |phi|)`` over `points`."""
    lhs, phi = scalar_lhs(sol.cfg, sol.coeffs, points)
    return _relative_max(lhs, phi, sol.cfg.scale)


# --- basis assembly ------------------------------------------------------

def assemble_scalar_matrix(B, dm2, basis):
    """Sparse ``g^{mu nu} Sigma_{mu nu} - 1/2 (m-M)^2 - 2 dm2**2 (tau-T)^2`` on a 5-axis basis."""
    if basis.naxes != NVARS:
        raise ValueError("scalar operator lives on a five-axis basis")
    B = np.asarray(getattr(B, "B", B), dtype=float)
    y_t, pi_t = basis.axis_ops()[4]
    return (metric_sigma_matrix(B, basis) - 0.5 * (pi_t @ pi_t) - 2.0 * dm2 ** 2 * (y_t @ y_t)).tocsr()


def assemble_scalar_operator(cfg, cutoffs, cap=DIMENSION_CAP):
    """Scalar field operator on the five-axis product basis (sparse)."""
    basis = cfg.basis(cutoffs, cap)
    m = assemble_scalar_matrix(cfg.B, cfg.dm2, basis)
    return OperatorMatrix(m, "scalar", "product-ladder", {"cutoffs": basis.cutoffs})


def scalar_interior_spectrum(cfg, cutoffs, margin=INTERIOR_MARGIN, cap=DIMENSION_CAP):
    """Interior eigenvalues and the basis tuples they belong to (diagonal ``B``)."""
    basis = cfg.basis(cutoffs, cap)
    op = assemble_scalar_matrix(cfg.B, cfg.dm2, basis)
    idx = basis.interior(margin)
    sub = op[idx][:, idx].toarray()
    return np.linalg.eigvalsh(sub), basis.tuples(idx)


def scalar_nullspace_count(cfg, cutoffs, margin=INTERIOR_MARGIN, tol=1e-10):
    w, _ = scalar_interior_spectrum(cfg, cutoffs, margin)
    return int(np.sum(np.abs(w) <= tol)), w


def assemble_fermion_matrix(B, dm2, basis, f=None, mass_sign=-1):
    """Sparse first-order operator on (product basis) (x) C^32.

    ``mass_sign=-1`` gives the field operator ``D``; ``+1`` gives its
    factorization partner.
    """
    if basis.naxes != NVARS:
        raise ValueError("fermion operator lives on a five-axis basis")
    if basis.dim * SPINOR_DIM > basis.cap:
        raise DimensionCapExceeded(f"spinor dimension {basis.dim * SPINOR_DIM} exceeds cap {basis.cap}")
    f = build_factor_matrices() if f is None else f
    B = np.asarray(getattr(B, "B", B), dtype=float)
    ops = basis.axis_ops()
    k = lambda A, S: sp.kron(A, sp.csr_matrix(S), format="csr")
    D = None
    for mu in range(4):
        term = k(ops[mu][1], f.alpha[mu])
        D = term if D is None else D + term
        for nu in range(4):
            if B[mu, nu] != 0:
                D = D + 2.0 * B[mu, nu] * k(ops[nu][0], f.beta[mu])
    y_t, pi_t = ops[4]
    D = D + mass_sign * (k(pi_t, f.zeta) + 2.0 * dm2 * k(y_t, f.theta))
    return D.tocsr()


class FermionOperator(NamedTuple):
    op: OperatorMatrix
    singular_values: np.ndarray | None
    singular_vectors: np.ndarray | None


def smallest_singular(A, k=1, tol=1e-8, maxiter=10_000):
    """`k` smallest singular values (ascending) and right singular vectors (columns)."""
    n = A.shape[1]
    if n <= DENSE_LIMIT:
        M = A.toarray() if sp.issparse(A) else np.asarray(A)
        if M.shape[0] > 2 * n:
            # tall matrix: same singular values and right vectors from its triangular factor
            M = scipy.linalg.qr(M, mode="r", overwrite_a=True, check_finite=False)[0][:n]
        _, s, vh = np.linalg.svd(M, full_matrices=False)
        return s[::-1][:k], vh[::-1][:k].conj().T
    try:
        _, s, vh = spla.svds(sp.csr_matrix(A), k=k, which="SM", tol=tol, maxiter=maxiter, random_state=0)
    except (spla.ArpackNoConvergence, spla.ArpackError) as exc:
        raise ConvergenceFailure(str(exc)) from exc
    order = np.argsort(s)
    return s[order], vh[order].conj().T


def restricted_fermion_matrix(B, dm2, basis, f=None):
    """Exact fermion operator on the span of `basis`, with its image in the basis padded by one.

    Rectangular ``(dim_pad * 32) x (dim * 32)``; its singular values are true
    L2 residual norms, unlike those of the square truncation.
    """
    pad = basis.padded(1)
    Dp = assemble_fermion_matrix(B, dm2, pad, f)
    blk = pad.block(basis.cutoffs)
    cols = (blk[:, None] * SPINOR_DIM + np.arange(SPINOR_DIM)).ravel()
    return Dp[:, cols].tocsc(), pad


def assemble_fermion_operator(cfg, cutoffs, n_singular=0, mode="restricted", cap=DIMENSION_CAP):
    """Fermion field operator; optionally its `n_singular` smallest singular triplets.

    Parameters
    ----------
    mode : {"restricted", "galerkin"}
        ``"galerkin"`` takes singular values of the square truncated matrix.
        ``"restricted"`` keeps the part of the image leaving the truncated
        space, so each singular value is the exact residual norm of its
        singular vector.
    """
    basis = cfg.basis(cutoffs, cap)
    D = assemble_fermion_matrix(cfg.B, cfg.dm2, basis)
    op = OperatorMatrix(D, "fermion", "product-ladder(x)spinor", {"cutoffs": basis.cutoffs})
    if not n_singular:
        return FermionOperator(op, None, None)
    if mode == "galerkin":
        s, v = smallest_singular(D, n_singular)
    elif mode == "restricted":
        R, _ = restricted_fermion_matrix(cfg.B, cfg.dm2, basis)
        s, v = smallest_singular(R, n_singular)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return FermionOperator(op, s, v)


def non_hermiticity(D):
    """``||D - D^dag||_F / ||D||_F``."""
    num = spla.norm(D - D.conj().T) if sp.issparse(D) else np.linalg.norm(D - D.conj().T)
    den = spla.norm(D) if sp.issparse(D) else np.linalg.norm(D)
    return float(num / den) if den else 0.0


@dataclass
class SpinorCandidate:
    """32-component field of five variables, as coefficients over the product basis."""

    coeffs: np.ndarray
    cfg: ModelConfig

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != NVARS + 1 or c.shape[-1] != SPINOR_DIM:
            raise ValueError(f"coefficients must have shape cutoffs + ({SPINOR_DIM},)")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        self.coeffs = c

    @classmethod
    def from_vector(cls, v, cfg, cutoffs):
        return cls(np.asarray(v).reshape(tuple(cutoffs) + (SPINOR_DIM,)), cfg)

    @property
    def cutoffs(self):
        return self.coeffs.shape[:NVARS]

    @property
    def degenerate(self):
        return not np.any(self.coeffs)

    def vector(self):
        return self.coeffs.reshape(-1)

    def evaluate(self, points):
        pts = _check_points(points)
        return _Tables(self.cfg, self.cutoffs, pts).contract(self.coeffs)


def fermion_lhs(cand, points, f=None):
    """Left-hand side of the fermion equation at `points`, shape ``(npts, 32)``."""
    f = build_factor_matrices() if f is None else f
    cfg = cand.cfg
    pts = _check_points(points)
    T = _Tables(cfg, cand.cutoffs, pts)
    c = cand.coeffs
    psi = T.contract(c)
    P = cfg.means.P
    out = np.zeros_like(psi)
    for mu in range(4):
        d1 = T.contract(c, (mu, 1))
        out += (1j * d1 - P[mu] * psi) @ f.alpha[mu].T
    y = _coupled_offsets(cfg, pts)
    By = y @ cfg.B.B.T
    for mu in range(4):
        out += 2.0 * By[:, mu, None] * (psi @ f.beta[mu].T)
    d1t = T.contract(c, (4, 1))
    s = pts[:, 4] - cfg.mass.T
    out -= (1j * d1t - cfg.mass.M * psi) @ f.zeta.T
    out -= 2.0 * cfg.dm2 * s[:, None] * (psi @ f.theta.T)
    return out, psi


def fermion_residual_pointwise(cand, points, f=None):
    """``max |LHS| / (scale * max |psi|)``; exactly 0 for the zero candidate."""
    if cand.degenerate:
        _check_points(points)
        return 0.0
    lhs, psi = fermion_lhs(cand, points, f)
    return _relative_max(lhs, psi, cand.cfg.scale)


def padded_image(A_pad, basis, pad_basis, v, inner=1):
    """Apply a padded-basis operator to a vector living on the smaller `basis`.

    Returns the image as a coefficient tensor over the padded cutoffs.
    """
    idx = pad_basis.block(basis.cutoffs)
    if inner > 1:
        idx = (idx[:, None] * inner + np.arange(inner)).ravel()
    w = np.zeros(A_pad.shape[0], dtype=complex)
    w[idx] = v
    shape = pad_basis.cutoffs + ((inner,) if inner > 1 else ())
    return (A_pad @ w).reshape(shape)


def expansion_values(cfg, coeffs, points):
    """Evaluate a coefficient tensor (scalar or spinor) at `points`."""
    pts = _check_points(points)
    coeffs = np.asarray(coeffs)
    return _Tables(cfg, coeffs.shape[:NVARS], pts).contract(coeffs)


def importance_l2_ratio(cfg, values, reference, points):
    """Self-normalized importance estimate of ``||values|| / ||reference||``.

    Points are assumed drawn from the product envelope of :func:`sample_points`
    (corners excluded); weights are the inverse sampling density.
    """
    axes = cfg.axis_params()
    centre = np.array([p.X for p in axes])
    sigma = np.array([p.dx for p in axes])
    z = (np.asarray(points) - centre) / sigma
    logw = 0.5 * np.sum(z * z, axis=1)
    w = np.exp(logw - logw.max())
    axes_sum = tuple(range(1, np.ndim(values)))
    num = np.sum(w * np.sum(np.abs(values) ** 2, axis=axes_sum))
    den = np.sum(w * np.sum(np.abs(reference) ** 2, axis=axes_sum))
    return float(np.sqrt(num / den)) if den else 0.0


CONSISTENCY_FLOOR = 1e-12


def fermion_consistency(cfg, cutoffs=(2, 2, 2, 2, 2), seed=0, n_points=100, which=0, f=None):
    """Compare the pointwise residual of a smallest-singular-vector candidate with its singular value.

    Returns
    -------
    dict
        ``singular_value`` (restricted, relative to ``scale``),
        ``pointwise`` (:func:`fermion_residual_pointwise`),
        ``importance_l2`` (sampled L2 ratio, relative to ``scale``),
        ``reconstruction_error``: max difference between the analytic
        pointwise left-hand side and the padded basis image evaluated at the
        same points, relative to its size,
        ``ratio``: worst factor between singular value and the two pointwise
        measures, each floored at :data:`CONSISTENCY_FLOOR`.
    """
    basis = cfg.basis(cutoffs)
    R, pad = restricted_fermion_matrix(cfg.B, cfg.dm2, basis, f)
    s, V = smallest_singular(R, which + 1)
    v = V[:, which]
    cand = SpinorCandidate.from_vector(v, cfg, cutoffs)
    pts = sample_points(cfg, n_points, seed)
    lhs, psi = fermion_lhs(cand, pts, f)
    image = (R @ v).reshape(pad.cutoffs + (SPINOR_DIM,))
    rec = expansion_values(cfg, image, pts)
    sv = float(s[which]) / cfg.scale
    pw = _relative_max(lhs, psi, cfg.scale)
    il2 = importance_l2_ratio(cfg, lhs[:n_points], psi[:n_points], pts[:n_points]) / cfg.scale
    fl = CONSISTENCY_FLOOR
    ratio = max(max(a, fl) / max(sv, fl) for a in (pw, il2))
    ratio = max(ratio, max(max(sv, fl) / max(a, fl) for a in (pw, il2)))
    denom = max(float(np.abs(lhs).max()), 1.0)
    return {
        "singular_value": sv,
        "pointwise": pw,
        "importance_l2": il2,
        "reconstruction_error": float(np.abs(lhs - rec).max()) / denom,
        "ratio": float(ratio),
        "seed": seed,
    }


# --- factorization --------------------------------------------------------

def factorization_product_residual(B, dm2, basis, f=None):
    """Check ``1/2 D1 D2 - (scalar op) (x) I32`` against the constant ``-i (beta alpha B - theta zeta dm2)``.

    Products are formed on a basis padded by one level per axis and then
    restricted to `basis`, which makes every matrix element exact for
    operators linear in the ladder operators.

    Returns
    -------
    dict
        ``off_block``: largest entry coupling different basis tuples;
        ``diag_spread``: largest deviation between diagonal blocks;
        ``constant_error``: distance to the predicted constant block;
        ``constant_norm``: Frobenius norm of that constant (32x32).
    """
    f = build_factor_matrices() if f is None else f
    B = np.asarray(getattr(B, "B", B), dtype=float)
    pad = basis.padded(1)
    D1 = assemble_fermion_matrix(B, dm2, pad, f, mass_sign=+1)
    D2 = assemble_fermion_matrix(B, dm2, pad, f, mass_sign=-1)
    S = assemble_scalar_matrix(B, dm2, pad)
    blk = pad.block(basis.cutoffs)
    sidx = (blk[:, None] * SPINOR_DIM + np.arange(SPINOR_DIM)).ravel()
    prod = 0.5 * (D1[sidx] @ D2[:, sidx])
    scal = sp.kron(S[blk][:, blk], sp.identity(SPINOR_DIM, format="csr"), format="csr")
    diff = (prod - scal).toarray()
    nb = len(blk)
    d4 = diff.reshape(nb, SPINOR_DIM, nb, SPINOR_DIM)
    diag_blocks = d4[np.arange(nb), :, np.arange(nb), :]
    mask = ~np.eye(nb, dtype=bool)
    off = np.abs(d4).max(axis=(1, 3))[mask]
    const = -1j * constraint_matrix(f, B, dm2)
    return {
        "off_block": float(off.max()) if off.size else 0.0,
        "diag_spread": float(np.abs(diag_blocks - diag_blocks[0]).max()),
        "constant_error": float(np.abs(diag_blocks - const).max()),
        "constant_norm": float(np.linalg.norm(const)),
        "dimension": nb * SPINOR_DIM,
    }


def factorization_product_check(cfg, cutoffs=(2, 2, 2, 2, 2), cap=DIMENSION_CAP):
    basis = cfg.basis(cutoffs, cap)
    if basis.dim * SPINOR_DIM > cap:
        raise DimensionCapExceeded(f"spinor dimension {basis.dim * SPINOR_DIM} exceeds cap {cap}")
    return factorization_product_residual(cfg.B, cfg.dm2, basis)


def kg_baseline_residual(p, m):
    """``|m**2 - p.p|``: the Klein-Gordon operator on ``exp(-i p.x)`` divided by the wave."""
    return abs(m * m - METRIC.square(p))


def random_config(rng, diagonal=False):
    """A random valid model: SPD ``B``, ``dm`` in [0.3, 1.5], on-shell means."""
    if diagonal:
        B = np.diag(rng.uniform(0.2, 2.0, 4))
    else:
        A = rng.normal(size=(4, 4)) * 0.3
        B = A @ A.T + np.diag(rng.uniform(0.3, 1.5, 4))
    M = rng.uniform(0.5, 2.0)
    Pvec = rng.normal(size=3) * 0.5
    X = rng.normal(size=4)
    means = on_shell(M, Pvec, X)
    return ModelConfig(DispersionTensor(B), means, MassSectorParams(M, rng.normal(), rng.uniform(0.3, 1.5)))
