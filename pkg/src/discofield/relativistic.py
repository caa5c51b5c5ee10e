"""
Minkowski metric, the momentum dispersion-codispersion tensor and the tensor
operator ``Sigma_{mu nu}`` on a truncated Hermite product basis.

Each axis pairs ``x^mu`` with ``p_mu`` and uses ``[p_mu, x^mu] = +i``
(``p_mu = i d/dx^mu``), so every diagonal ``Sigma_{mu mu}`` is a positive
oscillator whatever metric sign is applied afterwards. Axis 0 is the slowest
index of the flattened product basis.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.sparse as sp

from .errors import DimensionCapExceeded, NonDiagonalUnsupported, SpacelikeMomentum
from .operators import INTERIOR_MARGIN, OperatorMatrix, hermiticity_residual, ladder_pair

#: Default cap on the product-basis dimension (times spinor size where relevant).
DIMENSION_CAP = 1 << 17


class Metric:
    """Fixed diagonal metric with signature (+, -, -, -)."""

    diag = np.array([1.0, -1.0, -1.0, -1.0])

    @property
    def lower(self):
        return np.diag(self.diag)

    @property
    def upper(self):
        return np.diag(1.0 / self.diag)

    def raise_index(self, v):
        return self.upper @ np.asarray(v, dtype=float)

    def lower_index(self, v):
        return self.lower @ np.asarray(v, dtype=float)

    def square(self, p):
        """``g^{mu nu} p_mu p_nu`` for a covariant four-vector."""
        p = np.asarray(p, dtype=float)
        return float(p @ self.upper @ p)


METRIC = Metric()


@dataclass(frozen=True)
class DispersionTensor:
    """Symmetric, positive definite 4x4 tensor ``B_{mu nu}`` (momentum squared)."""

    B: np.ndarray

    def __post_init__(self):
        B = np.array(self.B, dtype=float)
        if B.shape == (4,):
            B = np.diag(B)
        if B.shape != (4, 4):
            raise ValueError(f"dispersion tensor must be 4x4, got shape {B.shape}")
        if not np.allclose(B, B.T, rtol=0, atol=1e-14 * max(1.0, np.abs(B).max())):
            raise ValueError("dispersion tensor must be symmetric")
        if np.any(np.diag(B) <= 0):
            raise ValueError("dispersion tensor diagonal entries must be strictly positive")
        if np.linalg.eigvalsh(0.5 * (B + B.T)).min() <= 0:
            raise ValueError("dispersion tensor is not positive definite")
        B = 0.5 * (B + B.T)
        B.flags.writeable = False
        object.__setattr__(self, "B", B)

    @property
    def diagonal(self):
        return bool(np.all(self.B == np.diag(np.diag(self.B))))

    @property
    def widths(self):
        """Per-axis ground momentum spreads ``sqrt(B_{mu mu})``."""
        return np.sqrt(np.diag(self.B))


@dataclass(frozen=True)
class FourMeans:
    """Contravariant position means ``X^mu`` and covariant momentum means ``P_mu``."""

    X: tuple = (0.0, 0.0, 0.0, 0.0)
    P: tuple = (0.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        X = tuple(float(v) for v in self.X)
        P = tuple(float(v) for v in self.P)
        if len(X) != 4 or len(P) != 4:
            raise ValueError("four-vectors need exactly 4 components")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "P", P)


def validate_mass_shell(P, M):
    """Mass-shell residual ``g^{mu nu} P_mu P_nu - M**2``."""
    if M < 0:
        raise ValueError("mass mean must be non-negative")
    if isinstance(P, FourMeans):
        P = P.P
    return METRIC.square(P) - M ** 2


def on_shell(M, Pvec, X=(0.0, 0.0, 0.0, 0.0)):
    """FourMeans with ``P_0 = +sqrt(M**2 + |P|**2)`` for the given spatial part."""
    if M < 0:
        raise ValueError("mass mean must be non-negative")
    Pvec = np.asarray(Pvec, dtype=float)
    if Pvec.shape != (3,):
        raise ValueError("spatial momentum needs 3 components")
    P0 = np.sqrt(M ** 2 + Pvec @ Pvec)
    return FourMeans(X=tuple(X), P=(P0, *Pvec))


def require_timelike(P):
    """Raise if ``g^{mu nu} P_mu P_nu < 0``; no on-shell mass exists then."""
    s = METRIC.square(P.P if isinstance(P, FourMeans) else P)
    if s < 0:
        raise SpacelikeMomentum(f"g^(mu nu) P_mu P_nu = {s:.6g} < 0")
    return np.sqrt(s)


class ProductBasis:
    """Truncated Hermite product basis over several axes.

    Parameters
    ----------
    cutoffs : sequence of int
        Per-axis basis sizes ``N_a >= 2``.
    widths : sequence of float
        Per-axis ground momentum spreads; the ladder pair on axis ``a`` has
        ``<0|(p-P)^2|0> = widths[a]**2``.
    cap : int
        Largest allowed total dimension.
    """

    def __init__(self, cutoffs, widths, cap=DIMENSION_CAP):
        self.cutoffs = tuple(int(n) for n in cutoffs)
        self.widths = tuple(float(w) for w in widths)
        if len(self.cutoffs) != len(self.widths):
            raise ValueError("need one width per axis")
        if any(n < 2 for n in self.cutoffs):
            raise ValueError("every axis cutoff must be >= 2")
        if any(not w > 0 for w in self.widths):
            raise ValueError("axis widths must be positive")
        self.dim = int(np.prod(self.cutoffs))
        if self.dim > cap:
            raise DimensionCapExceeded(f"product basis dimension {self.dim} exceeds cap {cap}")
        self.cap = cap
        self._ops = None

    @classmethod
    def for_tensor(cls, B, cutoffs, cap=DIMENSION_CAP):
        B = B if isinstance(B, DispersionTensor) else DispersionTensor(B)
        return cls(cutoffs, B.widths, cap)

    @property
    def naxes(self):
        return len(self.cutoffs)

    def padded(self, pad):
        return ProductBasis([n + pad for n in self.cutoffs], self.widths, cap=max(self.cap, DIMENSION_CAP))

    def embed(self, op, axis):
        """Kronecker-embed a single-axis matrix into the product space (sparse)."""
        mats = [sp.identity(n, format="csr", dtype=complex) for n in self.cutoffs]
        mats[axis] = sp.csr_matrix(op, dtype=complex)
        return reduce(lambda a, b: sp.kron(a, b, format="csr"), mats)

    def axis_ops(self):
        """``[(y_a, pi_a)]``: shifted coordinate and momentum on every axis."""
        if self._ops is None:
            ops = []
            for a, (n, w) in enumerate(zip(self.cutoffs, self.widths)):
                y, pi = ladder_pair(n, w, commutator_sign=+1)
                ops.append((self.embed(y, a), self.embed(pi, a)))
            self._ops = ops
        return self._ops

    def identity(self):
        return sp.identity(self.dim, format="csr", dtype=complex)

    def interior(self, margin=INTERIOR_MARGIN):
        """Flat indices whose every axis index is at most ``N_a - 1 - margin``."""
        ranges = [np.arange(max(n - margin, 0)) for n in self.cutoffs]
        if any(len(r) == 0 for r in ranges):
            return np.array([], dtype=int)
        grids = np.meshgrid(*ranges, indexing="ij")
        return np.ravel_multi_index([g.ravel() for g in grids], self.cutoffs)

    def block(self, small):
        """Flat indices of the sub-basis with cutoffs `small` inside this basis."""
        ranges = [np.arange(n) for n in small]
        grids = np.meshgrid(*ranges, indexing="ij")
        return np.ravel_multi_index([g.ravel() for g in grids], self.cutoffs)

    def tuples(self, idx):
        return np.stack(np.unravel_index(idx, self.cutoffs), axis=-1)


def _coupled_coordinates(B, basis):
    """``Y_mu = sum_alpha B_{mu alpha} (x^alpha - X^alpha)`` as sparse matrices."""
    ops = basis.axis_ops()
    Y = []
    for mu in range(4):
        acc = None
        for alpha in range(4):
            c = B[mu, alpha]
            if c != 0:
                term = c * ops[alpha][0]
                acc = term if acc is None else acc + term
        Y.append(acc if acc is not None else sp.csr_matrix((basis.dim, basis.dim), dtype=complex))
    return Y


def sigma_tensor_matrix(mu, nu, B, basis):
    """Sparse ``Sigma_{mu nu}``, symmetrized so that it is exactly symmetric in (mu, nu)."""
    B = np.asarray(B.B if isinstance(B, DispersionTensor) else B, dtype=float)
    ops = basis.axis_ops()
    Y = _coupled_coordinates(B, basis)

    def raw(m, n):
        return 0.5 * (ops[m][1] @ ops[n][1]) + 2.0 * (Y[m] @ Y[n])

    if mu == nu:
        return raw(mu, mu).tocsr()
    return (0.5 * (raw(mu, nu) + raw(nu, mu))).tocsr()


def build_sigma_tensor(mu, nu, B, means, basis):
    """Tensor dispersion operator ``Sigma_{mu nu}`` on the product basis.

    ``1/2 (p_mu - P_mu)(p_nu - P_nu) + 2 B_{mu a} B_{nu b} (x^a - X^a)(x^b - X^b)``.
    The means only relocate the basis; the shifted-operator matrices do not
    depend on them.
    """
    m = sigma_tensor_matrix(mu, nu, B, basis)
    return OperatorMatrix(m, f"sigma_{mu}{nu}", "product-ladder",
                          {"cutoffs": basis.cutoffs, "X": means.X, "P": means.P})


def metric_sigma_matrix(B, basis):
    acc = None
    for mu in range(4):
        term = METRIC.upper[mu, mu] * sigma_tensor_matrix(mu, mu, B, basis)
        acc = term if acc is None else acc + term
    return acc.tocsr()


def contract_metric_sigma(B, means, basis):
    """``g^{mu nu} Sigma_{mu nu} = Sigma_00 - Sigma_11 - Sigma_22 - Sigma_33``."""
    return OperatorMatrix(metric_sigma_matrix(B, basis), "g.sigma", "product-ladder",
                          {"cutoffs": basis.cutoffs, "X": means.X, "P": means.P})


def closed_form_metric_spectrum(B, tuples):
    """``(2 n_0 + 1) B_00 - sum_j (2 n_j + 1) B_jj`` for each row of `tuples`."""
    B = np.asarray(B.B if isinstance(B, DispersionTensor) else B, dtype=float)
    if np.any(B != np.diag(np.diag(B))):
        raise NonDiagonalUnsupported("closed-form spectra need a diagonal dispersion tensor")
    t = np.asarray(tuples)[..., :4]
    return (2 * t + 1) @ (METRIC.diag * np.diag(B))


def interior_spectrum(op, basis, margin=INTERIOR_MARGIN):
    """Eigenvalues of the interior principal block of a product-basis operator."""
    A = op.matrix if isinstance(op, OperatorMatrix) else op
    idx = basis.interior(margin)
    sub = A[idx][:, idx]
    sub = sub.toarray() if sp.issparse(sub) else np.asarray(sub)
    return np.linalg.eigvalsh(sub)


def commutation_check(basis, means=FourMeans(), margin=INTERIOR_MARGIN):
    """Canonical commutators on the interior of the spacetime axes.

    Checks ``[p_mu, x^nu] = i delta``, ``[p_mu, p_nu] = 0`` and
    ``[x^mu, x^nu] = 0`` with the absolute operators ``x = X + y``,
    ``p = P + pi``.

    Returns
    -------
    dict
        ``{(kind, mu, nu): max_abs_residual}``.
    """
    ops = basis.axis_ops()
    I = basis.identity()
    x = [means.X[m] * I + ops[m][0] for m in range(4)]
    p = [means.P[m] * I + ops[m][1] for m in range(4)]
    idx = basis.interior(margin)

    def res(A):
        sub = A[idx][:, idx]
        return float(abs(sub).max()) if sub.nnz else 0.0

    out = {}
    for mu in range(4):
        for nu in range(4):
            target = 1j * I if mu == nu else 0 * I
            out[("px", mu, nu)] = res(p[mu] @ x[nu] - x[nu] @ p[mu] - target)
            out[("pp", mu, nu)] = res(p[mu] @ p[nu] - p[nu] @ p[mu])
            out[("xx", mu, nu)] = res(x[mu] @ x[nu] - x[nu] @ x[mu])
    return out


def is_hermitian(op, tol=1e-12):
    A = op.matrix if isinstance(op, OperatorMatrix) else op
    return hermiticity_residual(A) <= tol
