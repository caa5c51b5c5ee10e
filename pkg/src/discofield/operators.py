"""
Finite matrix representations of the 1D dispersion operator.

Two representations are kept side by side and used as oracles for each
other:

* the truncated Hermite (ladder) basis ``|0>, ..., |N-1>`` adapted to one
  Gaussian family, where the dispersion operator is diagonal;
* a uniform coordinate grid with a central second-order stencil.

Products of truncated ladder matrices are wrong only on the last basis
index; spectral assertions are made on the interior block ``0 .. N-1-margin``
(margin 2 by default).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceFailure, GridTooCoarse, NotHermitian
from .hermite import GaussianParams

#: Dense eigensolver is used up to this dimension, ARPACK above.
DENSE_LIMIT = 4096
INTERIOR_MARGIN = 2


@dataclass(frozen=True)
class BasisSpec:
    N: int

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("basis cutoff must be >= 2")


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``points`` nodes on ``center +- half_width * dx``."""

    half_width: float = 8.0
    points: int = 1024
    center: float | None = None

    def __post_init__(self):
        if self.half_width < 6:
            raise ValueError("grid half-width must be >= 6 ground spreads")
        if self.points < 64:
            raise ValueError("grid needs at least 64 points")


@dataclass
class OperatorMatrix:
    """A square matrix with a note of what it represents."""

    matrix: object
    label: str
    representation: str = "ladder"
    params: dict = field(default_factory=dict)
    grid: np.ndarray | None = None

    @property
    def shape(self):
        return self.matrix.shape

    def dense(self):
        m = self.matrix
        return m.toarray() if sp.issparse(m) else np.asarray(m)


def annihilation(N):
    """Truncated annihilation operator ``a`` with ``a|n> = sqrt(n)|n-1>``."""
    return np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1)


def ladder_pair(N, dp, commutator_sign=-1):
    """Shifted coordinate and momentum ``(x - X, p - P)`` in the ladder basis.

    ``x - X = dx (a + a^dag)`` and the momentum is chosen so that
    ``[p - P, x - X] = commutator_sign * i`` (away from the truncation edge).
    ``commutator_sign=-1`` is the Schrodinger convention ``p = -i d/dx``;
    ``+1`` is the covariant convention ``p = +i d/dx``.
    """
    a = annihilation(N)
    ad = a.T
    dx = 1.0 / (2.0 * dp)
    y = dx * (a + ad)
    pi = -commutator_sign * 1j * dp * (ad - a)
    return y.astype(complex), pi


def interior(N, margin=INTERIOR_MARGIN):
    """Indices of the interior block of a size-`N` truncated basis."""
    return np.arange(max(N - margin, 0))


def hermiticity_residual(A):
    """Max-abs entry of ``A - A^dag`` (dense or sparse)."""
    if sp.issparse(A):
        D = (A - A.conj().T).tocsr()
        return float(abs(D).max()) if D.nnz else 0.0
    A = np.asarray(A)
    return float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0


def build_xp_ladder(params, basis):
    """``(x - X, p - P)`` on the truncated basis adapted to `params`.

    Returns
    -------
    tuple of OperatorMatrix
        Ground-state variances are ``dx**2`` and ``dp**2``;
        ``[p - P, x - X] = -i`` on the interior.
    """
    y, pi = ladder_pair(basis.N, params.dp, commutator_sign=-1)
    meta = {"X": params.X, "P": params.P, "dp": params.dp, "N": basis.N}
    return (OperatorMatrix(y, "x-X", "ladder", meta),
            OperatorMatrix(pi, "p-P", "ladder", meta))


def build_sigma_1d(params, basis):
    """Momentum dispersion operator ``1/2 [(p-P)^2 + (dp/dx)^2 (x-X)^2]``.

    Assembled from the truncated ladder matrices, so it is exactly diagonal
    with entries ``(2n+1) dp**2`` except on the last index.
    """
    xo, po = build_xp_ladder(params, basis)
    y, pi = xo.matrix, po.matrix
    ratio = (params.dp / params.dx) ** 2
    sigma = 0.5 * (pi @ pi + ratio * (y @ y))
    return OperatorMatrix(sigma, "sigma", "ladder", dict(xo.params))


def build_p2_mean(params, basis):
    """Quadratic momentum mean ``P**2 + sigma``."""
    s = build_sigma_1d(params, basis)
    m = params.P ** 2 * np.eye(basis.N) + s.matrix
    return OperatorMatrix(m, "p2_mean", "ladder", dict(s.params))


def grid_nodes(center, half_width, points):
    return np.linspace(center - half_width, center + half_width, points)


def gauge_kinetic(points, h, carrier):
    """Stencil for ``-(d/dx - i carrier)^2`` with Dirichlet ends.

    The hopping terms carry the phase ``exp(-+ i carrier h)``, so the matrix is
    unitarily equivalent to the plain second-difference Laplacian for every
    carrier. Hermitian by construction.
    """
    off = -np.exp(-1j * carrier * h) / h ** 2 * np.ones(points - 1)
    return sp.diags([off.conj(), np.full(points, 2.0 / h ** 2), off], [-1, 0, 1],
                    format="csr", dtype=complex)


def _grid_oscillator(center, width, coupling, carrier, grid, label, meta):
    L = grid.half_width * width
    x = grid_nodes(center, L, grid.points)
    h = x[1] - x[0]
    if h > width / 4:
        raise GridTooCoarse(f"grid spacing {h:.4g} exceeds a quarter ground spread {width / 4:.4g}")
    K = gauge_kinetic(grid.points, h, carrier)
    V = sp.diags(coupling * (x - center) ** 2, 0, dtype=complex)
    return OperatorMatrix((0.5 * (K + V)).tocsr(), label, "grid", meta, grid=x)


def build_sigma_grid(params, grid=GridSpec()):
    """Dispersion operator on a uniform coordinate grid (``p = -i d/dx``).

    Raises
    ------
    GridTooCoarse
        If the spacing exceeds ``dx / 4``.
    """
    center = params.X if grid.center is None else grid.center
    meta = {"X": params.X, "P": params.P, "dp": params.dp, "points": grid.points}
    return _grid_oscillator(center, params.dx, 4 * params.dp ** 4, params.P, grid, "sigma", meta)


def eigensolve(op, k, tol=1e-10, maxiter=10_000):
    """The `k` smallest eigenpairs of a Hermitian operator.

    Dense ``eigh`` up to :data:`DENSE_LIMIT`, ARPACK (``eigsh`` in shift-invert
    mode) above.

    Returns
    -------
    list of (float, ndarray)
        Ascending eigenvalues with orthonormal eigenvectors.
    """
    A = op.matrix if isinstance(op, OperatorMatrix) else op
    n = A.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    if n <= DENSE_LIMIT:
        A = A.toarray() if sp.issparse(A) else np.asarray(A)
        scale = max(1.0, float(np.max(np.abs(A))))
        if hermiticity_residual(A) > 1e-10 * scale:
            raise NotHermitian("operator is not Hermitian within 1e-10")
        w, v = scipy.linalg.eigh(A, subset_by_index=[0, k - 1])
    else:
        A = sp.csr_matrix(A)
        scale = max(1.0, float(abs(A).max()))
        if abs(A - A.conj().T).max() > 1e-10 * scale:
            raise NotHermitian("operator is not Hermitian within 1e-10")
        # shift-invert about a Gershgorin lower bound: the nearest eigenvalues are the smallest
        radius = np.asarray(abs(A).sum(axis=1)).ravel() - np.abs(A.diagonal())
        sigma = float(np.min(A.diagonal().real - radius)) - 1e-3 * scale
        try:
            w, v = spla.eigsh(A, k=k, sigma=sigma, which="LM", tol=tol, maxiter=maxiter)
        except (spla.ArpackNoConvergence, RuntimeError) as exc:
            raise ConvergenceFailure(str(exc)) from exc
        order = np.argsort(w)
        w, v = w[order], v[:, order]
    return [(float(w[i]), v[:, i]) for i in range(k)]


def eigenvalues(op, k):
    return np.array([e for e, _ in eigensolve(op, k)])


def interior_eigenvalues(op, margin=INTERIOR_MARGIN):
    """Ascending eigenvalues of the interior principal block of a ladder operator."""
    A = op.dense() if isinstance(op, OperatorMatrix) else np.asarray(op)
    idx = interior(A.shape[0], margin)
    return np.linalg.eigvalsh(A[np.ix_(idx, idx)])


def grid_convergence_order(params, levels=(256, 512, 1024), n_levels=6, half_width=8.0):
    """Observed order of the grid eigenvalue error under refinement.

    Returns the per-refinement orders fitted as
    ``log(err_coarse / err_fine) / log(h_coarse / h_fine)`` using the summed
    absolute error of the lowest `n_levels` eigenvalues against ``(2n+1) dp**2``.
    """
    exact = (2 * np.arange(n_levels) + 1) * params.dp ** 2
    errs, hs = [], []
    for pts in levels:
        op = build_sigma_grid(params, GridSpec(half_width=half_width, points=pts))
        errs.append(np.sum(np.abs(eigenvalues(op, n_levels) - exact)))
        hs.append(op.grid[1] - op.grid[0])
    errs, hs = np.array(errs), np.array(hs)
    return np.log(errs[:-1] / errs[1:]) / np.log(hs[:-1] / hs[1:]), errs
