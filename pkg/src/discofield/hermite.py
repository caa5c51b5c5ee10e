"""
Harmonic Gaussian functions and their statistics.

A family is fixed by a position mean ``X``, a momentum mean ``P`` and the
ground momentum spread ``dp``. The position spread is always derived,
``dx = 1 / (2 dp)``, so the minimal-uncertainty product holds by construction.

Evaluation goes through normalized Hermite functions built by a three-term
recurrence with running rescaling, which stays finite far beyond the range
where ``2**n n!`` overflows.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .errors import FamilyMismatch, NotEvaluable, QuadratureUnderResolved

#: Largest excitation index accepted by the evaluators.
MAX_EXCITATION = 4096

#: Gauss-Hermite orders above this put exp(u**2) out of double range.
MAX_GH_ORDER = 300

_RESCALE = 1e150
_LOG_RESCALE = np.log(_RESCALE)


@dataclass(frozen=True)
class GaussianParams:
    """(X, P, dp) triple of one harmonic-Gaussian family (hbar = 1)."""

    X: float = 0.0
    P: float = 0.0
    dp: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.dp) and self.dp > 0):
            raise ValueError(f"dp must be strictly positive, got {self.dp!r}")

    @property
    def dx(self) -> float:
        return 1.0 / (2.0 * self.dp)


@dataclass(frozen=True)
class HermiteState:
    n: int
    params: GaussianParams

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"excitation index must be a non-negative integer, got {self.n!r}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Hermite order, plus a uniform trapezoid fallback.

    ``extent`` is the half-width of the fallback grid in units of the
    position (or momentum) ground spread; ``points`` its node count.
    """

    order: int = 64
    extent: float = 16.0
    points: int = 4097

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("quadrature order must be >= 1")
        if not self.extent > 0:
            raise ValueError("fallback extent must be > 0")
        if self.points < 2:
            raise ValueError("fallback point count must be >= 2")


def hermite_polynomial(n, u):
    """Physicists' Hermite polynomial ``H_n(u)`` by the three-term recurrence.

    Parameters
    ----------
    n : int
        Degree, ``n >= 0``.
    u : float or array_like
        Evaluation point(s).

    Returns
    -------
    float or ndarray
        ``H_n(u)``, same shape as `u`. No overflow protection: for large
        `n` use :func:`hermite_functions` instead.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    u = np.asarray(u, dtype=float)
    h_prev = np.ones_like(u)
    if n == 0:
        return h_prev[()] if h_prev.ndim == 0 else h_prev
    h = 2.0 * u
    for k in range(1, n):
        h_prev, h = h, 2.0 * u * h - 2.0 * k * h_prev
    return h[()] if h.ndim == 0 else h


def _check_index(n):
    if n > MAX_EXCITATION:
        raise NotEvaluable(f"excitation index {n} exceeds cap {MAX_EXCITATION}")


def normalized_hermite(nmax, u):
    """Orthonormal Hermite polynomials w.r.t. the weight ``exp(-u**2)``.

    Returns an array of shape ``(nmax + 1,) + u.shape`` with
    ``h_n(u) = H_n(u) / sqrt(2**n n! sqrt(pi))``. Only safe for moderate
    ``|u|``; the functions with Gaussian factor included are in
    :func:`hermite_functions`.
    """
    _check_index(nmax)
    u = np.asarray(u, dtype=float)
    out = np.empty((nmax + 1,) + u.shape)
    out[0] = np.pi ** -0.25
    if nmax >= 1:
        out[1] = np.sqrt(2.0) * u * out[0]
    for k in range(1, nmax):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * u * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_functions(nmax, u):
    """Normalized Hermite functions ``psi_n(u) = h_n(u) exp(-u**2/2)``.

    The recurrence runs on the bare polynomials with a per-point log scale,
    so neither the Gaussian nor the polynomial part under/overflows on its
    own. Returns shape ``(nmax + 1,) + u.shape``.
    """
    _check_index(nmax)
    u = np.asarray(u, dtype=float)
    out = np.empty((nmax + 1,) + u.shape)
    logscale = -0.5 * u * u
    h_prev = np.full(u.shape, np.pi ** -0.25)
    out[0] = h_prev * np.exp(logscale)
    if nmax == 0:
        return out
    h = np.sqrt(2.0) * u * h_prev
    out[1] = h * np.exp(logscale)
    for k in range(1, nmax):
        h_prev, h = h, np.sqrt(2.0 / (k + 1)) * u * h - np.sqrt(k / (k + 1)) * h_prev
        big = np.abs(h) > _RESCALE
        if np.any(big):
            h = np.where(big, h / _RESCALE, h)
            h_prev = np.where(big, h_prev / _RESCALE, h_prev)
            logscale = np.where(big, logscale + _LOG_RESCALE, logscale)
        with np.errstate(over="ignore"):
            out[k + 1] = h * np.exp(logscale)
    return out


def _reduced(state, x):
    p = state.params
    return (np.asarray(x, dtype=float) - p.X) / (np.sqrt(2.0) * p.dx)


def eval_phi(state, x, exponent="matched"):
    """Harmonic Gaussian function in the coordinate representation.

    ``phi_n(x) = H_n(u) / sqrt(2**n n! sqrt(2 pi) dx) * exp(-(x-X)**2/(4 dx**2) + i P x)``
    with ``u = (x - X) / (sqrt(2) dx)``.

    Parameters
    ----------
    state : HermiteState
    x : float or array_like
    exponent : {"matched", "literal"}
        ``"literal"`` replaces the envelope exponent denominator ``4 dx**2``
        by ``2 dx**2``. That variant is neither normalized nor has ground
        dispersion ``dx**2``; it exists only so the discrepancy can be
        reported.
    """
    if exponent not in ("matched", "literal"):
        raise ValueError(f"unknown exponent variant {exponent!r}")
    p = state.params
    u = _reduced(state, x)
    val = hermite_functions(state.n, u)[state.n] / np.sqrt(np.sqrt(2.0) * p.dx)
    if exponent == "literal":
        val = val * np.exp(-0.5 * u * u)
    out = val * np.exp(1j * p.P * np.asarray(x, dtype=float))
    return out[()] if np.ndim(out) == 0 else out


def eval_phi_momentum(state, p):
    """Closed-form Fourier transform of :func:`eval_phi`.

    ``(-i)**n exp(-i (p - P) X) psi_n(k) / sqrt(sqrt(2) dp)`` with
    ``k = (p - P) / (sqrt(2) dp)``.
    """
    prm = state.params
    p = np.asarray(p, dtype=float)
    k = (p - prm.P) / (np.sqrt(2.0) * prm.dp)
    val = hermite_functions(state.n, k)[state.n] / np.sqrt(np.sqrt(2.0) * prm.dp)
    out = (-1j) ** (state.n % 4) * np.exp(-1j * (p - prm.P) * prm.X) * val
    return out[()] if np.ndim(out) == 0 else out


def eval_phi_derivatives(state, x):
    """Value, first and second derivative of :func:`eval_phi` at `x`.

    Uses ``H_n' = 2 n H_{n-1}`` and the Hermite differential equation, so
    no finite differences are involved.
    """
    prm = state.params
    n = state.n
    x = np.asarray(x, dtype=float)
    u = _reduced(state, x)
    psi = hermite_functions(n, u)
    c = 1.0 / np.sqrt(np.sqrt(2.0) * prm.dx)
    h = c * psi[n]
    # d/du psi_n = sqrt(2n) psi_{n-1} - u psi_n
    dh_du = c * ((np.sqrt(2.0 * n) * psi[n - 1] if n > 0 else 0.0) - u * psi[n])
    d2h_du2 = (u * u - 2 * n - 1) * h
    s = 1.0 / (np.sqrt(2.0) * prm.dx)
    dh, d2h = dh_du * s, d2h_du2 * s * s
    kappa = prm.P
    phase = np.exp(1j * kappa * x)
    f = h * phase
    df = (dh + 1j * kappa * h) * phase
    d2f = (d2h + 2j * kappa * dh - kappa ** 2 * h) * phase
    return f, df, d2f


def fourier_transform_numeric(state, p, quad=QuadratureSpec()):
    """Direct trapezoid evaluation of ``(2 pi)**-1/2 int phi_n(x) exp(-i p x) dx``.

    Independent of :func:`eval_phi_momentum`; used as its oracle.
    """
    prm = state.params
    x = np.linspace(prm.X - quad.extent * prm.dx, prm.X + quad.extent * prm.dx, quad.points)
    phi = eval_phi(state, x)
    p = np.atleast_1d(np.asarray(p, dtype=float))
    integrand = phi[None, :] * np.exp(-1j * np.outer(p, x))
    out = np.trapezoid(integrand, x, axis=1) / np.sqrt(2.0 * np.pi)
    return out


@lru_cache(maxsize=32)
def _gauss_hermite(order):
    u, w = np.polynomial.hermite.hermgauss(order)
    u.flags.writeable = False
    w.flags.writeable = False
    return u, w


_KINDS = ("mean_x", "mean_p", "disp_x", "disp_p", "norm_x", "norm_p")


def moment(state, kind, quad=QuadratureSpec()):
    """Statistical moment of ``|phi_n|**2`` (or of its transform) by quadrature.

    Parameters
    ----------
    state : HermiteState
    kind : {"mean_x", "mean_p", "disp_x", "disp_p", "norm_x", "norm_p"}
        Dispersions are taken about the family means ``X`` and ``P``.
    quad : QuadratureSpec
        Gauss-Hermite order must be at least ``n + 2``.

    Raises
    ------
    QuadratureUnderResolved
        If the order cannot integrate the degree ``2n + 2`` integrand exactly.
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown moment kind {kind!r}")
    n = state.n
    if quad.order < n + 2:
        raise QuadratureUnderResolved(f"order {quad.order} < n + 2 = {n + 2}")
    if quad.order > MAX_GH_ORDER:
        raise ValueError(f"Gauss-Hermite order above {MAX_GH_ORDER} is not supported")
    prm = state.params
    u, w = _gauss_hermite(quad.order)
    # weight exp(-u^2) is divided back out of |phi|^2; fine while exp(u^2) fits a double
    if kind.endswith("_x"):
        coord = prm.X + np.sqrt(2.0) * prm.dx * u
        dens = np.abs(eval_phi(state, coord)) ** 2 * np.sqrt(2.0) * prm.dx
        centre = prm.X
    else:
        coord = prm.P + np.sqrt(2.0) * prm.dp * u
        dens = np.abs(eval_phi_momentum(state, coord)) ** 2 * np.sqrt(2.0) * prm.dp
        centre = prm.P
    dens = dens * np.exp(u * u)
    if kind.startswith("norm"):
        f = np.ones_like(coord)
    elif kind.startswith("mean"):
        f = coord
    else:
        f = (coord - centre) ** 2
    return float(np.sum(w * dens * f))


def moment_trapezoid(state, kind, quad=QuadratureSpec(), exponent="matched"):
    """Uniform-grid fallback for :func:`moment`, evaluated from :func:`eval_phi`.

    Position moments only; the envelope variant can be chosen, which is the
    reason this path exists.
    """
    if kind not in ("norm_x", "mean_x", "disp_x"):
        raise ValueError("trapezoid fallback supports position moments only")
    prm = state.params
    x = np.linspace(prm.X - quad.extent * prm.dx, prm.X + quad.extent * prm.dx, quad.points)
    dens = np.abs(eval_phi(state, x, exponent=exponent)) ** 2
    if kind == "norm_x":
        f = 1.0
    elif kind == "mean_x":
        f = x
    else:
        f = (x - prm.X) ** 2
    return float(np.trapezoid(dens * f, x))


def inner_product(a, b, quad=QuadratureSpec()):
    """``<a|b>`` for two states of the same family, by Gauss-Hermite quadrature."""
    if a.params != b.params:
        raise FamilyMismatch("inner products are only defined within one family")
    nmax = max(a.n, b.n)
    if quad.order < nmax + 1:
        raise QuadratureUnderResolved(f"order {quad.order} < {nmax + 1}")
    u, w = _gauss_hermite(quad.order)
    h = normalized_hermite(nmax, u)
    # the plane-wave phases cancel within a family
    return complex(np.sum(w * h[a.n] * h[b.n]))


def norm_constant(n, dx):
    """Prefactor ``1 / sqrt(2**n n! sqrt(2 pi) dx)`` in closed form (small n only)."""
    return 1.0 / np.sqrt(2.0 ** n * factorial(n) * np.sqrt(2.0 * np.pi) * dx)
