"""
Mass operator ``m`` and its conjugate coordinate ``tau``.

The pair obeys ``[m, tau] = +i`` with ``m = i d/dtau``, the same orientation
as the covariant spacetime axes. The quadratic mass mean is
``m2 = M**2 + 1/2 (m - M)**2 + 2 dm**4 (tau - T)**2``.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .operators import GridSpec, OperatorMatrix, _grid_oscillator, ladder_pair


@dataclass(frozen=True)
class MassSectorParams:
    """Mass mean ``M``, tau mean ``T`` and ground mass spread ``dm``."""

    M: float = 0.0
    T: float = 0.0
    dm: float = 1.0

    def __post_init__(self):
        if self.M < 0:
            raise ValueError("mass mean must be non-negative")
        if not (np.isfinite(self.dm) and self.dm > 0):
            raise ValueError("mass spread dm must be strictly positive")

    @property
    def dtau(self) -> float:
        return 1.0 / (2.0 * self.dm)


class MassOperators(NamedTuple):
    m_minus_M: OperatorMatrix
    tau_minus_T: OperatorMatrix
    m2_mean: OperatorMatrix


def build_mass_ops(params, basis):
    """Ladder representation of ``m - M``, ``tau - T`` and the quadratic mean.

    Parameters
    ----------
    params : MassSectorParams
    basis : BasisSpec

    Returns
    -------
    MassOperators
        Interior spectrum of ``m2_mean`` is ``M**2 + (2k+1) dm**2``.
    """
    y, pi = ladder_pair(basis.N, params.dm, commutator_sign=+1)
    meta = {"M": params.M, "T": params.T, "dm": params.dm, "N": basis.N}
    m2 = params.M ** 2 * np.eye(basis.N) + 0.5 * (pi @ pi) + 2.0 * params.dm ** 4 * (y @ y)
    return MassOperators(OperatorMatrix(pi, "m-M", "ladder", meta),
                         OperatorMatrix(y, "tau-T", "ladder", meta),
                         OperatorMatrix(m2, "m2_mean", "ladder", meta))


def mass_dispersion_ratio_form(params, basis):
    """``m2 - M**2`` written with the spread ratio, ``1/2 [(m-M)^2 + (dm/dtau)^2 (tau-T)^2]``."""
    y, pi = ladder_pair(basis.N, params.dm, commutator_sign=+1)
    ratio = (params.dm / params.dtau) ** 2
    return OperatorMatrix(0.5 * (pi @ pi + ratio * (y @ y)), "m2-M2 (ratio form)", "ladder",
                          {"M": params.M, "T": params.T, "dm": params.dm, "N": basis.N})


def build_mass_grid(params, grid=GridSpec()):
    """``m2 - M**2`` on a uniform tau grid with ``m = i d/dtau``.

    The carrier phase of a mean-``M`` state is ``exp(-i M tau)``.
    """
    center = params.T if grid.center is None else grid.center
    meta = {"M": params.M, "T": params.T, "dm": params.dm, "points": grid.points}
    return _grid_oscillator(center, params.dtau, 4 * params.dm ** 4, -params.M, grid, "m2-M2", meta)
