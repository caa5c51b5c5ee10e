"""
Harmonic Gaussian states, dispersion operators and the five-variable field
equations built from them.
"""

__version__ = "0.1.0"

from .errors import (ConvergenceFailure, DimensionCapExceeded, DiscofieldError, FamilyMismatch,
                     GridTooCoarse, NonDiagonalUnsupported, NotEvaluable, NotHermitian, ParseError,
                     QuadratureUnderResolved, SpacelikeMomentum, ValidationError)
from .hermite import GaussianParams, HermiteState, QuadratureSpec, eval_phi, eval_phi_momentum, moment
from .operators import BasisSpec, GridSpec, OperatorMatrix, build_sigma_1d, build_sigma_grid, eigensolve
from .relativistic import METRIC, DispersionTensor, FourMeans, ProductBasis, on_shell
from .mass import MassSectorParams, build_mass_ops
from .clifford import build_factor_matrices, build_gammas, constraint_residual, constraint_solve
from .field import (ModelConfig, QuantumTuple, ScalarSolution, SpinorCandidate, assemble_fermion_operator,
                    assemble_scalar_operator, factorization_product_check, resonance_enumerate)
