"""The 1D dispersion operator in two representations, plus the mass sector."""

import numpy as np

from discofield.hermite import GaussianParams
from discofield.mass import MassSectorParams, build_mass_grid, build_mass_ops
from discofield.operators import (BasisSpec, GridSpec, build_sigma_1d, build_sigma_grid, eigenvalues,
                                  grid_convergence_order, interior_eigenvalues)

g = GaussianParams(X=0.0, P=0.0, dp=0.5)
exact = (2 * np.arange(6) + 1) * g.dp ** 2

ladder = build_sigma_1d(g, BasisSpec(16))
print("ladder interior spectrum:", np.round(interior_eigenvalues(ladder)[:6], 12))
print("closed form             :", exact)
# the last basis level is cut off; its diagonal entry is not part of the spectrum
print(f"edge entry of the truncated matrix: {ladder.matrix[15, 15].real} (not {31 * 0.25})")

grid = build_sigma_grid(g, GridSpec(points=1024))
print("\ngrid (1024 points)      :", np.round(eigenvalues(grid, 6), 6))

orders, errs = grid_convergence_order(g)
print("summed error at 256/512/1024 points:", [f"{e:.2e}" for e in errs])
print("observed order:", np.round(orders, 3))

# a boost of the mean momentum is a gauge phase on the grid
boosted = build_sigma_grid(GaussianParams(0.0, 3.0, 0.5), GridSpec(points=1024))
print(f"P=0 vs P=3 spectra: max difference {np.abs(eigenvalues(boosted, 6) - eigenvalues(grid, 6)).max():.1e}")

# mass and its conjugate coordinate tau
mp = MassSectorParams(M=2.0, T=0.0, dm=0.5)
ops = build_mass_ops(mp, BasisSpec(12))
print("\nmass quadratic mean, interior:", np.round(interior_eigenvalues(ops.m2_mean)[:5], 12))
print("tau grid, minus M^2          :", np.round(eigenvalues(build_mass_grid(mp), 5), 6))
