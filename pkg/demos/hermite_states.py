"""Harmonic Gaussian states: moments, momentum picture and large excitations."""

import numpy as np

from discofield.hermite import (GaussianParams, HermiteState, eval_phi, eval_phi_momentum,
                                fourier_transform_numeric, hermite_functions, moment)

family = GaussianParams(X=1.5, P=-0.7, dp=0.5)
print(f"family X={family.X} P={family.P} dp={family.dp}  ->  dx={family.dx}")

# dispersions grow as (2n+1) in both pictures, the product as (2n+1)^2 / 4
print(f"{'n':>3} {'norm':>10} {'<x>':>8} {'<p>':>8} {'disp_x':>10} {'disp_p':>10} {'product':>10}")
for n in range(6):
    s = HermiteState(n, family)
    vx, vp = moment(s, "disp_x"), moment(s, "disp_p")
    print(f"{n:3d} {moment(s, 'norm_x'):10.6f} {moment(s, 'mean_x'):8.4f} {moment(s, 'mean_p'):8.4f}"
          f" {vx:10.6f} {vp:10.6f} {vx * vp:10.6f}")

# closed-form momentum wavefunction against a brute-force transform
s = HermiteState(4, family)
p = np.linspace(-3, 2, 7)
diff = np.abs(eval_phi_momentum(s, p) - fourier_transform_numeric(s, p)).max()
print(f"\nclosed-form vs quadrature transform, n=4: max difference {diff:.2e}")

# the phase of a ground state is the plane wave exp(iPx)
x = np.array([0.0, 1.0, 2.0])
print("ground-state phase at x = 0, 1, 2:", np.round(np.angle(eval_phi(HermiteState(0, family), x)), 4))

# the normalized recurrence does not overflow for large n
u = np.linspace(-50, 50, 12001)
psi = hermite_functions(1000, u)
print(f"n=1000: finite={np.isfinite(psi).all()}, grid norm={np.trapezoid(psi[1000] ** 2, u):.10f}")
