"""Separable solutions of the five-variable scalar equation."""

import numpy as np

from discofield.field import (ModelConfig, QuantumTuple, ScalarSolution, resonance_enumerate, sample_points,
                              scalar_nullspace_count, scalar_residual_pointwise)
from discofield.mass import MassSectorParams
from discofield.relativistic import DispersionTensor, on_shell

cfg = ModelConfig(DispersionTensor([4.0, 1.0, 1.0, 1.0]), on_shell(1.0, [0.3, 0, 0]),
                  MassSectorParams(1.0, 0.0, 1.0))
print("mean four-momentum:", np.round(cfg.means.P, 6))

pts = sample_points(cfg, 100, seed=0)
print(f"{len(pts)} sample points (100 from the envelope, 32 cube corners)")

for t in [(0, 0, 0, 0, 0), (1, 1, 0, 0, 3), (0, 0, 0, 0, 1), (1, 0, 0, 0, 0)]:
    r = scalar_residual_pointwise(ScalarSolution(QuantumTuple(*t), cfg), pts)
    print(f"  tuple {t}: relative residual {r:.2e}")

count, eigs = scalar_nullspace_count(cfg, (3, 3, 3, 3, 6))
print(f"\ninterior nullspace on cutoffs (3,3,3,3,6): {count}")
print("smallest |eigenvalues|:", np.round(np.sort(np.abs(eigs))[:4], 12))
print("resonant tuples in the interior:", [tuple(t) for t in resonance_enumerate(cfg, 0) if t.k <= 3])
