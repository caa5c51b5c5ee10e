"""Contracted dispersion tensor and the resonance between spacetime and mass spectra."""

import numpy as np

from discofield.field import ModelConfig, resonance_brute_force, resonance_enumerate
from discofield.mass import MassSectorParams
from discofield.relativistic import (DispersionTensor, FourMeans, ProductBasis, closed_form_metric_spectrum,
                                     commutation_check, contract_metric_sigma, interior_spectrum, on_shell)

B = DispersionTensor([4.0, 1.0, 1.0, 1.0])
basis = ProductBasis.for_tensor(B, (3, 3, 3, 3))
op = contract_metric_sigma(B, FourMeans(), basis)

got = interior_spectrum(op, basis, margin=1)
want = np.sort(closed_form_metric_spectrum(B, basis.tuples(basis.interior(1))))
print(f"interior spectrum ({len(got)} levels) vs closed form: {np.abs(got - want).max():.1e}")
print("distinct values:", np.unique(np.round(got, 10)))

comm = commutation_check(basis, FourMeans((0, 1, 0, 0), (1, 0, 0, 0)))
print("largest commutator residual:", max(comm.values()))

# tuples whose spacetime eigenvalue equals an odd multiple of dm^2
cfg = ModelConfig(B, on_shell(1.0, [0, 0, 0]), MassSectorParams(1.0, 0.0, 1.0))
tuples = resonance_enumerate(cfg, 2)
print(f"\n{len(tuples)} resonant tuples with n_mu <= 2:")
for t in tuples[:8]:
    print("  ", tuple(t))
print("brute force agrees:", tuples == resonance_brute_force(cfg, 2, max(t.k for t in tuples)))

iso = ModelConfig(DispersionTensor([1, 1, 1, 1]), on_shell(1.0, [0, 0, 0]), MassSectorParams(1.0, 0.0, 1.0))
print("isotropic tensor resonances:", resonance_enumerate(iso, 4))
