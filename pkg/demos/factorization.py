"""The first-order factorization of the scalar operator, checked on a product basis."""

import numpy as np

from discofield.field import ModelConfig, factorization_product_check, random_config
from discofield.mass import MassSectorParams
from discofield.relativistic import DispersionTensor, on_shell

cfg = ModelConfig(DispersionTensor([1.0, 0.25, 0.25, 0.25]), on_shell(1.0, [0, 0, 0]),
                  MassSectorParams(1.0, 0.0, 0.5))
rep = factorization_product_check(cfg)
print(f"B=diag(1,1/4,1/4,1/4), dm=1/2 on {rep['dimension']} dims")
print(f"  off-diagonal blocks {rep['off_block']:.1e}, block spread {rep['diag_spread']:.1e}")
print(f"  constant block vs -i(beta alpha B - theta zeta dm2): {rep['constant_error']:.1e}"
      f"  (its norm {rep['constant_norm']:.4f})")

rng = np.random.default_rng(0)
for i in range(4):
    r = factorization_product_check(random_config(rng))
    print(f"random config {i}: worst entry {max(r['off_block'], r['diag_spread'], r['constant_error']):.1e},"
          f" leftover constant norm {r['constant_norm']:.3f}")
