"""Smallest singular values of the fermion operator on a small product basis."""

import numpy as np

from discofield.field import (ModelConfig, assemble_fermion_operator, fermion_consistency, non_hermiticity,
                              random_config)
from discofield.mass import MassSectorParams
from discofield.relativistic import DispersionTensor, on_shell

cut = (2, 2, 2, 2, 2)
diag_cfg = ModelConfig(DispersionTensor([4.0, 1.0, 1.0, 1.0]), on_shell(1.0, [0, 0, 0]),
                       MassSectorParams(1.0, 0.0, 1.0))
general_cfg = random_config(np.random.default_rng(11))

for label, cfg in [("diagonal B", diag_cfg), ("general B", general_cfg)]:
    sq = assemble_fermion_operator(cfg, cut, n_singular=4, mode="galerkin")
    ex = assemble_fermion_operator(cfg, cut, n_singular=4, mode="restricted")
    print(f"{label}: operator {sq.op.shape}, non-Hermiticity {non_hermiticity(sq.op.matrix):.3f}")
    print("  square truncation  :", np.array2string(sq.singular_values, precision=3))
    print("  exact restriction  :", np.array2string(ex.singular_values, precision=3))
    c = fermion_consistency(cfg, cut, seed=0)
    print(f"  candidate: sigma/scale {c['singular_value']:.2e}, pointwise {c['pointwise']:.2e},"
          f" sampled L2 {c['importance_l2']:.2e}, factor {c['ratio']:.2f}")
