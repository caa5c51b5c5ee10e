"""Factor matrices, their relations, and the constraint they leave behind."""

import numpy as np
from scipy.stats import unitary_group

from discofield.clifford import (RELATIONS, build_factor_matrices, build_gammas, constraint_residual,
                                 constraint_solve, relation_report)

f = build_factor_matrices()
rep = relation_report(f)
for rid, text in RELATIONS:
    print(f"{rid:22s} {text:32s} residual {rep[rid]:.1e}")

# the relations survive a change of gamma representation
U = unitary_group.rvs(4, random_state=7)
rot = relation_report(build_factor_matrices(build_gammas().conjugated(U)))
print(f"\nafter a random unitary change of representation: max residual {max(rot.values()):.1e}")

B = np.diag([1.0, 0.25, 0.25, 0.25])
r = constraint_residual(f, B, 0.25)
print(f"\nconstraint residual for B=diag(1,1/4,1/4,1/4), dm2=1/4: {r['frobenius']:.6f} (sqrt 40 = {np.sqrt(40):.6f})")

sol = constraint_solve(f)
print("singular values of the 11-parameter constraint map:", np.round(sol["singular_values"], 6))
print("no nonzero (B, dm2) satisfies it; best unit-norm residual:", round(sol["residual"], 6))
