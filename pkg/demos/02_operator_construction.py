"""From a Gram matrix to a non-negative operator: the constructive core.

The scalarized Gram factors into coordinate vectors xi_a with
<xi_a, xi_b> = gamma[a, b]; the data then define the shift A xi_k = xi_{k+N}
on the span of the early vectors.  We verify the operator is Hermitian and
non-negative on its domain, and compute its defect spaces.
"""

import numpy as np

from stieltjesmp import (
    build_shift,
    build_space,
    check_nonneg_hermitian,
    defect_subspace,
    moment_sequence,
    scalarize,
)

seq = moment_sequence([[[2.0]], [[3.0]], [[5.0]]])  # atoms {1, 2}, unit weights
rep = build_space(scalarize(seq))
print("Gram rank (space dimension):", rep.dim)
print("Gram reproduction error:",
      f"{np.abs(rep.reproduced_gram() - rep.gram.gamma).max():.2e}")

op = build_shift(rep)
print("\nshift operator on D(A) = span{xi_0}:")
print("  consistency residual:", f"{op.consistency_residual:.2e}")
print("  (A xi_0, xi_0) =", np.vdot(rep.vector(0), op.matrix @ rep.vector(0)).real,
      " (equals S_1)")

report = check_nonneg_hermitian(op, trials=256, seed=0)
print("  sampled Hermitian defect:", f"{report['max_symmetry_defect']:.2e}")
print("  sampled Rayleigh minimum:", f"{report['min_rayleigh']:.6f}",
      " (on the 1-dim domain the quotient is constantly S_1/S_0 = 1.5)")

print("\ndefect subspaces (deficiency index equals dim of the complement of"
      " ran(A - z)):")
for z in (1j, -1.0, -2 + 3j):
    dd = defect_subspace(op, z)
    print(f"  z = {z}: index {dd.index}, range dim {dd.range_basis.shape[1]}")

# a degenerate truncation that does NOT determine the shift: the Gram kernel
# forces xi_0 = xi_1 but the data demand A xi_0 != A xi_1
from stieltjesmp import InconsistentTruncation

bad = moment_sequence([[[1.0]], [[1.0]], [[1.0]], [[1.0]], [[2.0]]])
try:
    build_shift(build_space(scalarize(bad)))
except InconsistentTruncation as exc:
    print("\ndegenerate truncation rejected as expected:\n ", exc)
