"""
Tridiagonal kernels
===================

The orthonormal basis e_n = mu_n z^n + nu_n z^(n+1) gives a kernel whose
coefficient matrix is tridiagonal.  Multiplication by z is bounded when
sup |mu_n/mu_{n+1}| is finite and sup |nu_n/mu_{n+1}| < 1; the adjoint is
then hypercyclic (mixing) exactly when liminf (lim) of the diagonal is 0.
"""

import numpy as np

from kerneldyn import CriteriaConfig, parse_sequence_arg
from kerneldyn.constructions import (
    TridiagonalSpec,
    expand_znf_in_basis,
    tridiagonal_boundedness,
    tridiagonal_coefficients,
    znf_norm_bound,
)
from kerneldyn.criteria import tridiagonal_characterization

t = TridiagonalSpec(parse_sequence_arg("1/(n+1)"), parse_sequence_arg("1/(2*(n+2))"), N=32)

gate = tridiagonal_boundedness(t)
print("sup |mu_n/mu_n+1| =", gate.sup_mu_ratio, " sup |nu_n/mu_n+1| =", gate.sup_nu_ratio)

A = tridiagonal_coefficients(t)
print(np.round(A.a[:4, :4].real, 4))

# z * k(., 0) in the basis: 2, -1/4, 1/8, ...
print(expand_znf_in_basis(t, 1)[:5].real)
b = znf_norm_bound(t, 1)
print(f"||z k0||^2 = {b.norm_sq:.4f} <= {b.bound} (C = {b.C})")

# the verdicts need a long window: d_n = 1.25/(n+1)^2 passes 1e-6 near n = 1100
big = TridiagonalSpec(t.mu, t.nu, N=4096)
for v in tridiagonal_characterization(big, CriteriaConfig(window=4096)):
    print(v.condition_id, v.classification.value)
