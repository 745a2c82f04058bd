"""
The adjoint shift in derivative-kernel coordinates
==================================================

Write a vector as ``sum c_j Khat_j``.  The adjoint of multiplication by z
just moves every coordinate one slot down, so the dynamics need no
arithmetic at all.  Norms come from the Gram matrix, which is the
coefficient matrix of the kernel.
"""

import numpy as np

from kerneldyn import build_model, diagonal_coefficients, parse_sequence_arg
from kerneldyn.model import apply_adjoint, eigenvector_check, orbit, unit

N = 16
dirichlet = build_model(diagonal_coefficients(parse_sequence_arg("dirichlet"), N))

# Khat_3 goes to Khat_2, and Khat_0 is killed
print(apply_adjoint(dirichlet, unit(3, N)).real[:5])
print(apply_adjoint(dirichlet, unit(0, N)).real[:5])

# the orbit of Khat_5: norms 1/sqrt(6-j), then zero
print(np.round(orbit(dirichlet, unit(5, N), 7).norms, 4))

# in an orthonormal basis the same operator is a weighted shift; weights beta_{n-1}/beta_n
print(np.round(np.diagonal(dirichlet.on_matrix, 1)[:6].real, 4))

# kernel functions are eigenvectors; truncation leaves only the top coordinate
for w in (0.3, 0.5 + 0.2j, 0.9):
    r = eigenvector_check(dirichlet, w)
    print(f"w={w}: residual {r.residual:.2e}  bound {r.bound:.2e}")
