"""
Periodic points from a summable diagonal
========================================

With a_nn = 2^-n the forward shifts of Khat_0 are summable, and
x_p = sum_j Khat_{jp} is fixed by the p-th power of the adjoint shift.
Inside a window of order N the top term is always cut off, so the residual
is sqrt(a_mm) for the last multiple m of p below N.  Long periods pay for it.
"""

import numpy as np

from kerneldyn import build_model, diagonal_coefficients, parse_sequence_arg
from kerneldyn.model import periodic_point, unit

N = 64
m = build_model(diagonal_coefficients(parse_sequence_arg("2^(-n/2)"), N))

print(" p   residual    bound       distance^2   closed form")
for p in (1, 2, 4, 8, 16):
    pp = periodic_point(m, unit(0, N), p)
    closed = sum(2.0 ** (-p * j) for j in range(1, N))
    print(f"{p:2d}  {pp.residual:.3e}  {pp.boundary_bound:.3e}  {pp.distance_to_x ** 2:.4e}  {closed:.4e}")

last = {p: (N - 1) // p * p for p in (1, 2, 4, 8, 16)}
print("sqrt(a_mm):", {p: f"{np.sqrt(2.0 ** -k):.2e}" for p, k in last.items()})
