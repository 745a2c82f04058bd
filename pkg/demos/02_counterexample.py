"""
Hypercyclic, yet the diagonal stays away from zero
==================================================

Take weights beta_n = 1/(n+1).  The backward shift on H^2(beta) is
hypercyclic because liminf beta_n = 0.  Multiply every function by
1/(1-z): the new space is unitarily equivalent, so the adjoint shift is
still hypercyclic, but the diagonal coefficients of the new kernel are the
partial sums of beta_n^2 and increase towards pi^2/6.  The diagonal test
fails on a hypercyclic operator, so that test is sufficient only.
"""

import numpy as np

from kerneldyn import demo_counterexample, parse_sequence_arg

out = demo_counterexample(parse_sequence_arg("power(-1)"), N=256)

print("base weights   :", out["base_salas"]["classification"])
print("diagonal test  :", out["conjugated_sufficient"]["classification"])
print("first entries  :", np.round(out["conjugated_diagonal"][:4], 5))
print("last entry     :", out["conjugated_diagonal"][-1], "vs pi^2/6 =", np.pi ** 2 / 6)
print("max rel. error against partial sums:", out["max_deviation_from_partial_sums"])

# geometric weights behave the same way; the partial sums climb to 4/3
geo = demo_counterexample(parse_sequence_arg("2^(-n)"), N=64)
print(geo["base_salas"]["classification"], geo["conjugated_sufficient"]["classification"],
      geo["conjugated_diagonal"][-1])
