"""Continued fractions of the frequencies used across the workbench.

Golden and silver means expand with constant quotients and Fibonacci-type
denominators; a rational input refuses to pretend it has an infinite
expansion; the specially constructed Liouville-flavored frequency realizes
fast denominator bursts (q_n > q_{n-1}^C) separated by a_n = 1 steps.
"""

import math

from harperlab.contfrac import (
    beta_exponent,
    counterexample_alpha,
    expand,
    golden_mean,
    parity_subsequence,
    silver_mean,
)
from harperlab.errors import PrecisionExhausted

for name, alpha in [("golden", golden_mean()), ("silver", silver_mean())]:
    cf = expand(alpha, 12)
    print(f"{name}: a = {cf.terms}")
    print(f"        q = {cf.q_leading}")
    print(f"        Delta_n in (1/(q_n+q_n+1), 1/q_n+1): "
          f"{[f'{float(d):.2e}' for d in cf.deltas[:6]]}")
    idx, label = parity_subsequence(cf)
    print(f"        parity subsequence ({label}): {idx}")
    print(f"        beta estimate = {beta_exponent(cf):.4f}")

try:
    expand("0.625", 10)
except PrecisionExhausted as exc:
    print(f"\nrational input: {exc}")

print("\ncounterexample frequency, C=2, one level:")
cf = counterexample_alpha(2, 1)
print(f"  a = {cf.terms}")
for (n, n1, n2) in cf.counterexample_triples:
    print(f"  triple ({n},{n1},{n2}): q_{n}={cf.q_at(n)} > q_{n-1}^2={cf.q_at(n-1)**2}, "
          f"a_{n1}=1, q_{n2}={cf.q_at(n2)} > 2 q_{n1}={2*cf.q_at(n1)}")
print(f"  beta estimate = {beta_exponent(cf):.4f} "
      f"(golden gives {beta_exponent(expand(golden_mean(), 12)):.4f})")
print(f"  ln(q_4)/q_3 = {math.log(cf.q_at(4))/cf.q_at(3):.4f}")
