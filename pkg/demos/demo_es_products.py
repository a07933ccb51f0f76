"""Circle suprema of S(q, z) = sum log|e^{2 pi i k alpha} z - 1|.

Along the golden-mean denominators the running minimum of the sups stays
bounded (around log 2 in practice); for a rational frequency the orbit
telescopes and the sup is exactly log 2. The constructed counterexample
frequency instead pushes sup S(q_n, .) up to the order of log q_{n+1}.
"""

import math

from harperlab.contfrac import counterexample_alpha, expand, golden_mean
from harperlab.esproducts import liminf_track, s_sum, sup_s_sum

cf = expand(golden_mean(), 14)
series = liminf_track(cf, 10)
print("golden mean:")
print("  n   q_n     sup       argmax      running min")
rmin = math.inf
for e in series.entries:
    rmin = min(rmin, e.sup_value)
    print(f"  {e.n:2d} {e.q:5d}  {e.sup_value: .5f}  {e.argmax_angle:.6f}  {rmin: .5f}")

print("\nrational alpha = 3/7: sup log-product = log|z^7 - 1| <= log 2")
ang, sup = sup_s_sum(7, 3 / 7)
print(f"  sup = {sup:.12f} vs log 2 = {math.log(2):.12f}")
print(f"  spot check at z_angle=0.2: {s_sum(7, 3/7, 0.2):.12f} "
      f"vs identity {math.log(abs((math.e ** (2j * math.pi * 1.4)) - 1)):.12f}")

print("\ncounterexample (C=2): sup S(q_n, .) / log q_{n+1} at the built triple")
ce = counterexample_alpha(2, 1)
(n, n1, _) = ce.counterexample_triples[0]
_, sup = sup_s_sum(ce.q_at(n), ce.alpha_float)
print(f"  n={n}, q_n={ce.q_at(n)}, q_n+1={ce.q_at(n1)}: "
      f"ratio = {sup / math.log(ce.q_at(n1)):.3f}")
