"""The absence-of-point-spectrum mechanism, made numerical.

The top Fourier coefficients of the duality-comparison polynomial Psi^{(n)}
have closed forms built from the determinant sequence t_n = t_{n-1} -
gamma t_{n-2}. Normalized by e^{-n I(sigma(lambda))}, they stay of order
one along parity-selected denominators (limsup > 0); a hypothetical
eigenvalue would force the matching normalized L1 norms to vanish instead.
For the critical almost Mathieu point every normalized coefficient is
exactly 1.
"""

import numpy as np

from harperlab.contfrac import expand, golden_mean
from harperlab.fourier import (
    boundary_coeff_oracle,
    det_sequence,
    in_spectrum_probe,
    limsup_lower_bound_test,
    psi_hat_normalized,
)
from harperlab.model import Coupling

GOLDEN = float(golden_mean())
THETA = 0.123456

print("determinant sequence, gamma = 2:",
      det_sequence(2.0, 6).values.astype(int).tolist())
print("closed form at gamma = 1/4: t_3 =",
      det_sequence(0.25, 3, method='closed_form').values[3])

amo = Coupling(0, 1, 0)
print("\ncritical AMO boundary coefficients (all unit modulus):")
for n in (5, 8, 13):
    p, m = boundary_coeff_oracle(amo, GOLDEN, THETA, 0.0, n)
    print(f"  n={n:2d}: |Psi_hat(+n)| = {abs(p):.12f}, |Psi_hat(-n)| = {abs(m):.12f}")

print("\nclosed form vs DFT oracle, coupling (1,1,1) (I(sigma) = 0 here):")
lam = Coupling(1, 1, 1)
e_probe = in_spectrum_probe(lam, GOLDEN)
for n in (8, 21):
    closed = psi_hat_normalized(lam, GOLDEN, THETA, n)
    raw = boundary_coeff_oracle(lam, GOLDEN, THETA, e_probe, n)[0]
    print(f"  n={n:2d}: closed {closed:+.9f}, oracle {raw:+.9f}")

cf = expand(golden_mean(), 18)
for lam in (Coupling(0, 1, 0), Coupling(2, 1, 0.5), Coupling(1, 1, 1)):
    series, verdict = limsup_lower_bound_test(lam, cf, THETA, levels=5)
    print(f"\n{lam.as_tuple()}: verdict positive = {verdict}")
    print(f"  m_l      = {series.indices}")
    print(f"  |coef|   = {[round(v, 3) for v in series.normalized]}")
    print(f"  L1 proxy = {[round(p, 3) for p in series.upper_proxy]} "
          f"(per level, at q_l)")
