"""Complexified Lyapunov profiles eps -> L(E; eps) for the three regimes.

Supercritical: positive L(E) with an immediate slope-1 cone (after /2pi).
Subcritical: a genuinely flat zero strip around eps = 0.
Critical: zero L(E) but the slope jumps right at eps = 0.
The profiles are even, convex, piecewise linear; slopes quantize to
half-integers. Membership of E in the spectrum is readable from the jump.
"""

import numpy as np

from harperlab.contfrac import golden_mean
from harperlab.cocycles import acceleration, complexified_le, spectrum_test
from harperlab.model import Coupling
from harperlab.spectra import density_of_states

GOLDEN = float(golden_mean())
eps = np.linspace(-0.5, 0.5, 41)

for lam, label in [
    (Coupling(0, 0.5, 0), "supercritical (0, 0.5, 0)"),
    (Coupling(2, 1, 0.5), "subcritical   (2, 1, 0.5)"),
    (Coupling(1, 1, 1), "critical      (1, 1, 1)"),
]:
    sample = density_of_states(lam, GOLDEN, n=256, n_phases=16)
    e_mid = float(np.quantile(sample.eigenvalues, 0.5))
    prof = complexified_le(lam, GOLDEN, e_mid, eps, n_iter=40_000, n_phases=32)
    ok, report = prof.check_invariants()
    acc = acceleration(prof, 0.0)
    print(f"{label}: E={e_mid:+.3f}")
    print(f"  L(E;0)={prof.L_values[len(eps)//2]:+.4f}  "
          f"omega(0+)={acc.raw_slope:+.3f} -> {acc.quantized:+.1f} "
          f"(residual {acc.residual:.3f})")
    print(f"  invariants: nonneg/even/convex ok={ok} "
          f"(even err {report['even_err']:.1e}, convex err {report['convex_err']:.1e})")
    shown = ", ".join(f"{v:.3f}" for v in prof.L_values[::8])
    print(f"  L on eps={[float(x) for x in np.round(eps[::8], 2)]}: [{shown}]")

print("\nspectrum membership by the acceleration jump, coupling (0, 0.5, 0):")
for e_val in (0.0, 3.4, 13.0):
    print(f"  E={e_val:+5.1f}: {spectrum_test(Coupling(0, 0.5, 0), GOLDEN, e_val, budget=30_000, n_phases=32)}")
