"""Density of states, its duality invariance, and the rotation-number link.

The integrated density of states of the coupling lambda evaluated at E
matches that of the dual coupling at E/lambda2; and for non-singular
couplings the fibered rotation number of the transfer cocycle recovers N(E)
through the calibrated angle-lift convention.
"""

import numpy as np

from harperlab.contfrac import golden_mean
from harperlab.cocycles import ids_from_rotation, rotation_number
from harperlab.model import Coupling, duality
from harperlab.spectra import density_of_states, duality_dos_check

GOLDEN = float(golden_mean())

lam = Coupling(1, 2, 1)
print(f"coupling {lam.as_tuple()}, dual {duality(lam).as_tuple()}")
disc = duality_dos_check(lam, GOLDEN, n=256, n_phases=16)
print(f"max |N(E) - N_dual(E/2)| over probes: {disc:.4f}")

lam0 = Coupling(1, 0, 2)
print(f"\nlambda2 = 0 coupling {lam0.as_tuple()} against the zero-diagonal dual:")
disc0 = duality_dos_check(lam0, GOLDEN, n=256, n_phases=16)
print(f"max discrepancy: {disc0:.4f}")

print("\nrotation number vs truncation IDS for the critical AMO point (0,1,0):")
amo = Coupling(0, 1, 0)
sample = density_of_states(amo, GOLDEN, n=256, n_phases=16)
print("   E      N(truncation)  N(rotation)   drift")
for e_val in np.linspace(-4.2, 4.2, 9):
    est = rotation_number(amo, GOLDEN, float(e_val), n_iter=50_000)
    print(f"  {e_val:+.2f}      {sample.ids(float(e_val)):.4f}        "
          f"{ids_from_rotation(est):.4f}     {est.drift:.1e}")
