"""Coupling-space geometry: regions, duality orbits, zeros of c, I(lambda).

The duality map swaps regions I and II, fixes the line lambda2 = 1 segment
pointwise, and maps the self-dual set (closed region III plus that segment)
onto itself. Criticality is decided by region and NNN isotropy alone.
"""

from harperlab.contfrac import golden_mean
from harperlab.model import (
    Coupling,
    c_zeros,
    classify,
    coupling_integral,
    criticality,
    duality,
)

GOLDEN = float(golden_mean())

samples = [
    Coupling(0.2, 0.5, 0.1),
    Coupling(0.2, 2.0, 0.3),
    Coupling(2, 1, 0.5),
    Coupling(1, 1, 1),
    Coupling(0, 1, 0),
    Coupling(0.5, 1, 0.5),
    Coupling(1, 2, 1),
    Coupling(1, 0, 2),
]

print(f"{'coupling':>16} {'region':>14} {'SD':>3} {'class':>14} {'dual':>22}")
for lam in samples:
    lab = classify(lam)
    dual = duality(lam)
    print(f"{str(lam.as_tuple()):>16} {lab.region.value:>14} "
          f"{'y' if lab.in_self_dual else 'n':>3} {criticality(lam).value:>14} "
          f"{str(tuple(round(x, 3) for x in dual.as_tuple())):>22}")

print("\nzeros of c (golden alpha):")
for lam in (Coupling(0, 1, 0), Coupling(0.5, 1, 0.5), Coupling(1, 1, 1), Coupling(0.3, 1, 0.7)):
    print(f"  {lam.as_tuple()}: {c_zeros(lam, GOLDEN)}")

print("\nI(lambda): closed form vs quadrature")
for lam in (Coupling(2, 1, 0.5), Coupling(0.3, 1, 0.6), Coupling(1, 1, 1)):
    d = coupling_integral(lam, GOLDEN)
    print(f"  {lam.as_tuple()}: closed={d.I_closed:+.8f} quad={d.I_quadrature:+.8f} "
          f"gamma={d.gamma:.3f} lambda_pm=({d.lambda_plus:.3f}, {d.lambda_minus:.3f})")
