"""Coupling-space geometry of the extended Harper model.

The coupling triple lambda = (lambda1, lambda2, lambda3) weights next-nearest
(lambda1, lambda3) and nearest (lambda2) neighbor hopping against the
potential v(theta) = 2 cos(2 pi theta); the off-diagonal sampling function is

    c(theta) = lambda1 e^{-2 pi i (theta + alpha/2)} + lambda2
             + lambda3 e^{+2 pi i (theta + alpha/2)}.

In the (s, lambda2) plane with s = lambda1 + lambda3 the parameter space
splits into region I (s <= 1, lambda2 <= 1), region II (s <= lambda2,
lambda2 >= 1) and region III (s >= max(1, lambda2)), with distinguished
segments L_I (s = 1, lambda2 <= 1), L_II (lambda2 = 1, s <= 1) and L_III
(s = lambda2 >= 1). The self-dual set is SD = III (closed) union L_II. The
duality sigma(lambda) = (lambda3, 1, lambda1)/lambda2 swaps I and II,
preserves III, and fixes exactly L_II pointwise; for lambda2 = 0 the map is
sigma(lambda1, 0, lambda3) = (lambda3, 1, lambda1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .contfrac import dist_to_integers
from .errors import InvalidCoupling, OutOfDomain

QUADRATURE_POINTS = 1 << 16
ZERO_SKIP_RADIUS = 1e-10


@dataclass(frozen=True)
class Coupling:
    lambda1: float
    lambda2: float
    lambda3: float

    def __post_init__(self):
        if self.lambda2 < 0 or self.lambda1 + self.lambda3 < 0:
            raise InvalidCoupling("need lambda2 >= 0 and lambda1 + lambda3 >= 0")
        if self.lambda1 == self.lambda2 == self.lambda3 == 0:
            raise InvalidCoupling("all-zero coupling")

    @property
    def s(self) -> float:
        return self.lambda1 + self.lambda3

    @property
    def gamma(self) -> float:
        if self.lambda2 == 0:
            raise ZeroDivisionError("gamma undefined at lambda2 = 0")
        return self.lambda1 * self.lambda3 / self.lambda2**2

    @property
    def isotropic(self) -> bool:
        return math.isclose(self.lambda1, self.lambda3, rel_tol=0.0, abs_tol=1e-12)

    def as_tuple(self):
        return (self.lambda1, self.lambda2, self.lambda3)


class Region(Enum):
    I_INTERIOR = "I_interior"
    II_INTERIOR = "II_interior"
    III_INTERIOR = "III_interior"
    L_I = "L_I"
    L_II = "L_II"
    L_III = "L_III"
    AXIS_SUB = "axis_sub"
    AXIS_SUPER = "axis_super"
    BOUNDARY_OTHER = "boundary_other"


class Criticality(Enum):
    SUPERCRITICAL = "supercritical"
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    AXIS = "axis"


@dataclass(frozen=True)
class RegionLabel:
    region: Region
    in_self_dual: bool
    nnn_isotropic: bool


def sampling_functions(lam: Coupling, alpha: float, theta) -> Tuple[complex, float]:
    """(c(theta), v(theta)). Accepts scalar or array theta."""
    th = np.asarray(theta, dtype=float)
    phase = np.exp(2j * np.pi * (th + 0.5 * alpha))
    c = lam.lambda1 / phase + lam.lambda2 + lam.lambda3 * phase
    v = 2.0 * np.cos(2 * np.pi * th)
    if th.ndim == 0:
        return complex(c), float(v)
    return c, v


def classify(lam: Coupling, tol: float = 1e-12) -> RegionLabel:
    """Region label with boundary snapping: points within tol of L_I, L_II or
    L_III report the segment (spectral type changes exactly there); the
    corner s = lambda2 = 1 resolves to L_II by convention. Interiors are
    taken relative to the quadrant {s >= 0, lambda2 >= 0}, so the s = 0 axis
    belongs to the adjacent interior. lambda2 = 0 reports the axis cases."""
    s, l2 = lam.s, lam.lambda2
    iso = lam.isotropic
    if l2 <= tol:
        region = Region.AXIS_SUPER if s >= 1.0 - tol else Region.AXIS_SUB
        return RegionLabel(region, in_self_dual=False, nnn_isotropic=iso)

    on_li = abs(s - 1.0) <= tol and l2 <= 1.0 + tol
    on_lii = abs(l2 - 1.0) <= tol and s <= 1.0 + tol
    on_liii = abs(s - l2) <= tol and s >= 1.0 - tol

    in_closed_iii = (s >= max(1.0, l2) - tol)
    sd = in_closed_iii or on_lii

    if on_lii:  # corner convention: L_II beats L_I and L_III
        return RegionLabel(Region.L_II, in_self_dual=True, nnn_isotropic=iso)
    if on_liii:
        return RegionLabel(Region.L_III, in_self_dual=True, nnn_isotropic=iso)
    if on_li:
        return RegionLabel(Region.L_I, in_self_dual=sd, nnn_isotropic=iso)

    if s < 1.0 and l2 < 1.0:
        return RegionLabel(Region.I_INTERIOR, in_self_dual=False, nnn_isotropic=iso)
    if s < l2 and l2 > 1.0:
        return RegionLabel(Region.II_INTERIOR, in_self_dual=False, nnn_isotropic=iso)
    if s > 1.0 and s > l2:
        return RegionLabel(Region.III_INTERIOR, in_self_dual=True, nnn_isotropic=iso)
    return RegionLabel(Region.BOUNDARY_OTHER, in_self_dual=sd, nnn_isotropic=iso)


def duality(lam: Coupling) -> Coupling:
    """sigma(lambda) = (lambda3, 1, lambda1)/lambda2; the lambda2 = 0 branch
    maps (lambda1, 0, lambda3) to (lambda3, 1, lambda1)."""
    if lam.lambda2 == 0:
        return Coupling(lam.lambda3, 1.0, lam.lambda1)
    return Coupling(lam.lambda3 / lam.lambda2, 1.0 / lam.lambda2, lam.lambda1 / lam.lambda2)


def c_zeros(lam: Coupling, alpha: float) -> List[Tuple[float, int]]:
    """Real zeros of c on [0,1) as (angle, multiplicity).

    Zeros exist only for lambda1 = lambda3 with 2 lambda3 >= lambda2 (two
    simple roots merging to one double root at theta = 1/2 - alpha/2 when
    lambda2 = 2 lambda3) or for lambda1 != lambda3 with
    lambda1 + lambda3 = lambda2 (one simple root at the same angle).
    """
    l1, l2, l3 = lam.as_tuple()
    if math.isclose(l1, l3, rel_tol=0.0, abs_tol=1e-14):
        if l3 == 0.0:
            return []  # c is the nonzero constant lambda2
        if 2 * l3 < l2:
            return []
        cosval = -l2 / (2 * l3)
        if math.isclose(cosval, -1.0, rel_tol=0.0, abs_tol=1e-14):
            return [((0.5 - alpha / 2) % 1.0, 2)]
        u = math.acos(cosval) / (2 * math.pi)
        r1 = (u - alpha / 2) % 1.0
        r2 = (-u - alpha / 2) % 1.0
        return sorted([(r1, 1), (r2, 1)])
    if math.isclose(l1 + l3, l2, rel_tol=0.0, abs_tol=1e-14):
        return [((0.5 - alpha / 2) % 1.0, 1)]
    return []


def is_alpha_rational(theta: float, alpha: float, n_max: int = 10**4,
                      tol: float = 1e-9):
    """Finite-horizon screen for (Z alpha + 2 theta) hitting Z.

    Returns (found, witness_n). A negative answer only rules out witnesses
    with |n| <= n_max; it is not a proof of non-alpha-rationality.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    ns = np.arange(-n_max, n_max + 1)
    d = dist_to_integers(ns * alpha + 2.0 * theta)
    hits = np.nonzero(d < tol)[0]
    if hits.size:
        # smallest |witness| wins for determinism
        best = hits[np.argmin(np.abs(ns[hits]))]
        return True, int(ns[best])
    return False, None


@dataclass
class DerivedCouplingData:
    gamma: float
    lambda_plus: complex
    lambda_minus: complex
    I_closed: Optional[float]
    I_quadrature: float


def lambda_pm(gamma: float) -> Tuple[complex, complex]:
    """Roots of x^2 - x + gamma (complex pair for gamma > 1/4)."""
    root = cmath.sqrt(1.0 - 4.0 * gamma)
    return 0.5 * (1.0 + root), 0.5 * (1.0 - root)


def mean_log_abs_c(lam: Coupling, alpha: float = 0.0,
                   n_points: int = QUADRATURE_POINTS) -> float:
    """Quadrature value of I(lambda) = int log|c|: midpoint rule, skipping
    points within 1e-10 of reported zeros (log singularities are integrable,
    the skipped mass is O(log(n)/n))."""
    theta = (np.arange(n_points) + 0.5) / n_points
    c, _ = sampling_functions(lam, alpha, theta)
    mask = np.ones(n_points, dtype=bool)
    for xz, _m in c_zeros(lam, alpha):
        mask &= dist_to_integers(theta - xz) > ZERO_SKIP_RADIUS
    vals = np.log(np.abs(c[mask]))
    return float(np.mean(vals))


def i_closed_form(lam: Coupling) -> float:
    """Closed form of I(lambda) on the self-dual set:

        log(lambda1 v lambda3)                        in III,
        log|2 l1 l3 / (1 - sqrt(1 - 4 l1 l3))|        on L_II, l1 l3 != 0,
        0                                             on L_II, l1 or l3 = 0.
    """
    label = classify(lam)
    if not label.in_self_dual:
        raise OutOfDomain(f"closed form needs lambda in SD, got {label.region.value}")
    l1, l2, l3 = lam.as_tuple()
    if label.region is Region.L_II:
        if l1 == 0.0 or l3 == 0.0:
            return 0.0
        prod = l1 * l3
        return math.log(abs(2.0 * prod / (1.0 - cmath.sqrt(1.0 - 4.0 * prod))))
    return math.log(max(l1, l3))


def coupling_integral(lam: Coupling, alpha: float = 0.0) -> DerivedCouplingData:
    """gamma, lambda_pm and both routes to I(lambda). The closed form is None
    outside SD (the quadrature stays valid for any coupling)."""
    quad = mean_log_abs_c(lam, alpha)
    gam = lam.gamma if lam.lambda2 > 0 else math.nan
    lp, lm = lambda_pm(gam) if lam.lambda2 > 0 else (complex("nan"), complex("nan"))
    try:
        closed = i_closed_form(lam)
    except OutOfDomain:
        closed = None
    return DerivedCouplingData(
        gamma=gam, lambda_plus=lp, lambda_minus=lm,
        I_closed=closed, I_quadrature=quad,
    )


def criticality(lam: Coupling) -> Criticality:
    """Expected spectral class by region and NNN isotropy:

    I interior (with its s = 0 edge)  -> supercritical
    II interior (with its s = 0 edge) -> subcritical
    III interior, lambda1 != lambda3  -> subcritical
    III interior, lambda1 == lambda3  -> critical
    L_I, L_II, L_III                  -> critical
    lambda2 = 0                       -> axis (outside the classification)
    """
    label = classify(lam)
    r = label.region
    if r in (Region.AXIS_SUB, Region.AXIS_SUPER):
        return Criticality.AXIS
    if r is Region.I_INTERIOR:
        return Criticality.SUPERCRITICAL
    if r is Region.II_INTERIOR:
        return Criticality.SUBCRITICAL
    if r is Region.III_INTERIOR:
        return Criticality.CRITICAL if label.nnn_isotropic else Criticality.SUBCRITICAL
    if r in (Region.L_I, Region.L_II, Region.L_III):
        return Criticality.CRITICAL
    return Criticality.CRITICAL  # boundary_other fallback: treat as critical
