import math

import numpy as np
import pytest

from harperlab.contfrac import golden_mean
from harperlab.errors import InvalidCoupling, OutOfDomain
from harperlab.model import (
    Coupling,
    Criticality,
    Region,
    c_zeros,
    classify,
    coupling_integral,
    criticality,
    duality,
    i_closed_form,
    is_alpha_rational,
    lambda_pm,
    mean_log_abs_c,
    sampling_functions,
)

GOLDEN = float(golden_mean())


def random_couplings(n, seed=0, positive_l2=True):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        l1, l3 = rng.uniform(0, 3, 2)
        l2 = rng.uniform(0.05 if positive_l2 else 0.0, 3)
        try:
            out.append(Coupling(l1, l2, l3))
        except InvalidCoupling:
            continue
    return out


def test_coupling_normalization():
    with pytest.raises(InvalidCoupling):
        Coupling(0, 0, 0)
    with pytest.raises(InvalidCoupling):
        Coupling(1, -0.5, 1)


def test_sampling_functions_amo():
    lam = Coupling(0, 1, 0)
    for th in (0.0, 0.3, 0.77):
        c, v = sampling_functions(lam, GOLDEN, th)
        assert c == pytest.approx(1.0)
        assert v == pytest.approx(2 * math.cos(2 * math.pi * th))


def test_sampling_functions_symmetric_peak():
    lam = Coupling(1, 0, 1)
    th = -GOLDEN / 2  # theta + alpha/2 = 0
    c, _ = sampling_functions(lam, GOLDEN, th)
    assert c == pytest.approx(2.0)


def test_sampling_functions_double_root_case():
    lam = Coupling(0.5, 1, 0.5)
    th = 0.5 - GOLDEN / 2
    c, _ = sampling_functions(lam, GOLDEN, th)
    assert abs(c) < 1e-12


def test_classify_examples():
    assert classify(Coupling(0, 1, 0)).region is Region.L_II
    assert classify(Coupling(0, 1, 0)).in_self_dual
    assert classify(Coupling(0.2, 2.0, 0.3)).region is Region.II_INTERIOR
    lab = classify(Coupling(1, 1, 1))
    assert lab.region is Region.III_INTERIOR and lab.nnn_isotropic
    assert classify(Coupling(0.5, 0.5, 0.2)).region is Region.I_INTERIOR
    assert classify(Coupling(0.4, 1.0, 0.6)).region is Region.L_II
    assert classify(Coupling(0.3, 0.8, 0.7)).region is Region.L_I
    assert classify(Coupling(1.0, 2.0, 1.0)).region is Region.L_III
    # corner (s, l2) = (1, 1) resolves to L_II
    assert classify(Coupling(0.5, 1.0, 0.5)).region is Region.L_II
    # lambda2 = 0 axis
    assert classify(Coupling(1, 0, 2)).region is Region.AXIS_SUPER
    assert classify(Coupling(0.2, 0, 0.3)).region is Region.AXIS_SUB
    # s = 0 edge folds into the adjacent interior
    assert classify(Coupling(0, 0.5, 0)).region is Region.I_INTERIOR
    assert classify(Coupling(0, 2.0, 0)).region is Region.II_INTERIOR


def test_duality_examples():
    assert duality(Coupling(0, 1, 0)).as_tuple() == (0, 1, 0)
    assert duality(Coupling(1, 2, 1)).as_tuple() == (0.5, 0.5, 0.5)
    assert duality(Coupling(1, 0, 2)).as_tuple() == (2, 1, 1)


def test_duality_involution_random():
    for lam in random_couplings(1000, seed=1):
        back = duality(duality(lam))
        for a, b in zip(back.as_tuple(), lam.as_tuple()):
            assert abs(a - b) < 1e-14 * max(1.0, abs(b))


def test_region_duality_map():
    swap = {
        Region.I_INTERIOR: Region.II_INTERIOR,
        Region.II_INTERIOR: Region.I_INTERIOR,
        Region.III_INTERIOR: Region.III_INTERIOR,
        Region.L_I: Region.L_III,
        Region.L_III: Region.L_I,
        Region.L_II: Region.L_II,
    }
    for lam in random_couplings(1000, seed=2):
        r = classify(lam).region
        rd = classify(duality(lam)).region
        if r in swap:
            assert rd is swap[r], (lam, r, rd)


def test_self_dual_closed_under_duality():
    for lam in random_couplings(1000, seed=3):
        if classify(lam).in_self_dual:
            assert classify(duality(lam)).in_self_dual


def test_c_zeros_examples():
    assert c_zeros(Coupling(0, 1, 0), GOLDEN) == []
    z = c_zeros(Coupling(0.5, 1, 0.5), 0.0)
    assert z == [(0.5, 2)]
    z = c_zeros(Coupling(1, 1, 1), 0.0)
    assert len(z) == 2 and all(m == 1 for _, m in z)
    angles = sorted(a for a, _ in z)
    assert angles[0] == pytest.approx(1 / 3, abs=1e-12)
    assert angles[1] == pytest.approx(2 / 3, abs=1e-12)
    # anisotropic simple root on s = lambda2
    z = c_zeros(Coupling(0.3, 1.0, 0.7), GOLDEN)
    assert len(z) == 1 and z[0][1] == 1
    assert z[0][0] == pytest.approx((0.5 - GOLDEN / 2) % 1.0, abs=1e-12)


def test_c_zeros_consistency_scan():
    # every reported zero annihilates c; no unreported minima below 1e-6
    grid = np.arange(1 << 16) / (1 << 16)
    for lam in (Coupling(1, 1, 1), Coupling(0.5, 1, 0.5), Coupling(0.3, 1.0, 0.7),
                Coupling(2, 1, 0.5), Coupling(1.3, 0.9, 1.1)):
        zs = c_zeros(lam, GOLDEN)
        c, _ = sampling_functions(lam, GOLDEN, np.array([a for a, _ in zs]))
        if zs:
            assert np.max(np.abs(c)) < 1e-10
        cg, _ = sampling_functions(lam, GOLDEN, grid)
        small = np.abs(cg) < 1e-6
        if zs:
            dist = np.min(
                np.abs((grid[:, None] - np.array([a for a, _ in zs])[None, :] + 0.5) % 1.0 - 0.5),
                axis=1,
            )
            assert np.all(dist[small] < 1e-2)
        else:
            assert not small.any()


def test_is_alpha_rational():
    found, n = is_alpha_rational(0.0, GOLDEN)
    assert found and n == 0
    found, n = is_alpha_rational(GOLDEN / 2, GOLDEN)
    assert found and n == -1
    found, _ = is_alpha_rational(0.123456, GOLDEN, n_max=10**4, tol=1e-9)
    assert not found


def test_vieta_relations():
    for gamma in np.linspace(0.0, 10.0, 23):
        lp, lm = lambda_pm(gamma)
        assert abs(lp + lm - 1.0) < 1e-14
        assert abs(lp * lm - gamma) < 1e-14 * max(1.0, gamma)


def test_coupling_integral_closed_forms():
    assert i_closed_form(Coupling(2, 1, 0.5)) == pytest.approx(math.log(2.0))
    assert i_closed_form(Coupling(0.5, 1, 0)) == 0.0
    want = math.log(0.36 / (1 - math.sqrt(0.28)))  # 2 l1 l3 / (1 - sqrt(1 - 4 l1 l3))
    assert i_closed_form(Coupling(0.3, 1, 0.6)) == pytest.approx(want, abs=1e-12)
    with pytest.raises(OutOfDomain):
        i_closed_form(Coupling(0.2, 0.5, 0.1))


def test_coupling_integral_quadrature_agreement():
    # zero-free couplings: 1e-6; simple zeros: 1e-3
    for lam in (Coupling(2, 1, 0.5), Coupling(0.3, 1, 0.6)):
        d = coupling_integral(lam, GOLDEN)
        assert abs(d.I_closed - d.I_quadrature) < 1e-6
    for lam in (Coupling(1, 1, 1), Coupling(0.5, 1, 0.5)):
        d = coupling_integral(lam, GOLDEN)
        assert abs(d.I_closed - d.I_quadrature) < 1e-3


def test_mean_log_abs_c_amo():
    assert mean_log_abs_c(Coupling(0, 0.5, 0)) == pytest.approx(math.log(0.5), abs=1e-12)


def test_criticality_cases():
    assert criticality(Coupling(0.2, 0.5, 0.1)) is Criticality.SUPERCRITICAL
    assert criticality(Coupling(1, 1, 1)) is Criticality.CRITICAL
    assert criticality(Coupling(2, 1, 0.5)) is Criticality.SUBCRITICAL
    assert criticality(Coupling(0, 1, 0)) is Criticality.CRITICAL
    assert criticality(Coupling(0.2, 2.0, 0.3)) is Criticality.SUBCRITICAL
    assert criticality(Coupling(0.5, 0.8, 0.5)) is Criticality.CRITICAL  # L_I
    assert criticality(Coupling(1, 0, 2)) is Criticality.AXIS
    assert criticality(Coupling(0, 0.5, 0)) is Criticality.SUPERCRITICAL
    assert criticality(Coupling(0, 2.0, 0)) is Criticality.SUBCRITICAL
