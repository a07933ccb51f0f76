import math

import numpy as np
import pytest

from harperlab.contfrac import golden_mean
from harperlab.cocycles import (
    AccelerationEstimate,
    CocycleSpec,
    Variant,
    acceleration,
    complexified_le,
    ids_from_rotation,
    lyapunov,
    profile_batch,
    rotation_number,
    spectrum_test,
    step_matrix,
)
from harperlab.errors import InsufficientGrid, SingularModel
from harperlab.model import Coupling
from harperlab.spectra import density_of_states

GOLDEN = float(golden_mean())


def test_step_matrix_amo():
    spec = CocycleSpec(Coupling(0, 1, 0), GOLDEN, 2.5)
    m = step_matrix(spec, 0.3)
    want = np.array([[2.5 - 2 * math.cos(2 * math.pi * 0.3), -1.0], [1.0, 0.0]])
    assert np.allclose(m, want, atol=1e-12)


def test_step_matrix_sharp_equals_jacobi_for_amo():
    for th in (0.0, 0.21, 0.77):
        a = step_matrix(CocycleSpec(Coupling(0, 1, 0), GOLDEN, 1.3), th)
        s = step_matrix(
            CocycleSpec(Coupling(0, 1, 0), GOLDEN, 1.3, variant=Variant.NORMALIZED_SHARP), th
        )
        assert np.allclose(a, s, atol=1e-12)


def test_step_matrix_symmetric_triple_hand_expansion():
    # lambda = (1,1,1), alpha = 0, theta = 0, E = 0: c = 3, ct(-0) = 3, v = 2
    spec = CocycleSpec(Coupling(1, 1, 1), 0.0, 0.0)
    m = step_matrix(spec, 0.0)
    assert np.allclose(m, np.array([[-2.0, -3.0], [3.0, 0.0]]), atol=1e-12)


def test_step_matrix_complexified_entries():
    # e^{2 pi i (theta + i eps)} picks up e^{-2 pi eps}
    spec = CocycleSpec(Coupling(0, 1, 0), GOLDEN, 0.0, epsilon=0.2)
    m = step_matrix(spec, 0.1)
    z = 0.1 + 0.2j
    v = 2 * np.cos(2 * np.pi * z)
    assert np.allclose(m[0, 0], -v, atol=1e-12)


def test_sharp_determinant_random():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(200):
        lam = Coupling(rng.uniform(0.1, 2), rng.uniform(0.3, 2), rng.uniform(0.1, 2))
        spec = CocycleSpec(
            lam, GOLDEN, rng.uniform(-3, 3), rng.uniform(-0.4, 0.4),
            variant=Variant.NORMALIZED_SHARP,
        )
        m = step_matrix(spec, rng.uniform(0, 1))
        worst = max(worst, abs(np.linalg.det(m) - 1.0))
    assert worst < 1e-12


def test_sharp_determinant_along_orbits():
    # the kernel tracks the worst |det - 1| across every step it takes:
    # n_iter x phases ~ 3e5 random (theta, spec) samples
    est = lyapunov(CocycleSpec(Coupling(1.3, 1.1, 0.7), GOLDEN, 0.4, 0.1,
                               variant=Variant.NORMALIZED_SHARP),
                   n_iter=10_000, n_phases=32)
    assert est.det_residual < 1e-12


def test_step_matrix_singular_orbit_point():
    from harperlab.errors import SingularOrbitPoint
    from harperlab.model import c_zeros

    lam = Coupling(0.5, 1, 0.5)
    zero = c_zeros(lam, GOLDEN)[0][0]
    for variant in (Variant.TRANSFER_B, Variant.NORMALIZED_SHARP):
        with pytest.raises(SingularOrbitPoint):
            step_matrix(CocycleSpec(lam, GOLDEN, 0.0, variant=variant), zero)


def test_lyapunov_uniformly_hyperbolic_energy():
    lam = Coupling(1, 1, 1)
    e_far = 2.0 + 2 * 3.0 + 10.0  # ||v|| + 2 ||c|| + 10
    est = lyapunov(CocycleSpec(lam, GOLDEN, e_far), n_iter=4000, n_phases=16)
    assert est.value > 0
    assert np.all(np.abs(est.per_phase - est.value) <= 3 * est.phase_std + 1e-9)


def test_lyapunov_supercritical_amo_value():
    # (0, 0.5, 0): L(E;0) = log 2 on the spectrum (Aubry-Andre)
    est = lyapunov(CocycleSpec(Coupling(0, 0.5, 0), GOLDEN, 0.0), n_iter=30_000, n_phases=32)
    assert est.value - math.log(0.5) == pytest.approx(math.log(2.0), abs=5e-3)


def test_lyapunov_transfer_vs_jacobi_relation():
    lam = Coupling(2, 1, 0.5)
    from harperlab.model import mean_log_abs_c

    a = lyapunov(CocycleSpec(lam, GOLDEN, 0.7), n_iter=20_000, n_phases=16)
    b = lyapunov(CocycleSpec(lam, GOLDEN, 0.7, variant=Variant.TRANSFER_B),
                 n_iter=20_000, n_phases=16)
    assert a.value - mean_log_abs_c(lam, GOLDEN) == pytest.approx(b.value, abs=2e-2)


def test_lyapunov_conjugacy_invariance():
    spec = CocycleSpec(Coupling(0, 0.5, 0), GOLDEN, 0.0)
    a = lyapunov(spec, n_iter=20_000, n_phases=16)
    b = lyapunov(spec, n_iter=20_000, n_phases=16, conjugate=np.diag([2.0, 0.5]))
    assert abs(a.value - b.value) < 2e-2


def test_lyapunov_convergence_with_n_iter():
    spec = CocycleSpec(Coupling(0, 0.5, 0), GOLDEN, 0.0)
    a = lyapunov(spec, n_iter=10_000, n_phases=16)
    b = lyapunov(spec, n_iter=20_000, n_phases=16)
    assert abs(a.value - b.value) < 5.0 / math.sqrt(10_000)


def test_profile_critical_amo():
    prof = complexified_le(Coupling(0, 1, 0), GOLDEN, 0.0,
                           eps_grid=np.linspace(-1, 1, 41), n_iter=30_000, n_phases=32)
    ok, report = prof.check_invariants()
    assert ok, report
    i0 = len(prof.eps_grid) // 2
    assert abs(prof.L_values[i0]) < 2e-2  # zero exponent at the critical point
    assert np.argmin(prof.L_values) in (i0 - 1, i0, i0 + 1)
    # asymptotic slopes quantize to +-1 for the almost Mathieu cocycle
    acc_right = acceleration(prof, prof.eps_grid[-5])
    assert acc_right.quantized == pytest.approx(1.0)
    assert acc_right.residual < 0.1


def test_profile_evenness_and_min_at_zero_generic():
    prof = complexified_le(Coupling(2, 1, 0.5), GOLDEN, 1.0,
                           eps_grid=np.linspace(-0.5, 0.5, 21), n_iter=20_000, n_phases=32)
    ok, report = prof.check_invariants()
    assert ok, report


def test_acceleration_subcritical_zero_and_requires_grid():
    lam = Coupling(2, 1, 0.5)
    sample = density_of_states(lam, GOLDEN, n=128, n_phases=16)
    e_mid = float(np.quantile(sample.eigenvalues, 0.5))
    h = 0.025
    eps = np.array([-4 * h, -3 * h, -2 * h, -h, 0, h, 2 * h, 3 * h, 4 * h])
    prof = complexified_le(lam, GOLDEN, e_mid, eps, n_iter=40_000, n_phases=32)
    acc = acceleration(prof, 0.0)
    assert acc.quantized == 0.0
    assert acc.residual < 0.1
    with pytest.raises(InsufficientGrid):
        acceleration(prof, float(eps[-2]))
    with pytest.raises(InsufficientGrid):
        acceleration(prof, 0.013)


def test_acceleration_critical_amo_jump():
    h = 0.025
    eps = np.array([-4 * h, -3 * h, -2 * h, -h, 0, h, 2 * h, 3 * h, 4 * h])
    sample = density_of_states(Coupling(0, 1, 0), GOLDEN, n=128, n_phases=16)
    e_mid = float(np.quantile(sample.eigenvalues, 0.5))
    prof = complexified_le(Coupling(0, 1, 0), GOLDEN, e_mid, eps,
                           n_iter=40_000, n_phases=32)
    acc = acceleration(prof, 0.0)
    assert acc.quantized >= 0.5


def test_spectrum_test_trichotomy():
    lam = Coupling(0, 0.5, 0)
    assert spectrum_test(lam, GOLDEN, 2.0 + 2 * 0.5 + 10.0, budget=20_000, n_phases=16) == "outside"
    assert spectrum_test(lam, GOLDEN, 0.0, budget=20_000, n_phases=16) == "inside"
    assert spectrum_test(Coupling(0, 1, 0), GOLDEN, 0.0, budget=20_000, n_phases=16) == "undecided"


def test_spectrum_test_cross_validated_against_truncations():
    lam = Coupling(0, 0.5, 0)
    sample = density_of_states(lam, GOLDEN, n=128, n_phases=16)
    assert sample.ids(0.0 + 0.05) - sample.ids(0.0 - 0.05) > 0  # 0 carries spectral mass


def test_rotation_number_monotone_and_drift():
    lam = Coupling(0, 1, 0)
    rs = [rotation_number(lam, GOLDEN, e, n_iter=20_000) for e in (-4.5, 0.0, 4.5)]
    ns = [ids_from_rotation(r) for r in rs]
    assert ns[0] == pytest.approx(0.0, abs=1e-3)
    assert ns[1] == pytest.approx(0.5, abs=5e-3)
    assert ns[2] == pytest.approx(1.0, abs=1e-3)
    assert all(r.drift < 1e-3 for r in rs)


def test_rotation_number_singular_model():
    with pytest.raises(SingularModel):
        rotation_number(Coupling(1, 1, 1), GOLDEN, 0.0)


def test_profile_batch_matches_single():
    lam = Coupling(0, 0.5, 0)
    eps = np.linspace(-0.2, 0.2, 9)
    profs = profile_batch(lam, GOLDEN, [0.0, 1.0], eps, n_iter=10_000, n_phases=16)
    single = complexified_le(lam, GOLDEN, 1.0, eps, n_iter=10_000, n_phases=16)
    assert np.allclose(profs[1].L_values, single.L_values, atol=1e-12)


def test_profile_rejects_asymmetric_grid():
    with pytest.raises(ValueError):
        complexified_le(Coupling(0, 1, 0), GOLDEN, 0.0, np.array([0.0, 0.1, 0.2]))
