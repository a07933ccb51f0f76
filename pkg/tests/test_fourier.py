import math

import numpy as np
import pytest

from harperlab.contfrac import expand, golden_mean
from harperlab.errors import AlphaRationalTheta, OutOfDomain
from harperlab.fourier import (
    boundary_coeff_closed,
    boundary_coeff_oracle,
    det_sequence,
    i_sigma,
    in_spectrum_probe,
    l1_upper_proxy,
    limsup_lower_bound_test,
    oracle_coefficients,
    oracle_normalized_pair,
    psi_hat_normalized,
)
from harperlab.model import Coupling

GOLDEN = float(golden_mean())
THETA = 0.123456

SD_FIXTURES = [
    Coupling(0, 1, 0),
    Coupling(1, 1, 1),
    Coupling(2, 1, 0.5),
    Coupling(0.3, 1, 0.6),
    Coupling(1.5, 1.2, 0.9),
    Coupling(1, 0, 2),
]


def test_det_sequence_gamma_quarter_value():
    seq = det_sequence(0.25, 3, method="closed_form")
    assert seq.values[3] == 0.5  # (n+1) (1/2)^n at n=3, exactly
    rec = det_sequence(0.25, 3, method="recursion")
    assert rec.values[3] == pytest.approx(0.5, abs=1e-15)


def test_det_sequence_gamma_zero_all_ones():
    assert np.all(det_sequence(0.0, 20, method="closed_form").values == 1.0)
    assert np.all(det_sequence(0.0, 20, method="recursion").values == 1.0)


def test_det_sequence_gamma_two_series():
    vals = det_sequence(2.0, 5, method="recursion").values
    assert list(vals) == [1.0, 1.0, -1.0, -3.0, -1.0, 5.0]


@pytest.mark.parametrize("gamma", [0.0, 0.1, 0.25, 0.5, 2.0, 10.0])
def test_det_sequence_recursion_vs_closed(gamma):
    rec = det_sequence(gamma, 60, method="recursion").values
    clo = det_sequence(gamma, 60, method="closed_form").values
    scale = np.maximum(1.0, np.abs(rec))
    assert np.max(np.abs(rec - clo) / scale) < 1e-10


def test_s_family_parity():
    prod = 1.5 * 0.8
    seq = det_sequence(prod, 30, family="s").values
    assert np.all(seq[1::2] == 0.0)
    for m in range(15):
        assert seq[2 * m] == pytest.approx((-1.0) ** m * prod**m, rel=1e-12)


def test_s_family_rejects_closed_form():
    with pytest.raises(ValueError):
        det_sequence(1.0, 5, family="s", method="closed_form")


def test_critical_amo_unit_coefficients():
    for n in (5, 8, 13, 21):
        p, m = boundary_coeff_oracle(Coupling(0, 1, 0), GOLDEN, THETA, 0.0, n)
        assert abs(abs(p) - 1.0) < 1e-9
        assert abs(abs(m) - 1.0) < 1e-9
        assert abs(psi_hat_normalized(Coupling(0, 1, 0), GOLDEN, THETA, n)) == pytest.approx(
            1.0, abs=1e-12
        )


def test_lambda2_zero_odd_coefficient_is_pure_cosine():
    lam = Coupling(1.5, 0, 0.5)
    for n in (5, 9):
        got = boundary_coeff_closed(lam, GOLDEN, THETA, n, +1)
        want = -2.0 * math.cos(2 * math.pi * n * THETA) * lam.lambda1**n * np.exp(
            1j * math.pi * GOLDEN * n * n
        )
        assert got == pytest.approx(want, abs=1e-10)


def test_closed_matches_oracle_matrix():
    # 6 couplings x fixture thetas x n: the 30-case agreement matrix
    thetas = [THETA, 0.371, 0.052]
    rng_n = [5, 13, 34, 64]
    worst = 0.0
    for lam in SD_FIXTURES:
        e_probe = in_spectrum_probe(lam, GOLDEN)
        for th in thetas[:2] if lam.lambda2 == 0 else thetas:
            for n in rng_n[:3] if lam.lambda2 == 0 else rng_n:
                cp = psi_hat_normalized(lam, GOLDEN, th, n, +1)
                cm = psi_hat_normalized(lam, GOLDEN, th, n, -1)
                op, om = oracle_normalized_pair(lam, GOLDEN, th, e_probe, n)
                worst = max(worst, abs(cp - op), abs(cm - om))
    assert worst < 1e-8


def test_boundary_coeff_energy_independence():
    lam = Coupling(1, 1, 1)
    base = in_spectrum_probe(lam, GOLDEN)
    vals = [
        boundary_coeff_oracle(lam, GOLDEN, THETA, base + de, 8)[0]
        for de in (-0.5, -0.1, 0.0, 0.2, 0.4)
    ]
    assert max(abs(v - vals[0]) for v in vals) < 1e-10


def test_degree_bound_aliased_slots():
    for lam in (Coupling(1, 1, 1), Coupling(2, 1, 0.5)):
        e_probe = in_spectrum_probe(lam, GOLDEN)
        n = 32
        freqs, coeffs = oracle_coefficients(lam, GOLDEN, THETA, e_probe, n)
        aliased = (np.abs(freqs) > n) & (np.abs(freqs) <= 2 * n)
        assert np.max(np.abs(coeffs[aliased])) < 1e-9


def test_oracle_rejects_alpha_rational_theta():
    with pytest.raises(AlphaRationalTheta):
        oracle_coefficients(Coupling(0, 1, 0), GOLDEN, GOLDEN / 2, 0.0, 8)


def test_oracle_grid_too_small():
    with pytest.raises(ValueError):
        oracle_coefficients(Coupling(0, 1, 0), GOLDEN, THETA, 0.0, 8, grid_size=10)


def test_psi_hat_out_of_domain():
    with pytest.raises(OutOfDomain):
        psi_hat_normalized(Coupling(0.2, 0.5, 0.1), GOLDEN, THETA, 8)
    with pytest.raises(OutOfDomain):
        psi_hat_normalized(Coupling(0.2, 0, 0.3), GOLDEN, THETA, 8)


def test_i_sigma_values():
    assert i_sigma(Coupling(0, 1, 0)) == 0.0
    assert i_sigma(Coupling(2, 1, 0.5)) == pytest.approx(math.log(2.0))
    assert i_sigma(Coupling(1, 0, 2)) == pytest.approx(math.log(2.0))


def test_limsup_test_critical_amo_all_ones():
    cf = expand(golden_mean(), 18)
    series, verdict = limsup_lower_bound_test(
        Coupling(0, 1, 0), cf, THETA, levels=6, with_upper_proxy=False
    )
    assert verdict
    assert len(series.indices) == 18  # 6 levels x (q, 2q, 3q)
    assert all(abs(v - 1.0) < 1e-12 for v in series.normalized)


def test_limsup_test_anisotropic_tracks_cosine():
    cf = expand(golden_mean(), 18)
    lam = Coupling(2, 1, 0.5)
    series, verdict = limsup_lower_bound_test(lam, cf, THETA, levels=5,
                                              with_upper_proxy=False)
    assert verdict
    # for large m the normalized value approaches 2|cos(2 pi m theta)|
    for m, v in zip(series.indices, series.normalized):
        if m >= 26:
            assert v == pytest.approx(2 * abs(math.cos(2 * math.pi * m * THETA)), abs=5e-2)


def test_limsup_test_isotropic_uses_phase_phi():
    cf = expand(golden_mean(), 18)
    lam = Coupling(1, 1, 1)  # gamma = 1, phi = arctan(sqrt(3))/2pi = 1/6
    series, verdict = limsup_lower_bound_test(lam, cf, THETA, levels=5,
                                              with_upper_proxy=False)
    assert verdict
    omega = 2 * math.pi / 6.0  # arg(lambda_plus) at gamma = 1: phi = 1/6
    for m, v in zip(series.indices, series.normalized):
        want = abs(
            2 * math.cos(m * omega) * (-1) ** m * np.exp(-1j * math.pi * GOLDEN * m)
            - 2 * math.cos(2 * math.pi * m * THETA)
        )
        assert v == pytest.approx(want, abs=1e-9)


def test_limsup_test_rejects_alpha_rational_theta():
    cf = expand(golden_mean(), 12)
    with pytest.raises(AlphaRationalTheta):
        limsup_lower_bound_test(Coupling(0, 1, 0), cf, 0.5, levels=2)


def test_limsup_test_out_of_domain():
    cf = expand(golden_mean(), 12)
    with pytest.raises(OutOfDomain):
        limsup_lower_bound_test(Coupling(0.2, 0.5, 0.1), cf, THETA, levels=2)


def test_upper_proxy_dominates_lower_bound():
    # ||f||_1 >= |f_hat(k)|: the proxy can never undercut the normalized
    # coefficient; this is the structural reason the mechanism is a
    # contradiction under the eigenvalue hypothesis
    lam = Coupling(0, 1, 0)
    cf = expand(golden_mean(), 14)
    e_probe = in_spectrum_probe(lam, GOLDEN)
    for q in (3, 8, 13):
        proxy = l1_upper_proxy(lam, GOLDEN, THETA, e_probe, q)
        low = abs(psi_hat_normalized(lam, GOLDEN, THETA, max(q, 2)))
        assert proxy >= low - 1e-9
