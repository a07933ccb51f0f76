"""Acceptance criteria, runnable as a suite (CLI `harperlab verify`) and
asserted one-by-one in tests/test_acceptance.py.

Each criterion returns a CriterionResult with the measured numbers in
`detail`. `quick=True` shrinks sizes for a smoke run; the pass/fail
thresholds themselves never change.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .contfrac import counterexample_alpha, expand, golden_mean
from .cocycles import acceleration, profile_batch
from .esproducts import (
    CircleFunctionSpec,
    ergodic_upper_bound,
    liminf_track,
    select_prozero_indices,
    sup_s_sum,
)
from .fourier import (
    det_sequence,
    in_spectrum_probe,
    limsup_lower_bound_test,
    oracle_coefficients,
    oracle_normalized_pair,
    psi_hat_normalized,
)
from .model import Coupling, coupling_integral
from .spectra import density_of_states, duality_dos_check, ids_rotation_consistency

GOLDEN = float(golden_mean())
FIXTURE_THETA = 0.123456

# pinned harness constants (frozen on the first full run; regression values)
ES_RUNNING_MIN_BOUND = 3.0
SELECTION_SLACK = 1.0
HARMONIC_FACTOR = 8.0
TWO_PLUS_COS_CONSTANT = HARMONIC_FACTOR * (math.sqrt(3.0) - 1.0)  # 8 sum |k||h_k|
QUANT_RESIDUAL = 0.1
QUANT_FRACTION = 0.9
CONCORD_FRACTION = 0.9
DOS_DUALITY_TOL = 0.03
RHO_IDS_TOL = 0.03
I_LAMBDA_TOL_SMOOTH = 1e-6
I_LAMBDA_TOL_ZEROS = 1e-3
ORACLE_TOL = 1e-8
AMO_UNIT_TOL = 1e-9
DEGREE_TOL = 1e-9
DET_REL_TOL = 1e-10


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _timed(name: str, fn: Callable[[], tuple],
           budget: Optional[float] = None) -> CriterionResult:
    t0 = time.monotonic()
    passed, detail = fn()
    dt = time.monotonic() - t0
    if budget is not None:
        if dt >= budget:
            passed = False
        detail += f"; runtime {dt:.0f}s (< {budget:.0f}s)"
    return CriterionResult(name=name, passed=passed, detail=detail, seconds=dt)


def crit_es_boundedness(quick: bool = False) -> CriterionResult:
    """Golden-mean liminf of circle sups stays under the pinned constant;
    rational frequencies reproduce sup = log 2 to 1e-9."""

    def run():
        n_max = 6 if quick else 10
        cf = expand(golden_mean(), n_max + 2)
        series = liminf_track(cf, n_max)
        ok_min = series.running_min <= ES_RUNNING_MIN_BOUND
        q_top = 60 if quick else 500
        worst = 0.0
        for q in range(1, q_top + 1):
            p = 1
            while math.gcd(p, q) != 1:
                p += 1
            _, sup = sup_s_sum(q, p / q if q > 1 else 0.0)
            worst = max(worst, abs(sup - math.log(2.0)))
        ok_rat = worst < 1e-9
        detail = (f"running_min={series.running_min:.4f} (<= {ES_RUNNING_MIN_BOUND}); "
                  f"rational sup error max={worst:.2e} over q<= {q_top}")
        return ok_min and ok_rat, detail

    return _timed("erdos-szekeres boundedness", run, budget=60.0)


def crit_counterexample(quick: bool = False) -> CriterionResult:
    """Constructed frequency reaches sup S(q_n,.)/log q_{n+1} >= 0.5."""

    def run():
        cf = counterexample_alpha(2, 1)
        (n, n1, n2) = cf.counterexample_triples[0]
        ineq = (
            cf.q_at(n) > cf.q_at(n - 1) ** 2
            and cf.terms[n1 - 1] == 1
            and cf.q_at(n2) > 2 * cf.q_at(n1)
        )
        _, sup = sup_s_sum(cf.q_at(n), cf.alpha_float)
        ratio = sup / math.log(cf.q_at(n1))
        return (ineq and ratio >= 0.5), (
            f"triple=({n},{n1},{n2}) q=({cf.q_at(n)},{cf.q_at(n1)},{cf.q_at(n2)}) "
            f"ratio={ratio:.3f} (>= 0.5)"
        )

    return _timed("counterexample growth", run, budget=120.0)


def crit_ergodic_upper(quick: bool = False) -> CriterionResult:
    """Birkhoff excess of log|f|: zero-free f = 2 + cos bounded by the
    analytic harmonic constant at every index; f = e^{2 pi i x} - 1 bounded
    along the selected subsequence by the pinned circle-sup budget."""

    def run():
        n_max = 8 if quick else 12
        cf = expand(golden_mean(), n_max + 2)
        smooth = CircleFunctionSpec(zeros=[], zero_free_coeffs={0: 2.0, 1: 0.5, -1: 0.5})
        d_smooth = ergodic_upper_bound(smooth, cf, list(range(1, n_max + 1)))
        worst_smooth = max(d_smooth.values())
        ok_smooth = worst_smooth <= TWO_PLUS_COS_CONSTANT

        zf = CircleFunctionSpec(zeros=[(0.0, 1)], zero_free_coeffs={0: 1.0})
        chosen, _, series = select_prozero_indices(cf, n_max, slack=SELECTION_SLACK)
        d_zero = ergodic_upper_bound(zf, cf, chosen, x_grid=2048)
        worst_zero = max(d_zero.values())
        budget = ES_RUNNING_MIN_BOUND + SELECTION_SLACK
        ok_zero = worst_zero <= budget
        detail = (f"2+cos: max D={worst_smooth:.3f} <= {TWO_PLUS_COS_CONSTANT:.3f}; "
                  f"e^2pix-1 on {chosen}: max D={worst_zero:.3f} <= {budget}")
        return ok_smooth and ok_zero, detail

    return _timed("ergodic upper bound", run)


QUANT_COUPLINGS = [
    (Coupling(0, 0.5, 0), "supercritical"),
    (Coupling(2, 1, 0.5), "subcritical"),
    (Coupling(1, 1, 1), "critical"),
]


def _quantization_profiles(quick: bool):
    n_e = 6 if quick else 20
    n_iter = 60_000 if quick else 200_000
    n_phases = 32 if quick else 64
    # the 0.025 spacing is load-bearing: the eps = 0+ window must fit inside
    # the subcritical flat strip (first break near 0.11 for the fixture)
    eps = np.linspace(-0.5, 0.5, 41) if quick else np.linspace(-1.0, 1.0, 81)
    out = []
    for lam, expected in QUANT_COUPLINGS:
        sample = density_of_states(lam, GOLDEN, n=256, n_phases=16)
        es = np.quantile(sample.eigenvalues, np.linspace(0.025, 0.975, n_e))
        profs = profile_batch(lam, GOLDEN, es, eps, n_iter=n_iter, n_phases=n_phases)
        out.append((lam, expected, profs))
    return out


def crit_quantization_and_concordance(quick: bool = False):
    """Two results sharing one sweep: (a) interior window slopes round to
    half-integers with residual < 0.1 for >= 90% of windows and every
    profile satisfies the non-negativity/evenness/convexity invariants;
    (b) the eps = 0+ acceleration reproduces the declared criticality class
    for >= 90% of the sampled in-spectrum energies."""
    t0 = time.monotonic()
    data = _quantization_profiles(quick)
    n_windows = 0
    n_good = 0
    invariant_failures = []
    agree = 0
    total_e = 0
    for lam, expected, profs in data:
        for prof in profs:
            ok, report = prof.check_invariants()
            if not ok:
                invariant_failures.append((lam.as_tuple(), prof.energy, report))
            interior = prof.slopes[1:-1] if len(prof.slopes) > 2 else prof.slopes
            for s in interior:
                n_windows += 1
                if abs(s - round(2 * s) / 2.0) < QUANT_RESIDUAL:
                    n_good += 1
            acc = acceleration(prof, 0.0)
            i0 = len(prof.eps_grid) // 2
            l0 = float(prof.L_values[i0])
            if expected == "supercritical":
                hit = l0 > 0.05 and acc.quantized >= 0.5
            elif expected == "subcritical":
                hit = acc.quantized == 0.0
            else:
                hit = acc.quantized >= 0.5
            agree += int(hit)
            total_e += 1
    dt = time.monotonic() - t0
    frac = n_good / n_windows
    quant_pass = frac >= QUANT_FRACTION and not invariant_failures and dt < 600.0
    quant_detail = (f"half-integer windows: {n_good}/{n_windows} = {frac:.3f} "
                    f"(>= {QUANT_FRACTION}); invariant failures: {len(invariant_failures)}; "
                    f"runtime {dt:.0f}s (< 600)")
    conc_frac = agree / total_e
    conc_pass = conc_frac >= CONCORD_FRACTION
    conc_detail = f"class agreement {agree}/{total_e} = {conc_frac:.3f} (>= {CONCORD_FRACTION})"
    return (
        CriterionResult("quantization of acceleration", quant_pass, quant_detail, dt),
        CriterionResult("phase-diagram concordance", conc_pass, conc_detail, dt),
    )


def crit_determinants(quick: bool = False) -> CriterionResult:
    def run():
        worst = 0.0
        for gamma in (0.0, 0.1, 0.25, 0.5, 2.0, 10.0):
            rec = det_sequence(gamma, 60, method="recursion").values
            clo = det_sequence(gamma, 60, method="closed_form").values
            worst = max(worst, float(np.max(np.abs(rec - clo) / np.maximum(1.0, np.abs(rec)))))
        ok_rel = worst < DET_REL_TOL
        prod = 1.5 * 0.8
        s = det_sequence(prod, 30, family="s").values
        ok_s = bool(np.all(s[1::2] == 0.0)) and all(
            abs(s[2 * m] - (-1.0) ** m * prod**m) <= 1e-12 * max(1.0, prod**m)
            for m in range(16)
        )
        ok_quarter = det_sequence(0.25, 3, method="closed_form").values[3] == 0.5
        return (ok_rel and ok_s and ok_quarter,
                f"recursion-vs-closed rel err={worst:.2e}; s-parity exact: {ok_s}; "
                f"t_3(1/4)={det_sequence(0.25, 3, method='closed_form').values[3]}")

    return _timed("determinant machinery", run)


ORACLE_MATRIX = [
    Coupling(0, 1, 0),
    Coupling(1, 1, 1),
    Coupling(2, 1, 0.5),
    Coupling(0.3, 1, 0.6),
    Coupling(1.5, 1.2, 0.9),
]
ORACLE_THETAS = [0.123456, 0.371]
ORACLE_NS = [5, 13, 34]


def crit_boundary_oracle(quick: bool = False) -> CriterionResult:
    def run():
        worst = 0.0
        ns = ORACLE_NS[:2] if quick else ORACLE_NS
        for lam in ORACLE_MATRIX:
            e_probe = in_spectrum_probe(lam, GOLDEN)
            for th in ORACLE_THETAS:
                for n in ns:
                    cp = psi_hat_normalized(lam, GOLDEN, th, n, +1)
                    cm = psi_hat_normalized(lam, GOLDEN, th, n, -1)
                    op, om = oracle_normalized_pair(lam, GOLDEN, th, e_probe, n)
                    worst = max(worst, abs(cp - op), abs(cm - om))
        ok_matrix = worst < ORACLE_TOL

        amo = Coupling(0, 1, 0)
        worst_amo = 0.0
        for n in (5, 8, 13, 21):
            p, m = oracle_normalized_pair(amo, GOLDEN, FIXTURE_THETA, 0.0, n)
            worst_amo = max(worst_amo, abs(abs(p) - 1.0), abs(abs(m) - 1.0))
        ok_amo = worst_amo < AMO_UNIT_TOL

        lam = Coupling(1, 1, 1)
        n = 16 if quick else 32
        freqs, coeffs = oracle_coefficients(lam, GOLDEN, FIXTURE_THETA,
                                            in_spectrum_probe(lam, GOLDEN), n)
        aliased = (np.abs(freqs) > n) & (np.abs(freqs) <= 2 * n)
        worst_deg = float(np.max(np.abs(coeffs[aliased])))
        ok_deg = worst_deg < DEGREE_TOL
        return (ok_matrix and ok_amo and ok_deg,
                f"closed-vs-DFT worst={worst:.2e} over {len(ORACLE_MATRIX) * len(ORACLE_THETAS) * len(ns)} cases "
                f"(< {ORACLE_TOL}); AMO unit-modulus worst={worst_amo:.2e}; "
                f"degree-bound worst={worst_deg:.2e}")

    return _timed("boundary-coefficient oracle", run)


def crit_contradiction_demo(quick: bool = False) -> CriterionResult:
    """Normalized lower-bound series stays >= 0.5 at every level while the
    L1 upper proxy decreases over the first 6 levels.

    The proxy half cannot hold for the actual operator: the eigenvalue
    hypothesis that makes it o(1) is false here, and
    ||Psi||_1 >= |Psi_hat(q)| = 1 pins the proxy at its floor after a short
    transient. Implemented as stated; see the decisions ledger."""

    def run():
        levels = 4 if quick else 6
        cf = expand(golden_mean(), 20)
        series, verdict = limsup_lower_bound_test(
            Coupling(0, 1, 0), cf, FIXTURE_THETA, levels=levels, with_upper_proxy=True
        )
        lower_ok = verdict and all(v >= 0.5 for v in series.normalized)
        prox = series.upper_proxy
        decreasing = all(b < a for a, b in zip(prox, prox[1:]))
        detail = (f"lower series min={min(series.normalized):.3f} (>= 0.5 at all "
                  f"{len(series.indices)} entries); proxy={[round(p, 3) for p in prox]} "
                  f"decreasing={decreasing}")
        return lower_ok and decreasing, detail

    return _timed("contradiction mechanism demo", run)


def crit_dos_duality(quick: bool = False) -> CriterionResult:
    def run():
        n = 192 if quick else 512
        n_phases = 16 if quick else 64
        d = duality_dos_check(Coupling(1, 2, 1), GOLDEN, n=n, n_phases=n_phases)
        return d < DOS_DUALITY_TOL, f"max |N - N_dual(E/2)| = {d:.4f} (< {DOS_DUALITY_TOL}), n={n}"

    return _timed("dos duality invariance", run, budget=300.0)


def crit_rho_ids(quick: bool = False) -> CriterionResult:
    def run():
        lam = Coupling(0, 1, 0)
        n = 256 if quick else 512
        n_phases = 16 if quick else 64
        sample = density_of_states(lam, GOLDEN, n=n, n_phases=n_phases)
        lo, hi = sample.eigenvalues[0], sample.eigenvalues[-1]
        es = np.linspace(lo - 0.2, hi + 0.2, 20)
        res = ids_rotation_consistency(
            lam, GOLDEN, es, n_iter=40_000 if quick else 100_000, sample=sample
        )
        worst = max(res.values())
        return worst < RHO_IDS_TOL, f"max residual {worst:.4f} (< {RHO_IDS_TOL}) over 20 energies"

    return _timed("rho-ids consistency", run)


def crit_i_lambda(quick: bool = False) -> CriterionResult:
    def run():
        worst_smooth = 0.0
        for lam in (Coupling(2, 1, 0.5), Coupling(0.3, 1, 0.6)):
            d = coupling_integral(lam, GOLDEN)
            worst_smooth = max(worst_smooth, abs(d.I_closed - d.I_quadrature))
        worst_zero = 0.0
        for lam in (Coupling(1, 1, 1), Coupling(0.5, 1, 0.5)):
            d = coupling_integral(lam, GOLDEN)
            worst_zero = max(worst_zero, abs(d.I_closed - d.I_quadrature))
        ok = worst_smooth < I_LAMBDA_TOL_SMOOTH and worst_zero < I_LAMBDA_TOL_ZEROS
        return ok, (f"zero-free |closed - quadrature| = {worst_smooth:.2e} (< 1e-6); "
                    f"with zeros {worst_zero:.2e} (< 1e-3)")

    return _timed("coupling integral cross-check", run)


def run_all(quick: bool = False) -> List[CriterionResult]:
    results = [
        crit_es_boundedness(quick),
        crit_counterexample(quick),
        crit_ergodic_upper(quick),
    ]
    results.extend(crit_quantization_and_concordance(quick))
    results.extend([
        crit_determinants(quick),
        crit_boundary_oracle(quick),
        crit_contradiction_demo(quick),
        crit_dos_duality(quick),
        crit_rho_ids(quick),
        crit_i_lambda(quick),
    ])
    return results


def format_table(results: List[CriterionResult]) -> str:
    lines = []
    width = max(len(r.name) for r in results)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(f"{mark}  {r.name:<{width}}  {r.seconds:7.1f}s  {r.detail}")
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} criteria passed")
    return "\n".join(lines)
