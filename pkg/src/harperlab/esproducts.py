"""Trigonometric sums S(q, z), their circle suprema, and quasi-periodic
ergodic-average bounds.

S(q, z) = sum_{k=0}^{q-1} log|e^{2 pi i k alpha} z - 1| for |z| = 1. With
z = e^{2 pi i theta} every term is log(2|sin(pi(theta + k alpha))|), so S is
the log of a trigonometric product over the rotation orbit. The liminf over
convergent denominators q_n of sup_z S(q_n, z) is finite for every
irrational alpha; specially constructed frequencies push individual terms up
to (1-c) log q_{n+1}, which the tracker exposes through sup/log q_{n+1}
ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ._kernels import es_sum_grid, es_sum_single
from .contfrac import ContinuedFraction, dist_to_integers, parity_subsequence
from .errors import CapExceeded, SingularPoint

SINGULARITY_GUARD = 1e-14
GRID_OFFSET = 1.0 / (2.0 * math.e)  # keeps equispaced grids off lattice points


def s_sum(q: int, alpha: float, z_angle: float) -> float:
    """S(q, z) at z = e^{2 pi i z_angle}, compensated summation.

    Raises SingularPoint if z lies within 1e-14 (in angle) of a singular
    point e^{-2 pi i k alpha}, k < q.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    k = np.arange(q, dtype=float)
    if float(np.min(dist_to_integers(z_angle + k * alpha))) < SINGULARITY_GUARD:
        raise SingularPoint(f"z within {SINGULARITY_GUARD} of a singular angle")
    return float(es_sum_single(q, float(alpha), float(z_angle)))


def _golden_section_max(f, a: float, b: float, tol: float) -> Tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def sup_s_sum(q: int, alpha: float, n_grid: Optional[int] = None) -> Tuple[float, float]:
    """(argmax_angle, sup_value) of S(q, .) over the unit circle.

    Grid search over max(4096, 64 q) offset equispaced angles, then
    golden-section refinement of the best bracket to angular tolerance 1e-12.
    The result never falls below the best grid value.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    N = int(n_grid) if n_grid is not None else max(4096, 64 * q)
    theta0 = GRID_OFFSET / N
    vals = np.empty(N)
    es_sum_grid(q, float(alpha), theta0, N, vals)
    g = int(np.argmax(vals))  # first max wins: deterministic tie-break
    best_grid = float(vals[g])
    center = theta0 + g / N

    def f(th):
        return float(es_sum_single(q, float(alpha), th))

    arg, val = _golden_section_max(f, center - 1.0 / N, center + 1.0 / N, 1e-12)
    if val >= best_grid:
        return arg % 1.0, val
    return center % 1.0, best_grid


@dataclass
class SupEntry:
    n: int
    q: int
    sup_value: float
    argmax_angle: float


@dataclass
class SupSeries:
    entries: List[SupEntry]
    running_min: float
    ratios_next_log: List[Optional[float]] = field(default_factory=list)
    """sup_value / log(q_{n+1}) per entry (None where q_{n+1} is unknown)."""

    def csv_rows(self):
        rmin = math.inf
        rows = []
        for e in self.entries:
            rmin = min(rmin, e.sup_value)
            rows.append((e.n, e.q, e.sup_value, e.argmax_angle, rmin))
        return rows


DEFAULT_Q_CAP = 10**6


def liminf_track(cf: ContinuedFraction, n_max: int, q_cap: int = DEFAULT_Q_CAP) -> SupSeries:
    """Track sup_z S(q_n, z) for n = 1..n_max with the running minimum.

    Also records sup/log(q_{n+1}) ratios, the Liouville-type growth
    diagnostic that the counterexample frequencies are built to violate.
    """
    if len(cf.convergents) < n_max:
        raise ValueError("continued fraction has too few convergents")
    alpha = cf.alpha_float
    entries = []
    ratios = []
    rmin = math.inf
    for n in range(1, n_max + 1):
        q = cf.q_at(n)
        if q > q_cap:
            raise CapExceeded(f"q_{n} = {q} exceeds cap {q_cap}")
        arg, val = sup_s_sum(q, alpha)
        entries.append(SupEntry(n=n, q=q, sup_value=val, argmax_angle=arg))
        rmin = min(rmin, val)
        if n < len(cf.convergents):
            q_next = cf.q_at(n + 1)
            ratios.append(val / math.log(q_next) if q_next > 1 else None)
        else:
            ratios.append(None)
    return SupSeries(entries=entries, running_min=rmin, ratios_next_log=ratios)


def select_prozero_indices(cf: ContinuedFraction, n_max: int, slack: float = 1.0,
                           series: Optional[SupSeries] = None):
    """Indices along which the uniform ergodic upper bound is asserted:
    near-minimizers of the circle sup intersected with the constant-parity
    class of p_n + q_n. Falls back to the parity class alone if the
    intersection is empty."""
    if series is None:
        series = liminf_track(cf, n_max)
    parity_idx, label = parity_subsequence(cf)
    parity_set = {n for n in parity_idx if n <= n_max}
    near = {e.n for e in series.entries if e.sup_value <= series.running_min + slack}
    chosen = sorted(parity_set & near)
    if not chosen:
        chosen = sorted(parity_set)
    return chosen, label, series


class CircleFunctionSpec:
    """f(x) = g(x) * prod_j (e^{2 pi i x} - e^{2 pi i x_j})^{m_j} with g a
    zero-free trigonometric polynomial given by Fourier coefficients.

    mean_log = integral of log|f| over the circle. Each zero factor
    integrates to 0 (Jensen), so only log|g| needs quadrature; g is smooth
    and periodic, so the 2^16-point uniform rule converges spectrally.
    """

    def __init__(self, zeros: Sequence[Tuple[float, int]], zero_free_coeffs: dict,
                 mean_log: Optional[float] = None):
        self.zeros = [(float(x) % 1.0, int(m)) for x, m in zeros]
        self.coeffs = {int(k): complex(v) for k, v in zero_free_coeffs.items()}
        if not self.coeffs:
            raise ValueError("zero-free part must have at least one coefficient")
        grid = np.arange(4096) / 4096.0
        gv = self._g(grid)
        if np.min(np.abs(gv)) <= 1e-12:
            raise ValueError("zero_free_part vanishes somewhere on the circle")
        if mean_log is None:
            fine = np.arange(65536) / 65536.0
            mean_log = float(np.mean(np.log(np.abs(self._g(fine)))))
        self.mean_log = mean_log

    def _g(self, x):
        z = np.exp(2j * np.pi * np.asarray(x, dtype=float))
        out = np.zeros_like(z, dtype=complex)
        for k, c in self.coeffs.items():
            out += c * z**k
        return out

    def log_abs(self, x):
        """log|f| pointwise; -inf at zeros."""
        x = np.asarray(x, dtype=float)
        out = np.log(np.abs(self._g(x)))
        for xj, m in self.zeros:
            s = 2.0 * np.abs(np.sin(np.pi * (x - xj)))
            with np.errstate(divide="ignore"):
                out = out + m * np.log(s)
        return out

    def min_zero_distance(self, x):
        x = np.asarray(x, dtype=float)
        if not self.zeros:
            return np.full_like(x, 0.5)
        d = np.full_like(x, np.inf)
        for xj, _ in self.zeros:
            d = np.minimum(d, dist_to_integers(x - xj))
        return d


def ergodic_upper_bound(f: CircleFunctionSpec, cf: ContinuedFraction,
                        indices: Sequence[int], x_grid: int = 1024):
    """Worst-case normalized Birkhoff excess per index:

        D_l = max_x [ sum_{j<q_l} log|f(x + j alpha)| - q_l * mean_log ].

    The x grid is offset by an irrational shift; grid points whose orbit
    passes within 1e-14 of a zero of f are skipped and counted, more than 1%
    of skips raises SingularPoint.
    """
    if x_grid < 10**3:
        raise ValueError("x_grid must be >= 1e3")
    alpha = cf.alpha_float
    xs = (np.arange(x_grid) / x_grid + GRID_OFFSET) % 1.0
    out = {}
    for n in indices:
        q = cf.q_at(n)
        orbit = (xs[:, None] + alpha * np.arange(q)[None, :]) % 1.0
        bad = f.min_zero_distance(orbit).min(axis=1) < SINGULARITY_GUARD
        n_bad = int(bad.sum())
        if n_bad > 0.01 * x_grid:
            raise SingularPoint(f"{n_bad}/{x_grid} grid orbits hit zeros of f")
        sums = f.log_abs(orbit).sum(axis=1)
        sums[bad] = -np.inf
        out[n] = float(np.max(sums - q * f.mean_log))
    return out


def harmonic_average_error(h_coeffs: dict, cf: ContinuedFraction, x: float, n: int) -> float:
    """|(1/q_n) sum_{j<q_n} h(x + j alpha) - h_hat(0)| for a real trigonometric
    polynomial h given by Fourier coefficients {k: h_hat(k)}."""
    q = cf.q_at(n)
    alpha = cf.alpha_float
    pts = (x + alpha * np.arange(q)) % 1.0
    z = np.exp(2j * np.pi * pts)
    total = np.zeros(q, dtype=complex)
    h0 = 0.0
    for k, c in h_coeffs.items():
        if k == 0:
            h0 = complex(c).real
        total += complex(c) * z ** int(k)
    if np.max(np.abs(total.imag)) > 1e-9 * max(1.0, np.max(np.abs(total.real))):
        raise ValueError("h must be real-valued (conjugate-symmetric coefficients)")
    return abs(float(np.mean(total.real)) - h0)


def harmonic_bound_constant(h_coeffs: dict, factor: float = 8.0) -> float:
    """factor * sum_k |h_hat(k)| |k|, the proof-side constant for the
    harmonic Birkhoff bound (q_n * error <= constant, all n)."""
    return factor * sum(abs(complex(c)) * abs(int(k)) for k, c in h_coeffs.items())
