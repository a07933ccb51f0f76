"""Finite truncations, eigenvalues, density of states, and the IDS checks.

Windows are plain orthogonal-projection (Dirichlet) cutoffs of the operator

    (H psi)_k = v(theta + k alpha) psi_k + c(theta + k alpha) psi_{k+1}
              + conj(c(theta + (k-1) alpha)) psi_{k-1},

so the n x n window has diagonal v(theta + k alpha) and first off-diagonal
c(theta + k alpha). The window is unitarily equivalent to the real-symmetric
tridiagonal matrix with |c| off-diagonals, which is what the Sturm-bisection
eigensolver consumes. The density of states pools eigenvalues over an
equidistributed phase lattice; its cumulative function N(E) ties to the
fibered rotation number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ._kernels import sturm_count, tridiag_eigvals_bisect
from .cocycles import ids_from_rotation, phase_lattice, rotation_number
from .model import Coupling, duality, sampling_functions

BLOCK_SPLIT_TOL = 1e-14
DEFAULT_EIG_TOL = 1e-10


@dataclass
class TridiagonalOperatorWindow:
    diag: np.ndarray  # real, length n
    offdiag: np.ndarray  # complex, length n-1
    theta: float
    alpha: float
    coupling: Coupling
    zero_diagonal: bool = False

    @property
    def n(self) -> int:
        return len(self.diag)

    @property
    def block_splits(self) -> List[int]:
        """Indices k with |c_k| below the split tolerance: the window is a
        direct sum of the blocks [0..k] and [k+1..]."""
        return [int(k) for k in np.nonzero(np.abs(self.offdiag) < BLOCK_SPLIT_TOL)[0]]

    def symmetrized(self) -> Tuple[np.ndarray, np.ndarray]:
        """(diag, |offdiag|): the unitarily equivalent real window."""
        return self.diag.copy(), np.abs(self.offdiag)

    def dense(self) -> np.ndarray:
        h = np.diag(self.diag.astype(complex))
        for k, c in enumerate(self.offdiag):
            h[k, k + 1] = c
            h[k + 1, k] = np.conj(c)
        return h


def truncate(coupling: Coupling, alpha: float, theta: float, n: int,
             zero_diagonal: bool = False) -> TridiagonalOperatorWindow:
    """n x n Dirichlet window at phase theta. zero_diagonal drops the
    potential (the lambda2 = 0 dual operator)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(n)
    c, v = sampling_functions(coupling, alpha, (theta + k * alpha) % 1.0)
    diag = np.zeros(n) if zero_diagonal else np.asarray(v, dtype=float)
    off = np.asarray(c, dtype=complex)[: n - 1] if n > 1 else np.empty(0, dtype=complex)
    return TridiagonalOperatorWindow(
        diag=diag, offdiag=off, theta=theta, alpha=alpha,
        coupling=coupling, zero_diagonal=zero_diagonal,
    )


def eigenvalues(window: TridiagonalOperatorWindow, tol: float = DEFAULT_EIG_TOL) -> np.ndarray:
    """All eigenvalues to absolute accuracy tol, via Gershgorin brackets and
    Sturm-count bisection on the symmetrized window. Zero off-diagonals
    split the problem into independent blocks merged at the end."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    diag, off = window.symmetrized()
    splits = window.block_splits
    out = []
    start = 0
    for cut in splits + [window.n - 1]:
        d = diag[start:cut + 1]
        e = off[start:cut]
        if len(d) == 1:
            out.append(np.array([d[0]]))
        else:
            out.append(tridiag_eigvals_bisect(np.ascontiguousarray(d),
                                              np.ascontiguousarray(e * e), tol))
        start = cut + 1
    return np.sort(np.concatenate(out))


def count_below(window: TridiagonalOperatorWindow, energy: float) -> int:
    diag, off = window.symmetrized()
    return int(sturm_count(np.ascontiguousarray(diag),
                           np.ascontiguousarray(off * off), energy))


def char_poly(coupling: Coupling, alpha: float, theta: float, n: int, energy: float) -> float:
    """P^{(n)}(E; theta) = det(E - window) by the three-term recursion

        P_k = (E - v(theta+(k-1) alpha)) P_{k-1} - |c(theta+(k-2) alpha)|^2 P_{k-2}

    with P_0 = 1, P_{-1} = 0, evaluated with a running power-of-two rescale.
    The return value overflows to +-inf only past |det| ~ 1e308.
    """
    m, _, e2 = _char_poly_scaled(coupling, alpha, theta, n, energy)
    if m == 0.0:
        return 0.0
    try:
        return math.ldexp(m, e2)
    except OverflowError:
        return math.inf if m > 0 else -math.inf


def _char_poly_scaled(coupling: Coupling, alpha: float, theta: float, n: int,
                      energy: float):
    """(mantissa_n, mantissa_{n-1}, exp2): P_n = mantissa_n * 2^exp2."""
    if n < 0:
        if n == -1:
            return 0.0, None, 0
        raise ValueError("n must be >= -1")
    p_prev, p = 0.0, 1.0  # P_{-1}, P_0
    e2 = 0
    for k in range(1, n + 1):
        kk = np.array([(theta + (k - 1) * alpha) % 1.0, (theta + (k - 2) * alpha) % 1.0])
        c_pair, v_pair = sampling_functions(coupling, alpha, kk)
        v_here = float(v_pair[0])
        c2 = abs(c_pair[1]) ** 2 if k >= 2 else 0.0
        p, p_prev = (energy - v_here) * p - c2 * p_prev, p
        mag = abs(p) + abs(p_prev)
        if mag > 1e200 or (0.0 < mag < 1e-200):
            _, s = math.frexp(mag)
            p = math.ldexp(p, -s)
            p_prev = math.ldexp(p_prev, -s)
            e2 += s
    return p, p_prev, e2


def char_poly_sign(coupling: Coupling, alpha: float, theta: float, n: int,
                   energy: float) -> int:
    m, _, _ = _char_poly_scaled(coupling, alpha, theta, n, energy)
    return int(m > 0) - int(m < 0)


@dataclass
class SpectralSample:
    """Pooled truncation eigenvalues with histogram and IDS."""

    eigenvalues: np.ndarray  # sorted, all phases pooled
    bin_edges: np.ndarray
    masses: np.ndarray
    n: int
    n_phases: int

    def ids(self, energy) -> np.ndarray:
        """N(E) = fraction of pooled eigenvalues <= E (monotone, 0 to 1)."""
        e = np.asarray(energy, dtype=float)
        out = np.searchsorted(self.eigenvalues, e, side="right") / len(self.eigenvalues)
        return float(out) if out.ndim == 0 else out

    def check_invariants(self) -> bool:
        return (
            abs(float(self.masses.sum()) - 1.0) < 1e-12
            and bool(np.all(np.diff(self.eigenvalues) >= 0))
        )


def density_of_states(coupling: Coupling, alpha: float, n: int = 512,
                      n_phases: int = 64, bins: int = 64, seed: int = 0,
                      zero_diagonal: bool = False) -> SpectralSample:
    """Phase-averaged eigenvalue cloud of n x n windows over the shifted
    phase lattice; histogram masses are counts/(n*n_phases)."""
    if n < 64:
        raise ValueError("n must be >= 64")
    if n_phases < 16:
        raise ValueError("n_phases must be >= 16")
    pool = []
    for th in phase_lattice(n_phases, seed):
        w = truncate(coupling, alpha, float(th), n, zero_diagonal=zero_diagonal)
        pool.append(eigenvalues(w))
    eigs = np.sort(np.concatenate(pool))
    edges = np.linspace(eigs[0], eigs[-1], bins + 1)
    counts, edges = np.histogram(eigs, bins=edges)
    masses = counts / float(len(eigs))
    return SpectralSample(
        eigenvalues=eigs, bin_edges=edges, masses=masses, n=n, n_phases=n_phases
    )


def duality_dos_check(coupling: Coupling, alpha: float, n: int = 512,
                      n_phases: int = 64, probes: int = 41,
                      seed: int = 0) -> float:
    """max_E |N_lambda(E) - N_{sigma(lambda)}(E / lambda2)| over probe
    energies. For lambda2 = 0 the dual side is the zero-diagonal operator
    with coupling (lambda3, 1, lambda1) at the same energy."""
    lam2 = coupling.lambda2
    dual = duality(coupling)
    sample = density_of_states(coupling, alpha, n, n_phases, seed=seed)
    if lam2 > 0:
        dual_sample = density_of_states(dual, alpha, n, n_phases, seed=seed)
        scale = 1.0 / lam2
    else:
        dual_sample = density_of_states(dual, alpha, n, n_phases, seed=seed,
                                        zero_diagonal=True)
        scale = 1.0
    lo, hi = sample.eigenvalues[0], sample.eigenvalues[-1]
    es = np.linspace(lo - 0.1, hi + 0.1, probes)
    return float(np.max(np.abs(sample.ids(es) - dual_sample.ids(es * scale))))


def ids_rotation_consistency(coupling: Coupling, alpha: float,
                             e_grid: Sequence[float], n: int = 512,
                             n_iter: int = 100_000, n_phases: int = 64,
                             sample: Optional[SpectralSample] = None) -> dict:
    """Residuals |N_rotation(E) - N_truncation(E)| per energy (raises
    SingularModel through rotation_number if c has zeros)."""
    if sample is None:
        sample = density_of_states(coupling, alpha, n, n_phases)
    out = {}
    for e in e_grid:
        est = rotation_number(coupling, alpha, float(e), n_iter=n_iter)
        out[float(e)] = abs(ids_from_rotation(est) - sample.ids(float(e)))
    return out
