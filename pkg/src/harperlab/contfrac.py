"""Continued-fraction machinery for irrational frequencies.

Conventions used throughout the package: alpha in (0,1) with expansion
alpha = [0; a_1, a_2, ...], initial values q_0 = 1, q_{-1} = 0, p_0 = 0,
p_{-1} = 1, and the recursions

    p_n = a_n p_{n-1} + p_{n-2},    q_n = a_n q_{n-1} + q_{n-2}.

Delta_n = |q_n alpha - p_n| satisfies 1/(q_n + q_{n+1}) < Delta_n < 1/q_{n+1},
and ||k alpha|| > Delta_{n-1} for q_{n-1}+1 <= k <= q_n - 1, where ||.|| is
the distance to the nearest integer.

Frequencies are represented exactly as quadratic surds (a + b*sqrt(d) with
rational a, b) whenever possible; inexact inputs (floats, decimal strings,
mpmath floats) carry an explicit uncertainty interval and the expansion
refuses to emit a partial quotient that the interval cannot certify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
from mpmath import mp, mpf

from .errors import PrecisionExhausted


class QuadraticSurd:
    """Exact real number of the form a + b*sqrt(d), a, b rational, d a
    non-negative integer. Supports just enough arithmetic for continued
    fractions: floor, reciprocal, subtraction of rationals, comparisons."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=0):
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if d < 0:
            raise ValueError("negative discriminant")
        r = math.isqrt(d)
        if r * r == d:  # perfect square folds into the rational part
            a, b, d = a + b * r, Fraction(0), 0
        if b == 0:
            d = 0
        self.a, self.b, self.d = a, b, d

    @property
    def is_rational(self):
        return self.b == 0

    def compare(self, t) -> int:
        """Sign of (self - t) for rational t, computed exactly."""
        A = self.a - Fraction(t)
        B = self.b
        if B == 0:
            return (A > 0) - (A < 0)
        if A >= 0 and B > 0:
            return 1
        if A <= 0 and B < 0:
            return -1
        # A and B have opposite signs: compare A^2 with B^2 d
        lhs, rhs = A * A, B * B * self.d
        if B > 0:  # A < 0: sign of B^2 d - A^2
            return (rhs > lhs) - (rhs < lhs)
        return (lhs > rhs) - (lhs < rhs)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def to_mpf(self, prec_bits: int) -> mpf:
        with mp.workprec(prec_bits):
            val = mpf(self.a.numerator) / self.a.denominator
            if self.b:
                val += (mpf(self.b.numerator) / self.b.denominator) * mp.sqrt(self.d)
            return +val

    def floor(self) -> int:
        n = math.floor(float(self))
        # float estimate can be off by one ulp's worth; fix exactly
        while self.compare(n) < 0:
            n -= 1
        while self.compare(n + 1) >= 0:
            n += 1
        return n

    def minus(self, t) -> "QuadraticSurd":
        return QuadraticSurd(self.a - Fraction(t), self.b, self.d)

    def times(self, t) -> "QuadraticSurd":
        t = Fraction(t)
        return QuadraticSurd(self.a * t, self.b * t, self.d)

    def reciprocal(self) -> "QuadraticSurd":
        denom = self.a * self.a - self.b * self.b * self.d
        if denom == 0:
            raise ZeroDivisionError("reciprocal of zero surd")
        return QuadraticSurd(self.a / denom, -self.b / denom, self.d)

    def __repr__(self):
        if self.is_rational:
            return f"QuadraticSurd({self.a})"
        return f"QuadraticSurd({self.a} + {self.b}*sqrt({self.d}))"


def golden_mean() -> QuadraticSurd:
    """(sqrt(5) - 1)/2 = [0; 1, 1, 1, ...]."""
    return QuadraticSurd(Fraction(-1, 2), Fraction(1, 2), 5)


def silver_mean() -> QuadraticSurd:
    """sqrt(2) - 1 = [0; 2, 2, 2, ...]."""
    return QuadraticSurd(-1, 1, 2)


AlphaLike = Union[QuadraticSurd, Fraction, float, str, mpf]


def _to_interval(alpha: AlphaLike):
    """Return (lo, hi) rational interval certainly containing alpha, or a
    QuadraticSurd / Fraction for exact inputs."""
    if isinstance(alpha, QuadraticSurd):
        return alpha
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, int):
        return Fraction(alpha)
    if isinstance(alpha, str):
        s = alpha.strip()
        mid = Fraction(s)
        if "." in s:
            places = len(s.split(".")[1])
            h = Fraction(1, 2 * 10**places)
        else:
            return mid
        return (mid - h, mid + h)
    if isinstance(alpha, mpf):
        sign, man, exp, _ = mp.mpf(alpha)._mpf_
        mid = Fraction((-1) ** sign * man, 1) * Fraction(2) ** exp
        h = abs(mid) * Fraction(2) ** (1 - mp.prec)
        return (mid - h, mid + h)
    if isinstance(alpha, float):
        mid = Fraction(alpha)
        h = Fraction(math.ulp(alpha))
        return (mid - h, mid + h)
    raise TypeError(f"unsupported alpha type: {type(alpha)!r}")


@dataclass
class ContinuedFraction:
    """Expansion data for a frequency alpha in (0,1).

    convergents[n-1] = (p_n, q_n) for n = 1..len(terms); q_leading prepends
    q_0 = 1 for display. deltas[n-1] = |q_n alpha - p_n| as mpmath floats at
    a working precision of at least 4x the bit length of the last q_n.
    """

    alpha: object  # QuadraticSurd, Fraction, or (lo, hi) rational interval
    alpha_repr: str
    terms: list
    convergents: list  # list of (p, q) int pairs, n = 1..N
    deltas: list  # mpf values, parallel to convergents
    terminated: bool = False
    counterexample_triples: list = field(default_factory=list)

    @property
    def alpha_float(self) -> float:
        if isinstance(self.alpha, QuadraticSurd):
            return float(self.alpha)
        if isinstance(self.alpha, Fraction):
            return float(self.alpha)
        lo, hi = self.alpha
        return float((lo + hi) / 2)

    @property
    def q(self):
        return [pq[1] for pq in self.convergents]

    @property
    def p(self):
        return [pq[0] for pq in self.convergents]

    @property
    def q_leading(self):
        """(q_0, q_1, q_2, ...) = (1, ...) as displayed in tables."""
        return [1] + self.q

    def q_at(self, n: int) -> int:
        """q_n with the q_0 = 1, q_{-1} = 0 conventions."""
        if n == -1:
            return 0
        if n == 0:
            return 1
        return self.convergents[n - 1][1]

    def p_at(self, n: int) -> int:
        if n == -1:
            return 1
        if n == 0:
            return 0
        return self.convergents[n - 1][0]

    def alpha_mpf(self, prec_bits: Optional[int] = None) -> mpf:
        if prec_bits is None:
            prec_bits = _working_prec(self.q[-1] if self.q else 1)
        if isinstance(self.alpha, QuadraticSurd):
            return self.alpha.to_mpf(prec_bits)
        with mp.workprec(prec_bits):
            if isinstance(self.alpha, Fraction):
                return mpf(self.alpha.numerator) / self.alpha.denominator
            lo, hi = self.alpha
            m = (lo + hi) / 2
            return mpf(m.numerator) / m.denominator

    def to_json_dict(self) -> dict:
        label = parity_subsequence(self)[1] if len(self.convergents) >= 4 else None
        return {
            "alpha_repr": self.alpha_repr,
            "terms": list(self.terms),
            "convergents": [[p, q] for p, q in self.convergents],
            "parity_label": label,
        }


def _working_prec(q_last: int) -> int:
    return max(64, 4 * q_last.bit_length())


def _repr_of(alpha: AlphaLike) -> str:
    if isinstance(alpha, QuadraticSurd):
        if (alpha.a, alpha.b, alpha.d) == (Fraction(-1, 2), Fraction(1, 2), 5):
            return "golden"
        if (alpha.a, alpha.b, alpha.d) == (Fraction(-1), Fraction(1), 2):
            return "silver"
        return repr(alpha)
    return str(alpha)


def expand(alpha: AlphaLike, n_terms: int) -> ContinuedFraction:
    """Expand alpha in (0,1) into n_terms partial quotients.

    Exact inputs (QuadraticSurd, Fraction) expand exactly; a rational that
    terminates before n_terms raises PrecisionExhausted with the terminating
    expansion noted in the message. Inexact inputs expand only while the
    uncertainty interval determines the next quotient unambiguously.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    backing = _to_interval(alpha)
    rep = _repr_of(alpha)

    terms = []
    if isinstance(backing, QuadraticSurd):
        if backing.compare(0) <= 0 or backing.compare(1) >= 0:
            raise ValueError("alpha must lie in (0,1)")
        x = backing
        for _ in range(n_terms):
            if x.is_rational:
                x = x.a  # fall through to the Fraction path below
                break
            y = x.reciprocal()
            a = y.floor()
            terms.append(a)
            x = y.minus(a)
        if isinstance(x, Fraction):
            terms.extend(_expand_fraction(x, n_terms - len(terms), rep))
    elif isinstance(backing, Fraction):
        if not (0 < backing < 1):
            raise ValueError("alpha must lie in (0,1)")
        terms = _expand_fraction(backing, n_terms, rep, toplevel=True)
    else:
        lo, hi = backing
        if lo <= 0 or hi >= 1:
            raise ValueError("alpha must lie in (0,1) with certainty")
        terms = _expand_interval(lo, hi, n_terms)

    return _build(backing, rep, terms, terminated=False)


def _expand_fraction(x: Fraction, n_terms: int, rep: str, toplevel: bool = False) -> list:
    terms = []
    while len(terms) < n_terms:
        if x == 0:
            raise PrecisionExhausted(
                f"expansion of rational {rep} terminated after {len(terms)} terms "
                f"(requested {n_terms})"
            )
        y = 1 / x
        a = y.numerator // y.denominator
        terms.append(a)
        x = y - a
    return terms


def _expand_interval(lo: Fraction, hi: Fraction, n_terms: int) -> list:
    terms = []
    for _ in range(n_terms):
        if lo <= 0:  # interval may contain a rational endpoint: ambiguous
            raise PrecisionExhausted(
                f"partial quotient a_{len(terms)+1} not certified at input precision"
            )
        ylo, yhi = 1 / hi, 1 / lo
        alo = ylo.numerator // ylo.denominator
        ahi = yhi.numerator // yhi.denominator
        if alo != ahi:
            raise PrecisionExhausted(
                f"partial quotient a_{len(terms)+1} not certified at input precision"
            )
        terms.append(alo)
        lo, hi = ylo - alo, yhi - alo
    return terms


def _build(backing, rep, terms, terminated, triples=None) -> ContinuedFraction:
    p_prev, p_cur = 1, 0  # p_{-1}, p_0
    q_prev, q_cur = 0, 1  # q_{-1}, q_0
    convergents = []
    for a in terms:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        convergents.append((p_cur, q_cur))

    prec = _working_prec(q_cur)
    cf = ContinuedFraction(
        alpha=backing,
        alpha_repr=rep,
        terms=list(terms),
        convergents=convergents,
        deltas=[],
        terminated=terminated,
        counterexample_triples=list(triples or []),
    )
    with mp.workprec(prec):
        a_mp = cf.alpha_mpf(prec)
        cf.deltas = [abs(q * a_mp - p) for p, q in convergents]
    return cf


def dist_to_integers(r):
    """min over integers n of |r - n|; the torus norm, in [0, 1/2].

    Accepts scalars or arrays; returns the matching shape.
    """
    arr = np.asarray(r, dtype=float)
    out = np.minimum(np.abs(arr - np.round(arr)), 0.5)
    return float(out) if out.ndim == 0 else out


def evaluate_terms(terms: Sequence[int]) -> Fraction:
    """Value of the finite continued fraction [0; a_1, ..., a_N]."""
    x = Fraction(0)
    for a in reversed(terms):
        x = Fraction(1, 1) / (a + x)
    return x


def parity_subsequence(cf: ContinuedFraction):
    """Split indices n = 1..N by the parity of p_n + q_n and return the larger
    class (ties: even wins) together with its label 'even' or 'odd'."""
    if len(cf.convergents) < 4:
        raise ValueError("need at least 4 convergents")
    even_idx = [n for n, (p, q) in enumerate(cf.convergents, start=1) if (p + q) % 2 == 0]
    odd_idx = [n for n, (p, q) in enumerate(cf.convergents, start=1) if (p + q) % 2 == 1]
    if len(even_idx) >= len(odd_idx):
        return even_idx, "even"
    return odd_idx, "odd"


def beta_exponent(cf: ContinuedFraction) -> float:
    """Finite-horizon estimate of limsup ln(q_{n+1})/q_n.

    Only a proxy: the true limsup needs the whole tail. Bounded-type alpha
    drives the estimate to 0 as the horizon grows; Liouville-like quotient
    bursts push it up.
    """
    if len(cf.convergents) < 3:
        raise ValueError("need at least 3 convergents")
    qs = cf.q_leading  # q_0, q_1, ..., q_N
    return max(math.log(qs[n + 1]) / qs[n] for n in range(len(qs) - 1))


GOLDEN_TAIL = QuadraticSurd(Fraction(1, 2), Fraction(1, 2), 5)  # [1; 1, 1, ...]

DEFAULT_CAP_BITS = 4096


def counterexample_alpha(C: float, levels: int, tail_terms: int = 8,
                         cap_bits: int = DEFAULT_CAP_BITS) -> ContinuedFraction:
    """Frequency whose quotients realize `levels` disjoint index triples
    (n, n+1, n+2) with q_n > q_{n-1}^C, a_{n+1} = 1 and q_{n+2} > C q_{n+1}.

    Quotients are chosen greedily: the power slot takes the minimal a >= 2
    meeting its inequality, the growth slot the minimal a > C. After the last
    triple the expansion continues with an all-ones tail, making alpha an
    exact quadratic surd in Q(sqrt 5).
    """
    if C < 2:
        raise ValueError("C must be >= 2")
    if levels < 0:
        raise ValueError("levels must be >= 0")

    terms = [1]  # a_1 seed
    q_pp, q_p = 1, 1  # q_0, q_1
    triples = []

    def push(a):
        nonlocal q_pp, q_p
        terms.append(a)
        q_pp, q_p = q_p, a * q_p + q_pp
        if q_p.bit_length() > cap_bits:
            raise PrecisionExhausted(f"convergent exceeded the {cap_bits}-bit size cap")

    for _ in range(levels):
        n = len(terms) + 1
        # power slot: minimal a >= 2 with q_n = a q_{n-1} + q_{n-2} > q_{n-1}^C
        target = q_p ** int(C) if float(C).is_integer() else math.floor(q_p ** C)
        a = max(2, (target - q_pp) // q_p + 1)
        push(a)
        push(1)  # a_{n+1} = 1 makes q_{n+1} = q_n + q_{n-1}
        # growth slot: minimal a > C gives q_{n+2} > C q_{n+1} outright
        push(math.floor(C) + 1)
        triples.append((n, n + 1, n + 2))

    terms_full = terms + [1] * tail_terms

    # exact value: remainder after the prefix is the golden tail phi
    pN1, pN = 1, 0
    qN1, qN = 0, 1
    for a in terms:
        pN1, pN = pN, a * pN + pN1
        qN1, qN = qN, a * qN + qN1
    r = GOLDEN_TAIL
    num_a = Fraction(pN1) + r.a * pN
    num_b = r.b * pN
    den_a = Fraction(qN1) + r.a * qN
    den_b = r.b * qN
    # (num_a + num_b sqrt5)/(den_a + den_b sqrt5)
    disc = den_a * den_a - 5 * den_b * den_b
    a_part = (num_a * den_a - 5 * num_b * den_b) / disc
    b_part = (num_b * den_a - num_a * den_b) / disc
    surd = QuadraticSurd(a_part, b_part, 5)

    cf = expand(surd, len(terms_full))
    if cf.terms != terms_full:
        raise AssertionError("surd re-expansion does not reproduce constructed quotients")
    cf.counterexample_triples = triples
    cf.alpha_repr = f"counterexample(C={C}, levels={levels})"
    return cf
