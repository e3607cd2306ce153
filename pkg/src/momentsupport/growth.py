"""Growth diagnostics for truncated moment sequences.

For a polynomial a, the even-power roots r_n = L(a^(2n))^(1/2n) are
nondecreasing, and their limit is finite exactly when a is bounded on the
support of every representing measure.  The dyadic subsequence
p_d = L(a^(2^d))^(1/2^d) is the working ladder: its last feasible entry is
the best available lower estimate of the limit sup-norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegreeExceeded, NegativePower
from .moments import MomentSequence, apply
from .poly import Polynomial, pow2

VERDICT_BOUNDED = "bounded"
VERDICT_DIVERGING = "diverging"
VERDICT_INCONCLUSIVE = "inconclusive"

#: A bounded verdict needs the trailing ladder increments below this.
BOUNDED_INCREMENT_THRESHOLD = 0.25
#: A diverging verdict needs at least this log-log slope in the root tail.
DIVERGENCE_SLOPE_THRESHOLD = 0.25


def float_root(value: Fraction, k: int) -> float:
    """value**(1/k) through integer logarithms, immune to float overflow."""
    if k < 1:
        raise ValueError("k must be >= 1")
    value = Fraction(value)
    if value < 0:
        raise NegativePower(f"negative value {float(value):.3g} has no real {k}-th root")
    if value == 0:
        return 0.0
    return math.exp((math.log(value.numerator) - math.log(value.denominator)) / k)


def even_power_values(
    L: MomentSequence, a: Polynomial, max_m: Optional[int] = None
) -> Dict[int, Fraction]:
    """Exact values L(a^(2m)) for m = 1..max_m via an incremental product
    chain, far cheaper than repeated squaring when every power is needed."""
    square = a * a
    step = square.degree
    if step == 0:
        cap = L.max_degree // 2 if a.degree == 0 else 0
        c = square.coeffs.get((0,) * a.num_vars, Fraction(0))
        limit = cap if max_m is None else min(max_m, cap)
        return {m: c**m for m in range(1, limit + 1)}
    cap = L.max_degree // step
    limit = cap if max_m is None else min(max_m, cap)
    out: Dict[int, Fraction] = {}
    power = Polynomial.constant(a.num_vars, 1)
    for m in range(1, limit + 1):
        power = power * square
        out[m] = apply(L, power)
    return out


def p_d(L: MomentSequence, a: Polynomial, d: int) -> float:
    """Ladder value L(a^(2^d))^(1/2^d).  Raises NegativePower if the inner
    moment is negative, which certifies the input is not positive."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if (a.degree << d) > L.max_degree:
        raise DegreeExceeded(a.degree << d, L.max_degree)
    inner = apply(L, pow2(a, d, budget=L.max_degree))
    return float_root(inner, 1 << d)


def feasible_d_max(L: MomentSequence, a: Polynomial) -> int:
    """Largest d with deg(a) * 2^d <= max_degree (power-of-two cap for
    constants)."""
    deg = max(a.degree, 1)
    d = 0
    while (deg << (d + 1)) <= L.max_degree:
        d += 1
    return d


def root_sequence(L: MomentSequence, a: Polynomial) -> List[Tuple[int, float]]:
    """All feasible (n, r_n) with r_n = L(a^(2n))^(1/2n)."""
    values = even_power_values(L, a)
    return [(m, float_root(v, 2 * m)) for m, v in sorted(values.items())]


def ladder(L: MomentSequence, a: Polynomial) -> List[Tuple[int, float]]:
    """All feasible (d, p_d) for d >= 1."""
    d_max = feasible_d_max(L, a)
    values = even_power_values(L, a, max_m=1 << max(d_max - 1, 0))
    out = []
    for d in range(1, d_max + 1):
        m = 1 << (d - 1)
        out.append((d, float_root(values[m], 1 << d)))
    return out


@dataclass(frozen=True)
class GrowthProfile:
    poly: Polynomial
    ladder: Tuple[Tuple[int, float], ...]
    roots: Tuple[Tuple[int, float], ...]
    d_max: int
    p_L_estimate: float
    verdict: str
    tail_slope: float

    def to_json_dict(self) -> dict:
        return {
            "poly": self.poly.to_text(),
            "ladder": [[d, v] for d, v in self.ladder],
            "roots": [[n, v] for n, v in self.roots],
            "d_max": self.d_max,
            "p_L_estimate": self.p_L_estimate,
            "verdict": self.verdict,
            "tail_slope": self.tail_slope,
        }


def tail_log_slope(roots: Sequence[Tuple[int, float]]) -> float:
    """Least-squares slope of log r_n against log n over the last half of
    the feasible range.  Zero when the tail touches zero or is too short."""
    tail = list(roots)[len(roots) // 2 :]
    if len(tail) < 2 or any(r <= 0 for _, r in tail):
        return 0.0
    xs = np.log([n for n, _ in tail])
    ys = np.log([r for _, r in tail])
    return float(np.polyfit(xs, ys, 1)[0])


def relative_increments(values: Sequence[float]) -> List[float]:
    out = []
    for prev, cur in zip(values, values[1:]):
        if prev > 0:
            out.append((cur - prev) / prev)
        elif cur == 0:
            out.append(0.0)
        else:
            out.append(math.inf)
    return out


def growth_profile(
    L: MomentSequence,
    a: Polynomial,
    increment_threshold: float = BOUNDED_INCREMENT_THRESHOLD,
    slope_threshold: float = DIVERGENCE_SLOPE_THRESHOLD,
) -> GrowthProfile:
    """Classify the tail behavior of the even-power roots of a.

    Diverging means the root tail climbs like a power of n (a Gaussian-type
    coordinate shows slope about 1/2).  Bounded means the dyadic ladder has
    flattened out.  Anything else is inconclusive.
    """
    rungs = ladder(L, a)
    roots = root_sequence(L, a)
    d_max = feasible_d_max(L, a)
    p_L_estimate = rungs[-1][1] if rungs else 0.0
    slope = tail_log_slope(roots)
    if not rungs:
        verdict = VERDICT_INCONCLUSIVE
    elif p_L_estimate == 0.0:
        verdict = VERDICT_BOUNDED
    elif slope >= slope_threshold:
        verdict = VERDICT_DIVERGING
    else:
        increments = relative_increments([v for _, v in rungs])
        window = increments[-3:]
        if window and all(inc < increment_threshold for inc in window):
            verdict = VERDICT_BOUNDED
        else:
            verdict = VERDICT_INCONCLUSIVE
    return GrowthProfile(
        a, tuple(rungs), tuple(roots), d_max, p_L_estimate, verdict, slope
    )


def carleman_partial(L: MomentSequence, a: Polynomial) -> float:
    """Partial sum of 1/r_n over the feasible range; +inf if any root is 0.

    Large partial sums are the determinacy-style diagnostic: for measures
    concentrated near the origin the series grows without bound.
    """
    total = 0.0
    for _, r in root_sequence(L, a):
        if r == 0.0:
            return math.inf
        total += 1.0 / r
    return total


def roots_monotone_exact(L: MomentSequence, a: Polynomial) -> bool:
    """Exact check that r_n is nondecreasing: compares
    L(a^(2n))^(n+1) <= L(a^(2n+2))^n in rationals."""
    values = even_power_values(L, a)
    ms = sorted(values)
    for m1, m2 in zip(ms, ms[1:]):
        if m2 != m1 + 1:
            continue
        v1, v2 = values[m1], values[m2]
        if v1 < 0 or v2 < 0:
            raise NegativePower("negative even-power moment")
        if v1 ** (m1 + 1) > v2**m1:
            return False
    return True


@dataclass(frozen=True)
class SeminormSample:
    triangle_ok: bool
    homogeneity_ok: bool
    homogeneity_exact_ok: bool
    cross_ok: Optional[bool]
    cross_exact_ok: Optional[bool]

    @property
    def ok(self) -> bool:
        checks = [self.triangle_ok, self.homogeneity_ok, self.homogeneity_exact_ok]
        checks += [c for c in (self.cross_ok, self.cross_exact_ok) if c is not None]
        return all(checks)


@dataclass(frozen=True)
class SeminormReport:
    d: int
    samples: Tuple[SeminormSample, ...]

    @property
    def all_ok(self) -> bool:
        return all(s.ok for s in self.samples)


def seminorm_props(
    L: MomentSequence,
    samples: Sequence[Tuple[Polynomial, Polynomial, Fraction]],
    d: int = 1,
    rel_tol: float = 1e-9,
) -> SeminormReport:
    """Spot-check triangle inequality, absolute homogeneity, and the
    cross-multiplicative bound p_d(ab) <= p_(d+1)(a) p_(d+1)(b).

    Homogeneity and the squared cross bound are also verified in exact
    rationals; the rest uses floats with a relative tolerance.
    """
    results = []
    for a, b, lam in samples:
        lam = Fraction(lam)
        pa = p_d(L, a, d)
        pb = p_d(L, b, d)
        psum = p_d(L, a + b, d)
        scale = max(pa + pb, 1.0)
        triangle_ok = psum <= pa + pb + rel_tol * scale
        pl = p_d(L, lam * a, d)
        homog_ok = abs(pl - abs(lam) * pa) <= rel_tol * max(abs(lam) * pa, 1.0)
        power = 1 << d
        homog_exact = apply(L, pow2(lam * a, d, budget=L.max_degree)) == lam**power * apply(
            L, pow2(a, d, budget=L.max_degree)
        )
        cross_ok: Optional[bool] = None
        cross_exact: Optional[bool] = None
        if ((a.degree + b.degree) << d) <= L.max_degree and (
            max(a.degree, b.degree) << (d + 1)
        ) <= L.max_degree:
            pab = p_d(L, a * b, d)
            pa1 = p_d(L, a, d + 1)
            pb1 = p_d(L, b, d + 1)
            cross_ok = pab <= pa1 * pb1 + rel_tol * max(pa1 * pb1, 1.0)
            lhs = apply(L, pow2(a * b, d, budget=L.max_degree))
            ra = apply(L, pow2(a, d + 1, budget=L.max_degree))
            rb = apply(L, pow2(b, d + 1, budget=L.max_degree))
            cross_exact = lhs * lhs <= ra * rb
        results.append(
            SeminormSample(triangle_ok, homog_ok, homog_exact, cross_ok, cross_exact)
        )
    return SeminormReport(d, tuple(results))


def kernel_check(L: MomentSequence, a: Polynomial, d: int) -> bool:
    """The degenerate directions agree across the ladder: L(a^2) vanishes
    exactly when L(a^(2^d)) does.  Exact rational zero tests."""
    if d < 1:
        raise ValueError("d must be >= 1")
    v1 = apply(L, a * a)
    vd = apply(L, pow2(a, d, budget=L.max_degree))
    return (v1 == 0) == (vd == 0)
