"""Support localization from truncated moments.

Everything here rests on two facts about a moment sequence with bounded
growth: the support of any representing measure lies in the box cut out by
the coordinate sup-norm estimates, and the mass of a single point alpha is
the limit of (p_d(a)/p_L(a))^(2^d) over peaked polynomials a whose sup-norm
on the support is attained at alpha.  Peaked polynomials are built as even
powers of a product of inverted-parabola factors, one per coordinate, so
one incremental product chain yields every bound in the family.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import (
    BudgetExceeded,
    DegreeExceeded,
    DimensionMismatch,
    GrowthDiverging,
)
from .growth import (
    VERDICT_DIVERGING,
    even_power_values,
    float_root,
    growth_profile,
    ladder,
    p_d,
)
from .moments import (
    MomentSequence,
    PsdReport,
    apply,
    localizing_matrix,
    moment_matrix,
    psd_check,
)
from .linalg import rational_rank
from .poly import Polynomial

Point = Tuple[Fraction, ...]

DEFAULT_SLACK = 0.05
#: Ratios whose denominator estimate falls below this are meaningless.
ZERO_TOLERANCE = 1e-12

VERDICT_FINITE = "finite"
VERDICT_NOT_CERTIFIED = "not_certified"


def p_L_lower_estimate(L: MomentSequence, a: Polynomial) -> float:
    """Deepest feasible ladder entry; a lower estimate of the sup-norm of a
    on the support."""
    rungs = ladder(L, a)
    if not rungs:
        raise DegreeExceeded(2 * a.degree, L.max_degree)
    return rungs[-1][1]


@dataclass(frozen=True)
class SupportBox:
    """Axis-aligned box certain to contain the support, up to slack."""

    intervals: Tuple[Tuple[float, float], ...]
    p_L_estimates: Tuple[float, ...]
    slack: float

    @property
    def num_vars(self) -> int:
        return len(self.intervals)

    def contains(self, point: Sequence[Fraction]) -> bool:
        if len(point) != self.num_vars:
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, expected {self.num_vars}"
            )
        return all(
            lo <= float(x) <= hi for x, (lo, hi) in zip(point, self.intervals)
        )

    def vertices(self) -> List[Tuple[float, ...]]:
        out: List[Tuple[float, ...]] = [()]
        for lo, hi in self.intervals:
            out = [v + (end,) for v in out for end in (lo, hi)]
        return out

    def to_json_dict(self) -> dict:
        return {
            "intervals": [[lo, hi] for lo, hi in self.intervals],
            "p_L_estimates": list(self.p_L_estimates),
            "slack": self.slack,
        }


def support_box(L: MomentSequence, slack: float = DEFAULT_SLACK) -> SupportBox:
    """Symmetric box from per-coordinate growth profiles.

    Raises GrowthDiverging for any coordinate whose profile diverges; the
    slack widens each interval to absorb truncation of the estimates.
    """
    intervals = []
    estimates = []
    for i in range(L.num_vars):
        profile = growth_profile(L, Polynomial.variable(L.num_vars, i))
        if profile.verdict == VERDICT_DIVERGING:
            raise GrowthDiverging(i)
        bound = profile.p_L_estimate
        estimates.append(bound)
        intervals.append((-(bound + slack), bound + slack))
    return SupportBox(tuple(intervals), tuple(estimates), slack)


@dataclass(frozen=True)
class KlResult:
    """Outcome of the support membership screen.  Not rejected is not a
    membership proof; rejection carries the witness polynomial."""

    rejected: bool
    witness: Optional[Polynomial]
    tested: int

    def to_json_dict(self) -> dict:
        return {
            "rejected": self.rejected,
            "witness": None if self.witness is None else self.witness.to_text(),
            "tested": self.tested,
        }


def default_membership_tests(num_vars: int) -> List[Polynomial]:
    """Coordinates, their squares, and pairwise products."""
    xs = [Polynomial.variable(num_vars, i) for i in range(num_vars)]
    tests = list(xs)
    tests += [x * x for x in xs]
    tests += [xs[i] * xs[j] for i in range(num_vars) for j in range(i + 1, num_vars)]
    return tests


def kl_member(
    L: MomentSequence,
    alpha: Sequence[Fraction],
    tests: Optional[Sequence[Polynomial]] = None,
    slack: float = DEFAULT_SLACK,
) -> KlResult:
    """Screen alpha against |a(alpha)| <= p_L(a) for each test polynomial.

    The sup-norm estimates are truncation-limited lower bounds, so the
    comparison is slackened multiplicatively before rejecting.
    """
    point = tuple(Fraction(x) for x in alpha)
    if len(point) != L.num_vars:
        raise DimensionMismatch(
            f"point has {len(point)} coordinates, expected {L.num_vars}"
        )
    polys = list(tests) if tests is not None else default_membership_tests(L.num_vars)
    for a in polys:
        estimate = p_L_lower_estimate(L, a)
        if abs(float(a.eval(point))) > estimate * (1.0 + slack):
            return KlResult(True, a, len(polys))
    return KlResult(False, None, len(polys))


def bump(
    alpha: Sequence[Fraction],
    b: Polynomial,
    pL_2b: object,
    epsilon: object = 1,
    n: int = 1,
    budget: int = 256,
) -> Polynomial:
    """Peaked polynomial (1 - eps (b(alpha) - b)^2 / pL_2b^2)^(2n).

    Its value at alpha is exactly 1; whenever pL_2b dominates the spread of
    b over the support and eps <= 1, its magnitude stays at most 1 there.
    Inputs eps and pL_2b are snapped to nearby rationals so the result is
    exact.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    eps = Fraction(epsilon).limit_denominator(1 << 14)
    scale = Fraction(pL_2b).limit_denominator(1 << 14)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon {float(eps)} outside (0, 1]")
    if scale <= 0:
        raise ValueError("pL_2b must be positive")
    point = tuple(Fraction(x) for x in alpha)
    shift = Polynomial.constant(b.num_vars, b.eval(point)) - b
    base = Polynomial.constant(b.num_vars, 1) - (eps / scale**2) * (shift * shift)
    final_degree = 2 * n * base.degree
    if final_degree > budget:
        raise BudgetExceeded(final_degree, budget)
    return base ** (2 * n)


@dataclass(frozen=True)
class MassEstimate:
    """Certified upper bounds on the measure of the single point alpha.

    ``upper_bounds`` is the running minimum over the peaked family, hence
    nonincreasing; ``value`` is its last entry.  ``converged`` records
    whether the raw bound sequence had stabilized, which separates genuine
    atoms from the slowly shrinking bounds a continuous component yields.
    """

    alpha: Point
    d: int
    upper_bounds: Tuple[Tuple[int, float], ...]
    converged: bool
    value: float
    outside_box: bool
    bump_base: Polynomial

    def to_json_dict(self) -> dict:
        return {
            "alpha": [float(x) for x in self.alpha],
            "d": self.d,
            "bounds": [[n, v] for n, v in self.upper_bounds],
            "converged": self.converged,
            "value": self.value,
            "outside_box": self.outside_box,
            "bump_base": self.bump_base.to_text(),
        }


def _coordinate_scale(
    interval: Tuple[float, float],
    alpha_i: Fraction,
    estimate: float,
    slack: float,
    inside: bool,
) -> float:
    """Upper bound on the coordinate spread |alpha_i - x_i| over the support.

    The interval-end distance dominates the spread over any subset of the
    interval; for a point inside the box the doubled sup-norm estimate may
    be tighter.
    """
    lo, hi = interval
    edge = max(abs(float(alpha_i) - lo), abs(float(alpha_i) - hi))
    if inside:
        return min(edge, 2.0 * estimate * (1.0 + slack))
    return edge


def atom_mass(
    L: MomentSequence,
    alpha: Sequence[Fraction],
    d: int = 2,
    budget: Optional[int] = None,
    slack: float = DEFAULT_SLACK,
    epsilon: float = 1.0,
    stop_below: Optional[float] = None,
) -> MassEstimate:
    """Upper-bound the mass of the point alpha from moments alone.

    For n = 1, 2, ... a peaked polynomial a_n with peak value exactly 1 at
    alpha is formed and the ratio (p_d(a_n) / p_hat(a_n))^(2^d) recorded.
    The peak is a product of one inverted-parabola factor per coordinate; a
    single linear-form bump would be constant on a whole hyperplane and
    could not isolate a point in more than one variable.  The normalizer
    p_hat is the peak value 1: for alpha in the support it is a certified
    lower bound on the sup-norm of a_n there, and the construction keeps
    the sup-norm at or below it, so the ratio reduces to L(a_n^(2^d)).
    The returned bounds are the running minima.  ``stop_below`` allows an
    early exit once the running minimum drops under a caller threshold.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    point = tuple(Fraction(x) for x in alpha)
    box = support_box(L, slack)
    inside = box.contains(point)
    screen = kl_member(L, point, slack=slack)
    outside = (not inside) or screen.rejected
    eps = Fraction(epsilon).limit_denominator(1 << 14)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon {epsilon} outside (0, 1]")
    base = Polynomial.constant(L.num_vars, 1)
    for i in range(L.num_vars):
        spread = _coordinate_scale(
            box.intervals[i], point[i], box.p_L_estimates[i], slack, inside
        )
        if spread <= 0:
            spread = max(2.0 * box.p_L_estimates[i], 1.0)
        scale_sq = Fraction(spread * spread).limit_denominator(1 << 14)
        x = Polynomial.variable(L.num_vars, i)
        shift = Polynomial.constant(L.num_vars, point[i]) - x
        factor = Polynomial.constant(L.num_vars, 1) - (eps / scale_sq) * (
            shift * shift
        )
        base = base * factor
    square = base * base
    if square.degree > L.max_degree:
        raise DegreeExceeded(square.degree, L.max_degree)
    m_max = L.max_degree // square.degree
    n_max = m_max >> d
    if n_max < 1:
        raise BudgetExceeded(square.degree * (1 << d), L.max_degree)
    if budget is not None:
        n_max = min(n_max, budget)
    raw: List[float] = []
    running: List[Tuple[int, float]] = []
    best = math.inf
    current = Polynomial.constant(L.num_vars, 1)
    held = 0
    for n in range(1, n_max + 1):
        target = n << d
        while held < target:
            current = current * square
            held += 1
        value = apply(L, current)
        bound = min(1.0, max(0.0, float(value)))
        raw.append(bound)
        best = min(best, bound)
        running.append((n, best))
        if stop_below is not None and best < stop_below:
            break
    converged = len(raw) >= 2 and (raw[-2] - raw[-1]) <= max(1e-3, 0.02 * raw[-1])
    return MassEstimate(
        point, d, tuple(running), converged, running[-1][1], outside, base
    )


@dataclass(frozen=True)
class FiniteSupportReport:
    """Finite-support certificate data.

    ``C_est`` is the smallest observed ratio p_d(a)/p_hat(a); its -2^d power
    caps the possible number of atoms.  The verdict is finite only when the
    exact moment-matrix rank is flat across two consecutive levels, and then
    ``atom_count`` equals that stabilized rank.
    """

    d: int
    C_est: float
    cardinality_bound: float
    hankel_rank: int
    verdict: str
    atom_count: Optional[int]

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "C_est": self.C_est,
            "cardinality_bound": self.cardinality_bound,
            "hankel_rank": self.hankel_rank,
            "verdict": self.verdict,
            "atom_count": self.atom_count,
        }


def finite_support_check(
    L: MomentSequence,
    d: int = 2,
    sample_polys: Optional[Sequence[Polynomial]] = None,
    bump_candidates: Optional[Sequence[Sequence[Fraction]]] = None,
    slack: float = DEFAULT_SLACK,
    seed: int = 0,
    budget: Optional[int] = None,
    max_level: Optional[int] = None,
) -> FiniteSupportReport:
    """Certify a finite support when the data allows it.

    Ratio samples come from explicit polynomials, a few seeded random ones,
    and peaked families at the candidate points; ratios with denominators
    below the zero tolerance are skipped.  Rank flatness is decided in
    exact rational arithmetic, scanning levels from the bottom.  Diverging
    growth makes cardinality bounds meaningless, so that raises first.
    """
    support_box(L, slack)
    polys: List[Polynomial] = list(sample_polys) if sample_polys else []
    if not polys:
        rng = random.Random(seed)
        # The constant keeps the sample set nondegenerate: its ratio is
        # exactly 1, so C_est always lands in (0, 1].
        polys = [Polynomial.constant(L.num_vars, 1)]
        polys += [Polynomial.variable(L.num_vars, i) for i in range(L.num_vars)]
        for _ in range(6):
            coeffs = {
                exp: Fraction(rng.randint(-3, 3))
                for exp in _low_degree_exponents(L.num_vars)
            }
            p = Polynomial(L.num_vars, coeffs)
            if not p.is_zero():
                polys.append(p)
    ratios: List[float] = []
    for a in polys:
        if (a.degree << d) > L.max_degree:
            continue
        denom = p_L_lower_estimate(L, a)
        if denom < ZERO_TOLERANCE:
            continue
        ratios.append(min(1.0, p_d(L, a, d) / denom))
    for candidate in bump_candidates or []:
        estimate = atom_mass(L, candidate, d=d, budget=budget, slack=slack)
        if estimate.value > 0:
            ratios.append(float_root(Fraction(estimate.value).limit_denominator(10**12), 1 << d))
    C_est = min(ratios) if ratios else 0.0
    cardinality = C_est ** -(1 << d) if C_est > 0 else math.inf
    t_cap = L.max_degree // 2
    if max_level is not None:
        t_cap = min(t_cap, max_level)
    prev_rank: Optional[int] = None
    hankel_rank = 0
    verdict = VERDICT_NOT_CERTIFIED
    count: Optional[int] = None
    for t in range(t_cap + 1):
        rank = rational_rank(moment_matrix(L, t))
        hankel_rank = rank
        if prev_rank is not None and rank == prev_rank:
            verdict = VERDICT_FINITE
            count = rank
            break
        prev_rank = rank
    return FiniteSupportReport(d, C_est, cardinality, hankel_rank, verdict, count)


def _low_degree_exponents(num_vars: int) -> List[Tuple[int, ...]]:
    from .poly import monomials_up_to

    return monomials_up_to(num_vars, 2)


def chebyshev_tail(
    L: MomentSequence, a: Polynomial, threshold: float
) -> List[Tuple[int, float]]:
    """Markov-type tail bounds L(a^(2n)) / threshold^(2n), clamped to [0, 1].

    Above the true sup-norm of a on the support these decay geometrically;
    below it they saturate at 1.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    log_theta = math.log(threshold)
    out = []
    for m, v in sorted(even_power_values(L, a).items()):
        if v <= 0:
            out.append((m, 0.0))
            continue
        log_bound = (
            math.log(v.numerator) - math.log(v.denominator) - 2 * m * log_theta
        )
        out.append((m, min(1.0, math.exp(min(log_bound, 0.0)))))
    return out


def ql_certificates(
    L: MomentSequence,
    a: Polynomial,
    t: Optional[int] = None,
    slack: float = DEFAULT_SLACK,
    tolerance: float = 1e-9,
) -> Tuple[PsdReport, PsdReport]:
    """Localizing-matrix positivity for C + a and C - a with C just above
    the sup-norm estimate of a.

    Both verdicts passing is the truncated evidence that a sits inside the
    cone of polynomials the functional treats as nonnegative, with the
    Archimedean bound C.
    """
    C = Fraction(
        p_L_lower_estimate(L, a) * (1.0 + slack)
    ).limit_denominator(10**9)
    if t is None:
        t = (L.max_degree - a.degree) // 2
    plus = localizing_matrix(L, Polynomial.constant(L.num_vars, C) + a, t)
    minus = localizing_matrix(L, Polynomial.constant(L.num_vars, C) - a, t)
    return psd_check(plus, tolerance), psd_check(minus, tolerance)
