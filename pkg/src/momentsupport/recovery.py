"""Atom recovery from truncated moment data.

Two complementary strategies.  The classical one-variable route reads the
atom count off the first vanishing leading principal minor of the moment
Hankel matrix, with the minors evaluated exactly so that borderline float
determinants cannot fake a finite support.  The grid route works in any
dimension: it sweeps certified singleton-mass bounds over a lattice in the
support box and clusters the nodes where the bounds both stay large and
stabilize.  Both refuse, rather than guess, when the data does not look
finitely supported.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, IllConditioned, RankUnstable
from .linalg import leading_minor_signs, rational_solve
from .moments import AtomicMeasure, MomentSequence
from .poly import monomials_up_to
from .support import SupportBox, atom_mass, support_box

Point = Tuple[Fraction, ...]

#: Relative imaginary part above which a recovered root is not trusted.
IMAG_TOLERANCE = 1e-7
#: Allowed drift of the recovered total mass from 1 before renormalizing.
MASS_DRIFT_TOLERANCE = 1e-6


@dataclass(frozen=True)
class RecoveryResult:
    """Recovered atomic measure plus the worst moment mismatch it leaves."""

    measure: AtomicMeasure
    residual: float
    method: str

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "atoms": [
                {"point": [float(x) for x in p], "weight": float(w)}
                for p, w in self.measure.atoms
            ],
            "residual": self.residual,
        }


def _moment_residual(L: MomentSequence, measure: AtomicMeasure) -> float:
    """Worst moment mismatch up to degree 2N, the data a recovery of N
    atoms actually determines."""
    cap = min(L.max_degree, max(2 * len(measure.atoms), 0))
    worst = 0.0
    for exp in monomials_up_to(L.num_vars, cap):
        acc = Fraction(0)
        for point, weight in measure.atoms:
            term = weight
            for x, e in zip(point, exp):
                if e:
                    term *= x**e
            acc += term
        worst = max(worst, abs(float(L.value(exp) - acc)))
    return worst


def prony_recover(
    L: MomentSequence,
    max_atoms: Optional[int] = None,
    tolerance: float = 1e-8,
) -> RecoveryResult:
    """Recover a one-variable atomic measure from its Hankel structure.

    The leading principal minors of the full moment Hankel matrix are
    scanned exactly; the first vanishing one fixes the atom count N, a
    negative one or the absence of a vanishing one raises RankUnstable.
    The monic degree-N annihilating polynomial is solved exactly, its roots
    give the atom locations, and least squares on the Vandermonde system
    gives the weights.
    """
    if L.num_vars != 1:
        raise DimensionMismatch(
            "hankel recovery works on one-variable data; use grid_scan instead"
        )
    m = [L.value((k,)) for k in range(L.max_degree + 1)]
    size = L.max_degree // 2 + 1
    if max_atoms is not None:
        size = min(size, max_atoms + 1)
    hankel = [[m[i + j] for j in range(size)] for i in range(size)]
    signs = leading_minor_signs(hankel)
    n_atoms = None
    for k, sign in enumerate(signs, start=1):
        if sign < 0:
            raise RankUnstable(
                f"leading minor of size {k} is negative; the data is not "
                "a positive moment sequence"
            )
        if sign == 0:
            n_atoms = k - 1
            break
    if n_atoms is None:
        raise RankUnstable(
            f"no vanishing leading minor up to size {size}; truncated data "
            "does not certify a finite atomic support"
        )
    if n_atoms == 0:
        raise RankUnstable("zero-size flat rank; mass moment should be 1")
    rhs = [-m[n_atoms + i] for i in range(n_atoms)]
    block = [[m[i + j] for j in range(n_atoms)] for i in range(n_atoms)]
    coeffs = rational_solve(block, rhs)
    if coeffs is None:
        raise RankUnstable(
            f"hankel block of size {n_atoms} is singular despite a positive minor"
        )
    # Highest power first for the companion-matrix root finder.
    monic = [1.0] + [float(coeffs[j]) for j in range(n_atoms - 1, -1, -1)]
    roots = np.roots(monic)
    scale = 1.0 + max(abs(roots.real))
    if np.max(np.abs(roots.imag)) > IMAG_TOLERANCE * scale:
        raise IllConditioned(
            "annihilating polynomial has a clearly complex root; "
            "locations cannot be trusted"
        )
    locations = np.sort(roots.real)
    if n_atoms > 1 and np.min(np.diff(locations)) < tolerance:
        raise IllConditioned("two recovered locations collide")
    rows = min(L.max_degree + 1, 2 * n_atoms)
    vander = np.vander(locations, rows, increasing=True).T
    target = np.array([float(v) for v in m[:rows]])
    weights, *_ = np.linalg.lstsq(vander, target, rcond=None)
    if np.min(weights) <= 0:
        raise IllConditioned("a recovered weight is not positive")
    total = float(np.sum(weights))
    if abs(total - 1.0) > MASS_DRIFT_TOLERANCE:
        raise IllConditioned(
            f"recovered weights sum to {total:.9f}, too far from 1"
        )
    weights = weights / total
    pairs: List[Tuple[Point, Fraction]] = []
    for x, w in zip(locations, weights):
        pairs.append(
            (
                (Fraction(float(x)).limit_denominator(10**12),),
                Fraction(float(w)).limit_denominator(10**12),
            )
        )
    # Make the total mass exactly 1 again after rationalizing.
    drift = 1 - sum(w for _, w in pairs)
    last_point, last_weight = pairs[-1]
    pairs[-1] = (last_point, last_weight + drift)
    measure = AtomicMeasure.from_pairs(pairs)
    return RecoveryResult(measure, _moment_residual(L, measure), "prony")


def grid_scan(
    L: MomentSequence,
    box: Optional[SupportBox] = None,
    resolution: int = 21,
    d: int = 2,
    budget: Optional[int] = None,
    mass_floor: float = 0.1,
    slack: float = 0.05,
) -> RecoveryResult:
    """Locate atoms by sweeping singleton-mass bounds over a lattice.

    Nodes whose bound sequence stabilizes at or above the floor are kept
    and clustered by lattice adjacency; each cluster contributes one atom
    at the bound-weighted center with the cluster's best bound as weight.
    The weights are upper bounds, not a partition of mass, so the result
    is deliberately left unnormalized.  Zero qualifying nodes produce an
    empty measure, the honest answer for diffuse data.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if box is None:
        box = support_box(L, slack)
    axes: List[List[Fraction]] = []
    for lo, hi in box.intervals:
        lo_f = Fraction(lo).limit_denominator(1 << 20)
        hi_f = Fraction(hi).limit_denominator(1 << 20)
        step = (hi_f - lo_f) / (resolution - 1)
        axes.append([lo_f + j * step for j in range(resolution)])
    steps = [axis[1] - axis[0] for axis in axes]
    kept: List[Tuple[Point, float]] = []
    for node in itertools.product(*axes):
        estimate = atom_mass(
            L, node, d=d, budget=budget, slack=slack, stop_below=mass_floor
        )
        if estimate.converged and estimate.value >= mass_floor:
            kept.append((node, estimate.value))
    if not kept:
        empty = AtomicMeasure(L.num_vars, ())
        return RecoveryResult(empty, _moment_residual(L, empty), "grid")
    clusters = _cluster(kept, steps)
    pairs: List[Tuple[Point, Fraction]] = []
    for members in clusters:
        mass = max(v for _, v in members)
        weight_total = sum(v for _, v in members)
        center = tuple(
            sum(float(p[i]) * v for p, v in members) / weight_total
            for i in range(L.num_vars)
        )
        pairs.append(
            (
                tuple(Fraction(c).limit_denominator(10**9) for c in center),
                Fraction(mass).limit_denominator(10**9),
            )
        )
    pairs.sort(key=lambda pw: pw[0])
    measure = AtomicMeasure.from_pairs(pairs, require_normalized=False)
    return RecoveryResult(measure, _moment_residual(L, measure), "grid")


def _cluster(
    nodes: Sequence[Tuple[Point, float]], steps: Sequence[Fraction]
) -> List[List[Tuple[Point, float]]]:
    """Group lattice nodes whose max-norm gap is at most one step."""
    remaining = list(range(len(nodes)))
    clusters = []
    while remaining:
        frontier = [remaining.pop(0)]
        members = list(frontier)
        while frontier:
            current = frontier.pop()
            point, _ = nodes[current]
            adjacent = [
                idx
                for idx in remaining
                if all(
                    abs(nodes[idx][0][i] - point[i]) <= steps[i] * Fraction(3, 2)
                    for i in range(len(point))
                )
            ]
            for idx in adjacent:
                remaining.remove(idx)
            members.extend(adjacent)
            frontier.extend(adjacent)
        clusters.append([nodes[i] for i in members])
    return clusters


@dataclass(frozen=True)
class MatchReport:
    """How a recovered measure lines up with a reference one.

    Truthiness equals ``matched`` so the report doubles as the boolean
    answer to whether a within-tolerance bijection of atoms exists.
    """

    matched: bool
    location_error: float
    mass_error: float
    truth_count: int
    recovered_count: int

    def __bool__(self) -> bool:
        return self.matched


def compare(
    truth: AtomicMeasure,
    recovered,
    loc_tol: float = 5e-2,
    mass_tol: float = 5e-2,
) -> MatchReport:
    """Greedy nearest-point matching of the truth against a recovered
    measure or a full recovery result."""
    if isinstance(recovered, RecoveryResult):
        recovered = recovered.measure
    if truth.num_vars != recovered.num_vars:
        raise DimensionMismatch("measures live in different dimensions")
    available = list(recovered.atoms)
    worst_loc = 0.0
    worst_mass = 0.0
    for point, weight in truth.atoms:
        if not available:
            return MatchReport(
                False, math.inf, math.inf, len(truth.atoms), len(recovered.atoms)
            )
        dist, idx = min(
            (
                max(abs(float(point[i] - q[i])) for i in range(truth.num_vars)),
                j,
            )
            for j, (q, _) in enumerate(available)
        )
        _, w = available.pop(idx)
        worst_loc = max(worst_loc, dist)
        worst_mass = max(worst_mass, abs(float(weight - w)))
    matched = (
        len(truth.atoms) == len(recovered.atoms)
        and worst_loc <= loc_tol
        and worst_mass <= mass_tol
    )
    return MatchReport(
        matched, worst_loc, worst_mass, len(truth.atoms), len(recovered.atoms)
    )
