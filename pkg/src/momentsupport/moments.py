"""Truncated moment sequences and the matrices built from them.

A MomentSequence stores every moment L(X^gamma) with |gamma| <= max_degree
as an exact rational, normalized so the mass L(1) is 1.  Structured
matrices (moment and localizing) keep exact entries; only the eigenvalue
check converts to floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegreeExceeded, DimensionMismatch, MomentFileError
from .poly import Exponent, Polynomial, grlex_key, monomials_up_to

Point = Tuple[Fraction, ...]

VERDICT_PSD = "psd"
VERDICT_NOT_PSD = "not_psd"
VERDICT_BORDERLINE = "borderline"

#: Relative eigenvalue tolerance used by default in psd_check.
DEFAULT_PSD_TOLERANCE = 1e-9


@dataclass(frozen=True)
class AtomicMeasure:
    """Finitely many weighted points with positive rational weights."""

    num_vars: int
    atoms: Tuple[Tuple[Point, Fraction], ...]

    def __post_init__(self) -> None:
        pts = []
        norm = []
        for point, weight in self.atoms:
            point = tuple(Fraction(x) for x in point)
            weight = Fraction(weight)
            if len(point) != self.num_vars:
                raise DimensionMismatch(
                    f"point {point} has {len(point)} coordinates, expected {self.num_vars}"
                )
            if weight <= 0:
                raise ValueError(f"weight {weight} is not positive")
            if point in pts:
                raise ValueError(f"duplicate atom at {point}")
            pts.append(point)
            norm.append((point, weight))
        object.__setattr__(self, "atoms", tuple(norm))

    @staticmethod
    def from_pairs(
        pairs: Sequence[Tuple[Sequence, object]], require_normalized: bool = True
    ) -> "AtomicMeasure":
        if not pairs:
            raise ValueError("an atomic measure needs at least one atom")
        num_vars = len(pairs[0][0])
        measure = AtomicMeasure(
            num_vars,
            tuple((tuple(Fraction(x) for x in p), Fraction(w)) for p, w in pairs),
        )
        if require_normalized and measure.total_mass() != 1:
            raise ValueError(f"weights sum to {measure.total_mass()}, expected 1")
        return measure

    def total_mass(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    def points(self) -> List[Point]:
        return [p for p, _ in self.atoms]

    def weights(self) -> List[Fraction]:
        return [w for _, w in self.atoms]


@dataclass(frozen=True)
class MomentSequence:
    """All moments up to a fixed total degree, with L(1) = 1."""

    num_vars: int
    max_degree: int
    values: Dict[Exponent, Fraction]
    provenance: str = "unspecified"

    def __post_init__(self) -> None:
        expected = monomials_up_to(self.num_vars, self.max_degree)
        missing = [e for e in expected if e not in self.values]
        if missing:
            raise MomentFileError(
                f"missing {len(missing)} moments up to degree {self.max_degree}, "
                f"first gap at exponent {missing[0]}"
            )
        zero = (0,) * self.num_vars
        if self.values[zero] != 1:
            raise MomentFileError(f"mass moment is {self.values[zero]}, expected 1")
        extras = [e for e in self.values if sum(e) > self.max_degree]
        if extras:
            raise MomentFileError(f"moment beyond max_degree at {extras[0]}")

    def value(self, exp: Exponent) -> Fraction:
        if sum(exp) > self.max_degree:
            raise DegreeExceeded(sum(exp), self.max_degree)
        return self.values[tuple(exp)]


def from_atomic(
    measure: AtomicMeasure, max_degree: int, provenance: Optional[str] = None
) -> MomentSequence:
    """Exact moments of a finitely supported probability measure."""
    if measure.total_mass() != 1:
        raise ValueError("atomic measure must have total mass 1")
    values: Dict[Exponent, Fraction] = {}
    for exp in monomials_up_to(measure.num_vars, max_degree):
        acc = Fraction(0)
        for point, weight in measure.atoms:
            term = weight
            for x, e in zip(point, exp):
                if e:
                    term *= x**e
            acc += term
        values[exp] = acc
    tag = provenance if provenance is not None else f"atomic({len(measure.atoms)})"
    return MomentSequence(measure.num_vars, max_degree, values, tag)


def dirac_series_measure(count: int) -> AtomicMeasure:
    """Atoms at 1/n for n = 1..count with weights 2^-n, the last weight
    bumped to 2^-(count-1) so the total mass is exactly 1."""
    if count < 1:
        raise ValueError("count must be >= 1")
    pairs = []
    for n in range(1, count + 1):
        weight = Fraction(1, 2 ** (n - 1 if n == count else n))
        pairs.append(((Fraction(1, n),), weight))
    return AtomicMeasure.from_pairs(pairs)


def from_closed_form(
    family: str, max_degree: int, count: int = 20
) -> MomentSequence:
    """Built-in one-variable families.

    ``uniform01``: L(X^k) = 1/(k+1).
    ``gaussian``: standard normal, L(X^(2n)) = (2n-1)!!, odd moments 0.
    ``diracseries``: the geometric-weight atom sequence at 1/n (see
    dirac_series_measure); ``count`` sets how many atoms.
    """
    key = family.strip().lower()
    if key == "uniform01":
        values = {(k,): Fraction(1, k + 1) for k in range(max_degree + 1)}
        return MomentSequence(1, max_degree, values, "uniform01")
    if key == "gaussian":
        values = {(0,): Fraction(1)}
        if max_degree >= 1:
            values[(1,)] = Fraction(0)
        for k in range(2, max_degree + 1):
            values[(k,)] = (k - 1) * values[(k - 2,)]
        return MomentSequence(1, max_degree, values, "gaussian")
    if key == "diracseries":
        return from_atomic(
            dirac_series_measure(count), max_degree, f"diracseries({count})"
        )
    raise MomentFileError(f"unknown closed form {family!r}")


def apply(L: MomentSequence, p: Polynomial) -> Fraction:
    """L applied to a polynomial, exactly."""
    if p.num_vars != L.num_vars:
        raise DimensionMismatch(
            f"polynomial in {p.num_vars} variables, moments in {L.num_vars}"
        )
    if p.degree > L.max_degree:
        raise DegreeExceeded(p.degree, L.max_degree)
    acc = Fraction(0)
    for exp, c in p.coeffs.items():
        acc += c * L.values[exp]
    return acc


def matrix_index(num_vars: int, t: int) -> List[Exponent]:
    """Row/column exponents of the degree-t moment matrix (graded lex)."""
    return monomials_up_to(num_vars, t)


def moment_matrix(L: MomentSequence, t: int) -> List[List[Fraction]]:
    """Exact matrix with entries L(X^(gamma+delta)) for |gamma|,|delta| <= t."""
    if 2 * t > L.max_degree:
        raise DegreeExceeded(2 * t, L.max_degree)
    index = matrix_index(L.num_vars, t)
    return [
        [L.values[tuple(g + d for g, d in zip(row, col))] for col in index]
        for row in index
    ]


def localizing_matrix(
    L: MomentSequence, a: Polynomial, t: int
) -> List[List[Fraction]]:
    """Exact matrix with entries L(X^(gamma+delta) * a)."""
    if a.num_vars != L.num_vars:
        raise DimensionMismatch(
            f"polynomial in {a.num_vars} variables, moments in {L.num_vars}"
        )
    if 2 * t + a.degree > L.max_degree:
        raise DegreeExceeded(2 * t + a.degree, L.max_degree)
    shifted: Dict[Exponent, Fraction] = {}
    for exp in monomials_up_to(L.num_vars, 2 * t):
        acc = Fraction(0)
        for aexp, c in a.coeffs.items():
            acc += c * L.values[tuple(g + e for g, e in zip(exp, aexp))]
        shifted[exp] = acc
    index = matrix_index(L.num_vars, t)
    return [
        [shifted[tuple(g + d for g, d in zip(row, col))] for col in index]
        for row in index
    ]


@dataclass(frozen=True)
class PsdReport:
    """Eigenvalue summary of a symmetric matrix.

    ``tolerance`` is the absolute cutoff actually used: the relative input
    tolerance scaled by the largest absolute eigenvalue.  The verdict is
    not_psd below -tolerance, borderline within +-tolerance, psd above.
    """

    size: int
    min_eigenvalue: float
    tolerance: float
    verdict: str
    rank_estimate: int

    @property
    def is_psd(self) -> bool:
        return self.verdict != VERDICT_NOT_PSD

    def to_json_dict(self) -> dict:
        return {
            "size": self.size,
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "rank_estimate": self.rank_estimate,
        }


def psd_check(
    matrix: Sequence[Sequence], tolerance: float = DEFAULT_PSD_TOLERANCE
) -> PsdReport:
    """Floating eigenvalue test for positive semidefiniteness."""
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise DimensionMismatch("matrix is not square")
    for i in range(n):
        for j in range(i + 1, n):
            if matrix[i][j] != matrix[j][i]:
                raise ValueError(f"matrix not symmetric at ({i}, {j})")
    arr = np.array([[float(x) for x in row] for row in matrix], dtype=float)
    eigs = np.linalg.eigvalsh(arr) if n else np.array([])
    min_eig = float(eigs.min()) if n else 0.0
    scale = float(np.abs(eigs).max()) if n else 0.0
    cutoff = tolerance * scale
    if min_eig < -cutoff:
        verdict = VERDICT_NOT_PSD
    elif abs(min_eig) <= cutoff:
        verdict = VERDICT_BORDERLINE
    else:
        verdict = VERDICT_PSD
    rank = int((eigs > cutoff).sum()) if n else 0
    return PsdReport(n, min_eig, cutoff, verdict, rank)


def cbs_check(L: MomentSequence, a: Polynomial, b: Polynomial) -> bool:
    """Exact check of L(ab)^2 <= L(a^2) L(b^2)."""
    if a.degree + b.degree > L.max_degree:
        raise DegreeExceeded(a.degree + b.degree, L.max_degree)
    if 2 * a.degree > L.max_degree or 2 * b.degree > L.max_degree:
        raise DegreeExceeded(2 * max(a.degree, b.degree), L.max_degree)
    lab = apply(L, a * b)
    return lab * lab <= apply(L, a * a) * apply(L, b * b)


# -- file format -----------------------------------------------------------


def to_json_dict(L: MomentSequence) -> dict:
    moments = [
        {"exp": list(exp), "value": str(L.values[exp])}
        for exp in sorted(L.values, key=grlex_key)
    ]
    return {
        "num_vars": L.num_vars,
        "max_degree": L.max_degree,
        "moments": moments,
        "provenance": L.provenance,
    }


def dumps(L: MomentSequence) -> str:
    return json.dumps(to_json_dict(L), sort_keys=True)


def from_json_dict(data: dict) -> MomentSequence:
    try:
        num_vars = int(data["num_vars"])
        max_degree = int(data["max_degree"])
        raw = data["moments"]
        provenance = str(data.get("provenance", "file"))
    except (KeyError, TypeError, ValueError) as exc:
        raise MomentFileError(f"malformed moment file: {exc}") from exc
    values: Dict[Exponent, Fraction] = {}
    for entry in raw:
        try:
            exp = tuple(int(e) for e in entry["exp"])
            value = entry["value"]
            if isinstance(value, float):
                raise MomentFileError(
                    f"moment at {exp} is a binary float; use a string"
                )
            frac = value if isinstance(value, Fraction) else Fraction(str(value))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MomentFileError(f"malformed moment entry {entry!r}: {exc}") from exc
        if exp in values and values[exp] != frac:
            raise MomentFileError(f"conflicting values for exponent {exp}")
        values[exp] = frac
    return MomentSequence(num_vars, max_degree, values, provenance)


def loads(text: str) -> MomentSequence:
    try:
        # parse_float=Fraction receives the literal digits, so decimals in the
        # file are read in base ten, not converted through binary floats.
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise MomentFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MomentFileError("moment file must be a JSON object")
    return from_json_dict(data)
