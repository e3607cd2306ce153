"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial in m variables is a mapping from exponent tuples to nonzero
``Fraction`` coefficients.  The zero polynomial has an empty mapping.  All
arithmetic is exact; floats never enter coefficient storage (decimal strings
are parsed in base ten, so "0.1" means 1/10).

Monomials are ordered graded lexicographically: first by total degree, then
by comparing exponent tuples with earlier variables weighing more.  That
order fixes text/JSON serialization and the row order of moment matrices.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

from .errors import BudgetExceeded, DimensionMismatch, MomentFileError

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]

#: Total-degree cap for power helpers.  Exceeding it raises BudgetExceeded.
DEFAULT_DEGREE_BUDGET = 256

_VAR_RE = re.compile(r"^[Xx](\d*)$")


def total_degree(exp: Exponent) -> int:
    return sum(exp)


def grlex_key(exp: Exponent) -> Tuple[int, Exponent]:
    """Sort key realizing graded lexicographic order (X1 > X2 > ...)."""
    return (sum(exp), exp)


def monomials_up_to(num_vars: int, degree: int) -> List[Exponent]:
    """All exponents with total degree <= degree, in graded lex order."""
    out: List[Exponent] = []

    def rec(prefix: List[int], budget: int) -> None:
        if len(prefix) == num_vars:
            out.append(tuple(prefix))
            return
        for e in range(budget + 1):
            rec(prefix + [e], budget - e)

    rec([], degree)
    out.sort(key=grlex_key)
    return out


@dataclass(frozen=True)
class Polynomial:
    """Immutable sparse polynomial.  ``coeffs`` must not contain zeros."""

    num_vars: int
    coeffs: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise ValueError("num_vars must be >= 1")
        clean: Dict[Exponent, Fraction] = {}
        for exp, c in self.coeffs.items():
            if len(exp) != self.num_vars:
                raise DimensionMismatch(
                    f"exponent {exp} has {len(exp)} entries, expected {self.num_vars}"
                )
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = Fraction(c)
            if c != 0:
                clean[tuple(exp)] = c
        object.__setattr__(self, "coeffs", clean)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(num_vars: int) -> "Polynomial":
        return Polynomial(num_vars, {})

    @staticmethod
    def constant(num_vars: int, value: Scalar) -> "Polynomial":
        return Polynomial(num_vars, {(0,) * num_vars: Fraction(value)})

    @staticmethod
    def variable(num_vars: int, index: int) -> "Polynomial":
        """The coordinate polynomial X_{index+1}."""
        if not 0 <= index < num_vars:
            raise DimensionMismatch(f"variable index {index} out of range")
        exp = tuple(1 if i == index else 0 for i in range(num_vars))
        return Polynomial(num_vars, {exp: Fraction(1)})

    # -- basic queries -----------------------------------------------------

    @property
    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        if not self.coeffs:
            return 0
        return max(sum(e) for e in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> Iterator[Tuple[Exponent, Fraction]]:
        """Terms in descending graded lex order (leading term first)."""
        for exp in sorted(self.coeffs, key=grlex_key, reverse=True):
            yield exp, self.coeffs[exp]

    # -- arithmetic --------------------------------------------------------

    def _check_same_vars(self, other: "Polynomial") -> None:
        if self.num_vars != other.num_vars:
            raise DimensionMismatch(
                f"{self.num_vars} variables vs {other.num_vars}"
            )

    def __add__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.num_vars, other)
        self._check_same_vars(other)
        out = dict(self.coeffs)
        for exp, c in other.coeffs.items():
            out[exp] = out.get(exp, Fraction(0)) + c
        return Polynomial(self.num_vars, out)

    def __radd__(self, other: Scalar) -> "Polynomial":
        return self.__add__(other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.num_vars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.num_vars, other)
        return self.__add__(-other)

    def __rsub__(self, other: Scalar) -> "Polynomial":
        return (-self).__add__(other)

    def __mul__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            return Polynomial(
                self.num_vars, {e: c * v for e, v in self.coeffs.items()}
            )
        self._check_same_vars(other)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                out[exp] = out.get(exp, Fraction(0)) + c1 * c2
        return Polynomial(self.num_vars, out)

    def __rmul__(self, other: Scalar) -> "Polynomial":
        return self.__mul__(other)

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.num_vars, 1)
        base = self
        k = exponent
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k >>= 1
        return result

    def eval(self, point: Sequence[Scalar]) -> Fraction:
        """Exact evaluation at a rational point."""
        if len(point) != self.num_vars:
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, expected {self.num_vars}"
            )
        pt = [Fraction(x) for x in point]
        acc = Fraction(0)
        for exp, c in self.coeffs.items():
            term = c
            for x, e in zip(pt, exp):
                if e:
                    term *= x**e
            acc += term
        return acc

    # -- serialization -----------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form, leading term first.

        Example: ``1/2*X1^2*X2 - 2*X1 + 3``.
        """
        if self.is_zero():
            return "0"
        pieces: List[str] = []
        for i, (exp, c) in enumerate(self.terms()):
            factors = [
                f"X{j + 1}" + (f"^{e}" if e > 1 else "")
                for j, e in enumerate(exp)
                if e > 0
            ]
            mag = abs(c)
            if factors and mag == 1:
                body = "*".join(factors)
            elif factors:
                body = "*".join([str(mag)] + factors)
            else:
                body = str(mag)
            if i == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append(("- " if c < 0 else "+ ") + body)
        return " ".join(pieces)

    @staticmethod
    def from_text(text: str, num_vars: int) -> "Polynomial":
        """Parse a sum of rational-coefficient monomial terms.

        Accepts coefficients as integers, p/q, or decimal strings, and
        variables X1..Xm (bare ``X`` is X1).  No parentheses.
        """
        coeffs: Dict[Exponent, Fraction] = {}
        stripped = text.strip()
        if not stripped:
            raise MomentFileError("empty polynomial text")
        for sign, term in _split_terms(stripped):
            exp = [0] * num_vars
            coef = Fraction(sign)
            saw_factor = False
            for factor in term.split("*"):
                factor = factor.strip()
                if not factor:
                    raise MomentFileError(f"empty factor in term {term!r}")
                m = _VAR_RE.match(factor.split("^")[0])
                if m:
                    idx = int(m.group(1)) if m.group(1) else 1
                    if not 1 <= idx <= num_vars:
                        raise MomentFileError(
                            f"variable X{idx} out of range for {num_vars} variables"
                        )
                    power = 1
                    if "^" in factor:
                        try:
                            power = int(factor.split("^", 1)[1])
                        except ValueError as exc:
                            raise MomentFileError(f"bad exponent in {factor!r}") from exc
                        if power < 0:
                            raise MomentFileError(f"negative exponent in {factor!r}")
                    exp[idx - 1] += power
                else:
                    try:
                        coef *= Fraction(factor)
                    except (ValueError, ZeroDivisionError) as exc:
                        raise MomentFileError(f"bad coefficient {factor!r}") from exc
                saw_factor = True
            if not saw_factor:
                raise MomentFileError(f"empty term in {text!r}")
            key = tuple(exp)
            coeffs[key] = coeffs.get(key, Fraction(0)) + coef
        return Polynomial(num_vars, coeffs)

    def to_json_dict(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "terms": [
                {"exp": list(exp), "coef": str(c)} for exp, c in self.terms()
            ],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "Polynomial":
        try:
            num_vars = int(data["num_vars"])
            coeffs: Dict[Exponent, Fraction] = {}
            for term in data["terms"]:
                exp = tuple(int(e) for e in term["exp"])
                coeffs[exp] = coeffs.get(exp, Fraction(0)) + Fraction(str(term["coef"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MomentFileError(f"malformed polynomial object: {exc}") from exc
        return Polynomial(num_vars, coeffs)

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def loads(text: str) -> "Polynomial":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MomentFileError(f"invalid JSON: {exc}") from exc
        return Polynomial.from_json_dict(data)


def _split_terms(text: str) -> Iterable[Tuple[int, str]]:
    """Split on top-level +/- into (sign, term) pairs.

    Scientific-notation coefficients are not supported, which keeps every
    +/- a term boundary or a leading sign.
    """
    pieces = text.replace("-", "+-").split("+")
    terms: List[Tuple[int, str]] = []
    for index, piece in enumerate(pieces):
        piece = piece.strip()
        if not piece:
            if index == 0:
                continue
            raise MomentFileError(f"dangling operator in {text!r}")
        sign = 1
        if piece.startswith("-"):
            sign = -1
            piece = piece[1:].strip()
        if not piece:
            raise MomentFileError(f"dangling sign in {text!r}")
        terms.append((sign, piece))
    if not terms:
        raise MomentFileError(f"no terms in {text!r}")
    return terms


def pow2(p: Polynomial, d: int, budget: int = DEFAULT_DEGREE_BUDGET) -> Polynomial:
    """p raised to the power 2**d via d squarings.

    The result degree deg(p) * 2**d is checked against the budget before any
    multiplication happens.
    """
    if d < 0:
        raise ValueError("d must be >= 0")
    target_degree = p.degree << d
    if target_degree > budget:
        raise BudgetExceeded(target_degree, budget)
    out = p
    for _ in range(d):
        out = out * out
    return out
