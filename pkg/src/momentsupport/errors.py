"""Exceptions shared across the package."""

from __future__ import annotations


class MomentSupportError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(MomentSupportError):
    """Operands disagree on the number of variables."""


class DegreeExceeded(MomentSupportError):
    """A polynomial's degree exceeds the stored moment degree."""

    def __init__(self, degree: int, max_degree: int) -> None:
        super().__init__(f"degree {degree} exceeds stored maximum {max_degree}")
        self.degree = degree
        self.max_degree = max_degree


class BudgetExceeded(MomentSupportError):
    """A requested power would exceed the global degree budget."""

    def __init__(self, degree: int, budget: int) -> None:
        super().__init__(f"degree {degree} exceeds budget {budget}")
        self.degree = degree
        self.budget = budget


class NegativePower(MomentSupportError):
    """An even-power moment came out negative; the input cannot be a
    positive functional."""


class GrowthDiverging(MomentSupportError):
    """A coordinate's even-power roots diverge, so no bounded support box
    exists."""

    def __init__(self, index: int) -> None:
        super().__init__(f"coordinate X{index + 1} has a diverging growth profile")
        self.index = index


class RankUnstable(MomentSupportError):
    """Structured-matrix ranks never stabilized, so no finite atom count
    can be read off."""


class IllConditioned(MomentSupportError):
    """Recovered nodes are too close or not real; results would be garbage."""


class MomentFileError(MomentSupportError):
    """A moment or polynomial file is malformed or incomplete."""
