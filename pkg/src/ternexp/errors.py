"""Exception hierarchy shared by every module."""
from __future__ import annotations

from typing import Any


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(ValueError):
    """A hypothesis required by an operation does not hold for its input."""


class CeilingExceeded(ArithmeticError):
    """A value is too large to be handled with proven (non-probabilistic) answers."""

    def __init__(self, message: str, value: int | None = None):
        super().__init__(message)
        self.value = value


class Unfactorable(CeilingExceeded):
    """Factor splitting ran out of its work budget: unfactorable at desk scale."""


class LemmaFalsification(AssertionError):
    """An executable lemma statement failed on concrete data.

    This means either an implementation bug or a misprint in the statement.
    ``evidence`` carries the full record so it can be reported verbatim.
    """

    def __init__(self, message: str, evidence: Any = None):
        super().__init__(message)
        self.evidence = evidence


class AmbiguousClassification(Exception):
    """More than one conclusion matched where at most one was expected."""

    def __init__(self, message: str, evidence: Any = None):
        super().__init__(message)
        self.evidence = evidence
