"""Solutions of X^l - 1 = 2^m p^n and X^l - 1 = p^m q^n on finite boxes, and
their classification into the admissible shapes.

Enumeration factors X^l - 1 once per grid point and matches the shape of the
factorization.  Grid points whose factorization cannot be completed under
the magnitude ceiling are reported in ``skipped``, never dropped.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Generic, TypeVar, Union

from .bigarith import as_prime_power, factorize, is_prime, remove_factor
from .errors import AmbiguousClassification, CeilingExceeded, LemmaFalsification
from .lemmas import repunit

T = TypeVar("T")


@dataclass(frozen=True)
class Enumeration(Generic[T]):
    solutions: tuple[T, ...]
    # (X, ell, reason) for grid points that could not be decided.
    skipped: tuple[tuple[int, int, str], ...] = ()

    @property
    def complete(self) -> bool:
        return not self.skipped


# ---------------------------------------------------------------------------
# X^l - 1 = 2^m p^n


@dataclass(frozen=True, order=True)
class TwoPrimeSolution:
    p: int
    X: int
    ell: int
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.X**self.ell - 1 != 2**self.m * self.p**self.n:
            raise ValueError(f"not a solution: {self}")

    def astuple(self) -> tuple[int, int, int, int, int]:
        return (self.p, self.X, self.ell, self.m, self.n)


SPORADIC = (
    (3, 5, 2, 3, 1),
    (3, 7, 2, 4, 1),
    (5, 9, 2, 4, 1),
    (5, 3, 4, 4, 1),
    (3, 17, 2, 5, 2),
    (7, 15, 2, 5, 1),
)

# The two-power family is printed with p = 2^(m-2) - zeta, but eliminating
# X^(l/2) from X + zeta = 2p, X - zeta = 2^(m-1) gives p = 2^(m-2) + zeta.
# 33^2 - 1 = 2^6 * 17 and 63^2 - 1 = 2^7 * 31 confirm the second form.
SIGN_NOTE = (
    "two-power family: printed p = 2^(m-2) - zeta; data satisfy p = 2^(m-2) + zeta "
    "(e.g. 33^2-1 = 2^6*17, 63^2-1 = 2^7*31)"
)


@dataclass(frozen=True)
class Sporadic:
    index: int


@dataclass(frozen=True)
class TwoPowerFamily:
    zeta: int
    note: str = field(default=SIGN_NOTE, compare=False)


@dataclass(frozen=True)
class OddPrimeRepunit:
    pass


Lemma7Outcome = Union[Sporadic, TwoPowerFamily, OddPrimeRepunit]


def enum_2p(Xmax: int, lmax: int, *, Xmin: int = 2) -> Enumeration[TwoPrimeSolution]:
    found = []
    skipped = []
    for X in range(max(Xmin, 2), Xmax + 1):
        if X % 2 == 0:
            continue  # X^l - 1 is odd
        for ell in range(2, lmax + 1):
            odd, m = remove_factor(X**ell - 1, 2)
            if odd == 1:
                continue
            try:
                pp = as_prime_power(odd)
            except CeilingExceeded as exc:
                skipped.append((X, ell, str(exc)))
                continue
            if pp is not None:
                found.append(TwoPrimeSolution(pp.base, X, ell, m, pp.exponent))
    return Enumeration(tuple(sorted(found)), tuple(skipped))


def lemma7_matches(s: TwoPrimeSolution) -> list[Lemma7Outcome]:
    """Every conclusion whose conjuncts s satisfies."""
    p, X, ell, m, n = s.astuple()
    out: list[Lemma7Outcome] = []
    if s.astuple() in SPORADIC:
        out.append(Sporadic(SPORADIC.index(s.astuple())))
    if ell == 2 and m >= 6 and n == 1:
        for zeta in (1, -1):
            if X == 2 ** (m - 1) + zeta and p == 2 ** (m - 2) + zeta:
                out.append(TwoPowerFamily(zeta))
    if (
        ell > 2
        and is_prime(ell)
        and X - 1 == 2**m
        and repunit(X, ell) == p**n
        and p % (2 * ell) == 1
    ):
        out.append(OddPrimeRepunit())
    return out


def classify_2p(s: TwoPrimeSolution) -> Lemma7Outcome:
    matches = lemma7_matches(s)
    if len(matches) != 1:
        raise LemmaFalsification(
            f"{s} matches {len(matches)} conclusions, expected exactly one",
            {"solution": s, "matches": matches},
        )
    return matches[0]


# ---------------------------------------------------------------------------
# X^l - 1 = p^m q^n


@dataclass(frozen=True, order=True)
class PQSolution:
    p: int
    q: int
    X: int
    ell: int
    m: int
    n: int

    def __post_init__(self) -> None:
        if not self.p < self.q:
            raise ValueError(f"canonical labeling needs p < q: {self}")
        if self.X**self.ell - 1 != self.p**self.m * self.q**self.n:
            raise ValueError(f"not a solution: {self}")

    def astuple(self) -> tuple[int, int, int, int, int, int]:
        return (self.p, self.q, self.X, self.ell, self.m, self.n)

    def labeled(self, p: int) -> tuple[int, int, int, int]:
        """(p, q, m, n) with the given prime in the role of p."""
        if p == self.p:
            return self.p, self.q, self.m, self.n
        if p == self.q:
            return self.q, self.p, self.n, self.m
        raise ValueError(f"{p} is not a prime of {self}")


class Conclusion8(enum.Enum):
    EVEN_SPLIT = "even-split"
    MERSENNE = "mersenne"
    ELL_EQUALS_P = "ell-equals-p"
    ELL_EQUALS_Q = "ell-equals-q"
    REPUNIT_Q = "repunit-q"
    REPUNIT_P = "repunit-p"


@dataclass(frozen=True)
class Lemma8Outcome:
    conclusion: Conclusion8
    p: int
    q: int
    zeta: int | None = None


def enum_pq(Xmax: int, lmax: int, *, Xmin: int = 2) -> Enumeration[PQSolution]:
    found = []
    skipped = []
    for X in range(max(Xmin, 2), Xmax + 1):
        if X % 2 == 1:
            continue  # X^l - 1 is even
        for ell in range(2, lmax + 1):
            try:
                fac = factorize(X**ell - 1)
            except CeilingExceeded as exc:
                skipped.append((X, ell, str(exc)))
                continue
            if len(fac) == 2:
                (p, m), (q, n) = fac.factors
                found.append(PQSolution(p, q, X, ell, m, n))
    return Enumeration(tuple(sorted(found)), tuple(skipped))


def lemma8_matches(s: PQSolution, p: int) -> list[Lemma8Outcome]:
    """Every conclusion satisfied with ``p`` playing the role of p."""
    p, q, m, n = s.labeled(p)
    X, ell = s.X, s.ell
    C = Conclusion8
    out = []
    if ell % 2 == 0:
        half = X ** (ell // 2)
        for zeta in (1, -1):
            if half + zeta == p**m and half - zeta == q**n:
                out.append(Lemma8Outcome(C.EVEN_SPLIT, p, q, zeta))
    elif X == 2:
        out.append(Lemma8Outcome(C.MERSENNE, p, q))
    else:
        odd_prime_ell = ell > 2 and is_prime(ell)
        R = repunit(X, ell)
        if ell == p and m > 1 and X - 1 == p ** (m - 1) and R == p * q**n and q % (2 * p) == 1:
            out.append(Lemma8Outcome(C.ELL_EQUALS_P, p, q))
        if ell == q and n > 1 and X - 1 == q ** (n - 1) and R == p**m * q and p % (2 * q) == 1:
            out.append(Lemma8Outcome(C.ELL_EQUALS_Q, p, q))
        if odd_prime_ell and X - 1 == p**m and R == q**n and q % (2 * ell) == 1:
            out.append(Lemma8Outcome(C.REPUNIT_Q, p, q))
        if odd_prime_ell and X - 1 == q**n and R == p**m and p % (2 * ell) == 1:
            out.append(Lemma8Outcome(C.REPUNIT_P, p, q))
    return out


def classify_pq(s: PQSolution, p: int) -> Lemma8Outcome | None:
    """The conclusion matched with ``p`` in the role of p, or None.

    Raises LemmaFalsification when neither labeling matches anything, and
    AmbiguousClassification when a fixed labeling matches more than one.
    """
    matches = lemma8_matches(s, p)
    if not matches and not lemma8_matches(s, s.q if p == s.p else s.p):
        raise LemmaFalsification(f"{s} matches no conclusion under either labeling", s)
    if len(matches) > 1:
        raise AmbiguousClassification(f"{s} matches {len(matches)} conclusions", matches)
    return matches[0] if matches else None


def classify_pq_both(s: PQSolution) -> dict[int, Lemma8Outcome | None]:
    """Classification under both labelings, keyed by the prime playing p."""
    return {p: classify_pq(s, p) for p in (s.p, s.q)}
