"""Executable forms of the classical auxiliary results used by the proof.

Each ``lemma*_check`` evaluates one statement on a concrete input and returns
an evidence record.  When the statement fails on data, the check raises
:class:`~ternexp.errors.LemmaFalsification` carrying that record.

The two enumerators search finite boxes for solutions of the
Nagell-Ljunggren equation ``(X^m - 1)/(X - 1) = Y^n`` and of Catalan's
equation ``X^m - Y^n = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .bigarith import factorize, integer_root, is_prime, valuation
from .errors import DomainError, LemmaFalsification, PreconditionError


def repunit(X: int, length: int) -> int:
    """(X**length - 1) // (X - 1), i.e. X**(length-1) + ... + X + 1."""
    if X < 2 or length < 1:
        raise DomainError(f"repunit needs X >= 2 and length >= 1, got ({X}, {length})")
    return (X**length - 1) // (X - 1)


def _is_odd_prime(n: int) -> bool:
    return n > 2 and is_prime(n)


# ---------------------------------------------------------------------------
# Divisibility statements


@dataclass(frozen=True)
class Lemma3Evidence:
    X: int
    m: int
    n: int
    divides: bool
    m_divides_n: bool
    quotient_odd: bool

    @property
    def holds(self) -> bool:
        # Both directions: X^m + 1 | X^n + 1  <=>  m | n with n/m odd.
        return self.divides == (self.m_divides_n and self.quotient_odd)


def lemma3_check(X: int, m: int, n: int) -> Lemma3Evidence:
    if X < 2 or m < 1 or n < 1:
        raise DomainError(f"lemma3_check needs X >= 2, m, n >= 1, got ({X}, {m}, {n})")
    divides = (X**n + 1) % (X**m + 1) == 0
    m_divides_n = n % m == 0
    ev = Lemma3Evidence(X, m, n, divides, m_divides_n, m_divides_n and (n // m) % 2 == 1)
    if not ev.holds:
        raise LemmaFalsification("X^m+1 | X^n+1 disagrees with (m | n, n/m odd)", ev)
    return ev


@dataclass(frozen=True)
class Lemma4Evidence:
    X: int
    ell: int
    repunit_value: int
    adjusted_value: int
    all_divisors_congruent: bool
    # None when X is not 1 mod ell, where the exact-division clause is vacuous.
    exact_ell_division: bool | None
    bad_divisors: tuple[int, ...] = ()

    @property
    def holds(self) -> bool:
        return self.all_divisors_congruent and self.exact_ell_division is not False


def lemma4_check(X: int, ell: int) -> Lemma4Evidence:
    """Prime divisors of the repunit (with one factor ell removed when
    X = 1 mod ell) are all 1 mod 2*ell."""
    if X < 2:
        raise DomainError(f"lemma4_check needs X >= 2, got {X}")
    if not _is_odd_prime(ell):
        raise DomainError(f"lemma4_check needs an odd prime length, got {ell}")
    value = repunit(X, ell)
    if X % ell == 1:
        exact = valuation(ell, value) == 1
        adjusted = value // ell
    else:
        exact = None
        adjusted = value
    bad = tuple(p for p in factorize(adjusted).primes if p % (2 * ell) != 1)
    ev = Lemma4Evidence(X, ell, value, adjusted, not bad, exact, bad)
    if not ev.holds:
        raise LemmaFalsification("repunit divisor congruence failed", ev)
    return ev


@dataclass(frozen=True)
class Lemma5Evidence:
    p: int
    X: int
    ell: int
    lhs: int
    rhs: int

    @property
    def agree(self) -> bool:
        return self.lhs == self.rhs

    holds = agree


def lemma5_check(p: int, X: int, ell: int) -> Lemma5Evidence:
    """For X = 1 mod p: the p-adic valuation of the repunit equals that of ell."""
    if not _is_odd_prime(p):
        raise DomainError(f"lemma5_check needs an odd prime, got {p}")
    if X < 2 or ell < 1:
        raise DomainError(f"lemma5_check needs X >= 2 and ell >= 1, got ({X}, {ell})")
    if X % p != 1:
        raise PreconditionError(f"X = {X} is not 1 mod {p}")
    ev = Lemma5Evidence(p, X, ell, valuation(p, repunit(X, ell)), valuation(p, ell))
    if not ev.agree:
        raise LemmaFalsification("valuations of repunit and length differ", ev)
    return ev


@dataclass(frozen=True)
class Lemma6Evidence:
    X: int
    ell: int
    p: int
    n: int
    ell_is_odd_prime: bool
    congruence: bool

    @property
    def holds(self) -> bool:
        return self.ell_is_odd_prime and self.congruence


def lemma6_check(X: int, ell: int, p: int, n: int) -> Lemma6Evidence:
    """A repunit of odd length equal to a prime power forces the length to be an
    odd prime with p = 1 mod 2*ell."""
    if X < 2 or ell < 3 or ell % 2 == 0:
        raise PreconditionError(f"need X >= 2 and odd length > 1, got ({X}, {ell})")
    if not _is_odd_prime(p) or n < 1:
        raise PreconditionError(f"need an odd prime p and n >= 1, got ({p}, {n})")
    if repunit(X, ell) != p**n:
        raise PreconditionError(f"repunit({X}, {ell}) != {p}^{n}")
    ev = Lemma6Evidence(X, ell, p, n, is_prime(ell), p % (2 * ell) == 1)
    if not ev.holds:
        raise LemmaFalsification("prime-power repunit of odd length", ev)
    return ev


# ---------------------------------------------------------------------------
# Enumerators


@dataclass(frozen=True, order=True)
class NLSolution:
    X: int
    Y: int
    m: int
    n: int

    def __post_init__(self) -> None:
        if repunit(self.X, self.m) != self.Y**self.n:
            raise ValueError(f"not a solution: {self}")


# Solution set as printed in the classical statement with 2 | n.
NL_PRINTED = (NLSolution(3, 11, 5, 2),)


def nl_enumerate(Xmax: int, mmax: int, nmax: int, *, Xmin: int = 2) -> tuple[NLSolution, ...]:
    """Every (X, Y, m, n) with Xmin <= X <= Xmax, 3 <= m <= mmax, even
    2 <= n <= nmax and Y > 1 solving (X^m - 1)/(X - 1) = Y^n."""
    found = []
    for X in range(max(Xmin, 2), Xmax + 1):
        value = X * X + X + 1
        for m in range(3, mmax + 1):
            for n in range(2, nmax + 1, 2):
                Y = integer_root(value, n)
                if Y is not None and Y > 1:
                    found.append(NLSolution(X, Y, m, n))
            value = value * X + 1
    return tuple(sorted(found))


def nl_discrepancy(found: tuple[NLSolution, ...]) -> dict[str, list[NLSolution]]:
    """Compare an enumerated set with the printed claim."""
    printed = set(NL_PRINTED)
    return {
        "extra": sorted(set(found) - printed),
        "missing": sorted(printed - set(found)),
    }


@dataclass(frozen=True, order=True)
class CatalanSolution:
    X: int
    Y: int
    m: int
    n: int

    def __post_init__(self) -> None:
        if min(self.X, self.Y, self.m, self.n) < 2 or self.X**self.m - self.Y**self.n != 1:
            raise ValueError(f"not a solution: {self}")


def catalan_enumerate(
    vmax: int, emax: int, *, Xmin: int = 2, Xmax: int | None = None
) -> tuple[CatalanSolution, ...]:
    """Every X^m - Y^n = 1 with bases in [2, vmax] and exponents in [2, emax].

    The powers themselves are not bounded by vmax.  ``Xmin``/``Xmax`` cut out
    a slab of X values for sharding.
    """
    if vmax < 2 or emax < 2:
        return ()
    powers: dict[int, list[tuple[int, int]]] = {}
    for Y in range(2, vmax + 1):
        v = Y
        for n in range(2, emax + 1):
            v *= Y
            powers.setdefault(v, []).append((Y, n))
    found = []
    for X in range(max(Xmin, 2), min(vmax, Xmax or vmax) + 1):
        v = X
        for m in range(2, emax + 1):
            v *= X
            for Y, n in powers.get(v - 1, ()):
                found.append(CatalanSolution(X, Y, m, n))
    return tuple(sorted(found))
