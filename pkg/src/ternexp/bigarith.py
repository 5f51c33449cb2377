"""Exact integer arithmetic: primality, factorization, prime powers, radicals,
valuations and exact logarithm probes.

Every answer is proven. Values at or above the magnitude ceiling, and
composites whose splitting exhausts the work budget, raise instead of
returning a guess.
"""
from __future__ import annotations

import math
import os
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator

from .errors import CeilingExceeded, DomainError, Unfactorable

CEILING_ENV = "TERNEXP_CEILING"
DEFAULT_CEILING = 1 << 128

# Miller-Rabin with the first 13 prime bases is deterministic below this bound
# (Sorenson and Webster, 2015).  Larger inputs get a Pocklington proof.
MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_DETERMINISTIC_BOUND = 3317044064679887385961981

# Iterations of Brent's cycle per polynomial, and polynomials tried per split.
RHO_BUDGET = 1 << 22
RHO_ATTEMPTS = 8

_TRIAL_LIMIT = 2000


def _small_primes(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


SMALL_PRIMES = _small_primes(_TRIAL_LIMIT)
_SMALL_PRIME_SET = frozenset(SMALL_PRIMES)


def parse_ceiling(text: str) -> int:
    """Parse a ceiling given as a decimal integer or as ``2^N`` / ``2**N``."""
    text = text.strip()
    for sep in ("**", "^"):
        if sep in text:
            base, exp = text.split(sep, 1)
            value = int(base) ** int(exp)
            break
    else:
        value = int(text)
    if value < 2:
        raise DomainError(f"ceiling must be at least 2, got {text!r}")
    return value


def _ceiling_from_env() -> int:
    raw = os.environ.get(CEILING_ENV)
    return parse_ceiling(raw) if raw else DEFAULT_CEILING


_ceiling = _ceiling_from_env()


def get_ceiling() -> int:
    return _ceiling


def set_ceiling(value: int) -> None:
    global _ceiling
    if value < 2:
        raise DomainError("ceiling must be at least 2")
    _ceiling = value


@contextmanager
def ceiling(value: int) -> Iterator[None]:
    """Temporarily replace the magnitude ceiling."""
    old = get_ceiling()
    set_ceiling(value)
    try:
        yield
    finally:
        set_ceiling(old)


def _check_ceiling(n: int, what: str) -> None:
    if n >= _ceiling:
        raise CeilingExceeded(
            f"{what}: {n.bit_length()}-bit value is at or above the ceiling "
            f"of {_ceiling.bit_length() - 1} bits",
            n,
        )


# ---------------------------------------------------------------------------
# Roots and exact powers


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0."""
    if n < 0 or k < 1:
        raise DomainError(f"iroot needs n >= 0 and k >= 1, got n={n}, k={k}")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    bits = n.bit_length()
    if k >= bits:
        return 1
    # Newton from above converges monotonically to the floor.
    x = 1 << -(-bits // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def integer_root(n: int, k: int) -> int | None:
    """Return r with r**k == n, or None."""
    r = iroot(n, k)
    return r if r**k == n else None


def remove_factor(n: int, d: int) -> tuple[int, int]:
    """Strip every factor d from n; return (cofactor, count)."""
    if d < 2:
        raise DomainError(f"divisor must be at least 2, got {d}")
    if n == 0:
        raise DomainError("cannot strip factors from 0")
    count = 0
    while n % d == 0:
        n //= d
        count += 1
    return n, count


def exact_root(n: int, base: int) -> int | None:
    """Return e >= 0 with base**e == n exactly, or None.

    This is the exact logarithm probe used to recover an exponent.
    """
    if n < 1:
        raise DomainError(f"exact_root needs n >= 1, got {n}")
    if base < 2:
        raise DomainError(f"exact_root needs base >= 2, got {base}")
    rest, e = remove_factor(n, base)
    return e if rest == 1 else None


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


# ---------------------------------------------------------------------------
# Primality


def _is_strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _pocklington(n: int) -> bool:
    # n has already passed every strong probable prime test in MR_BASES.
    fac = factorize(n - 1)
    for q, _ in fac.factors:
        for a in range(2, 10_000):
            if pow(a, n - 1, n) != 1:
                return False
            if math.gcd(pow(a, (n - 1) // q, n) - 1, n) == 1:
                break
        else:
            raise CeilingExceeded(f"no Pocklington witness found for {n}", n)
    return True


def is_prime(n: int) -> bool:
    """Deterministic primality test for 1 <= n < ceiling."""
    if n < 1:
        raise DomainError(f"is_prime needs n >= 1, got {n}")
    if n <= _TRIAL_LIMIT:
        return n in _SMALL_PRIME_SET
    _check_ceiling(n, "is_prime")
    for p in SMALL_PRIMES[:50]:
        if n % p == 0:
            return False
    if not all(_is_strong_probable_prime(n, a) for a in MR_BASES):
        return False
    if n < MR_DETERMINISTIC_BOUND:
        return True
    return _pocklington(n)


# ---------------------------------------------------------------------------
# Factorization


@dataclass(frozen=True)
class Factorization:
    """Prime factorization ``value = prod(p**e for p, e in factors)``."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError(f"primes must be strictly increasing: {primes}")
        if any(e < 1 for _, e in self.factors):
            raise ValueError("exponents must be positive")
        if math.prod(p**e for p, e in self.factors) != self.value:
            raise ValueError(f"factors do not multiply to {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __len__(self) -> int:
        return len(self.factors)


def _brent(n: int, c: int) -> int | None:
    """One run of Pollard-Brent rho with x -> x^2 + c; a proper divisor or None."""
    y, r, q, g = 2, 1, 1, 1
    x = ys = y
    block = 128
    spent = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(block, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += block
        spent += r
        r <<= 1
        if spent > RHO_BUDGET:
            return None
    if g == n:
        # Batched gcd overshot; backtrack one step at a time.
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split(n: int) -> int:
    """Return a proper divisor of a composite n with no small factors."""
    for k in (2, 3, 5, 7):
        r = integer_root(n, k)
        if r is not None:
            return r
    for c in range(1, RHO_ATTEMPTS + 1):
        d = _brent(n, c)
        if d is not None:
            return d
    raise Unfactorable(f"unfactorable at desk scale: {n}", n)


def factorize(n: int) -> Factorization:
    """Complete prime factorization of 1 <= n < ceiling."""
    if n < 1:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    _check_ceiling(n, "factorize")
    found: dict[int, int] = {}
    rest = n
    for p in SMALL_PRIMES:
        if p * p > rest:
            break
        if rest % p == 0:
            rest, e = remove_factor(rest, p)
            found[p] = e
    stack = [rest] if rest > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        d = _split(m)
        stack.extend((d, m // d))
    return Factorization(n, tuple(sorted(found.items())))


# ---------------------------------------------------------------------------
# Prime powers, radicals, valuations


@dataclass(frozen=True)
class PrimePower:
    base: int
    exponent: int

    def __post_init__(self) -> None:
        if self.exponent < 1:
            raise ValueError("exponent must be positive")

    @property
    def value(self) -> int:
        return self.base**self.exponent


def as_prime_power(n: int) -> PrimePower | None:
    """Write n >= 2 as p**e with p prime, or return None."""
    if n < 2:
        raise DomainError(f"as_prime_power needs n >= 2, got {n}")
    for p in SMALL_PRIMES:
        if n % p == 0:
            rest, e = remove_factor(n, p)
            return PrimePower(p, e) if rest == 1 else None
        if p * p > n:
            return PrimePower(n, 1)
    # No prime factor below the trial limit, so any exponent is small.
    max_e = n.bit_length() // (_TRIAL_LIMIT.bit_length() - 1)
    for e in range(max_e, 1, -1):
        r = integer_root(n, e)
        if r is not None and is_prime(r):
            return PrimePower(r, e)
    return PrimePower(n, 1) if is_prime(n) else None


def is_prime_power(n: int) -> bool:
    return n >= 2 and as_prime_power(n) is not None


def radical(n: int) -> int:
    """Product of the distinct primes dividing n; radical(1) == 1."""
    return math.prod(factorize(n).primes)


def valuation(p: int, n: int) -> int:
    """Largest m with p**m dividing n >= 1; p must be prime.

    Only p is primality-tested, so n may exceed the ceiling.
    """
    if not (p >= 2 and is_prime(p)):
        raise DomainError(f"valuation needs a prime, got {p}")
    if n < 1:
        raise DomainError(f"valuation needs n >= 1, got {n}")
    return remove_factor(n, p)[1]
