"""Solvers for (ak)^x + (bk)^y = ((a+b)k)^z, the reduction pipeline for
solutions with x > z > y, the coverage guard and the F(N) census.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations

from .bigarith import PrimePower, as_prime_power, exact_root, factorize, is_square, radical
from .errors import DomainError, LemmaFalsification, PreconditionError


@dataclass(frozen=True, order=True)
class EquationInstance:
    a: int
    b: int
    k: int = 1

    def __post_init__(self) -> None:
        if min(self.a, self.b) < 2:
            raise DomainError(f"need min(a, b) > 1, got a={self.a}, b={self.b}")
        if self.k < 1:
            raise DomainError(f"need k >= 1, got {self.k}")
        if math.gcd(self.a, self.b) != 1:
            raise DomainError(f"a={self.a} and b={self.b} are not coprime")

    @property
    def sum(self) -> int:
        return self.a + self.b

    def swapped(self) -> EquationInstance:
        return EquationInstance(self.b, self.a, self.k)

    def holds(self, x: int, y: int, z: int) -> bool:
        k = self.k
        return (self.a * k) ** x + (self.b * k) ** y == (self.sum * k) ** z


@dataclass(frozen=True, order=True)
class ExponentTriple:
    x: int
    y: int
    z: int

    @property
    def exceptional(self) -> bool:
        return (self.x, self.y, self.z) != (1, 1, 1)


class OrderingClass(enum.Enum):
    XZY = "x>z>y"
    YZX = "y>z>x"
    OTHER = "other"


def ordering_of(t: ExponentTriple) -> OrderingClass:
    if t.x > t.z > t.y:
        return OrderingClass.XZY
    if t.y > t.z > t.x:
        return OrderingClass.YZX
    return OrderingClass.OTHER


def solve_instance(inst: EquationInstance, zmax: int, *, zmin: int = 1) -> tuple[ExponentTriple, ...]:
    """Every solution with zmin <= z <= zmax.

    For fixed z, x ranges over (ak)^x < ((a+b)k)^z and y is the exact
    logarithm of the remainder to base bk, so the box is covered completely
    with integer arithmetic only.
    """
    A, B, C = inst.a * inst.k, inst.b * inst.k, inst.sum * inst.k
    found = []
    S = C ** max(zmin, 1)
    for z in range(max(zmin, 1), zmax + 1):
        Ax, x = A, 1
        while Ax < S:
            R = S - Ax
            if R % B == 0:
                y = exact_root(R, B)
                if y:
                    found.append(ExponentTriple(x, y, z))
            Ax *= A
            x += 1
        S *= C
    return tuple(sorted(found))


# ---------------------------------------------------------------------------
# Reduction pipeline for x > z > y


def candidate_yz(b: int | PrimePower, k: int, zmax: int) -> tuple[tuple[int, int], ...]:
    """Pairs 1 <= y < z <= zmax with b^y = k^(z-y), for b a prime power.

    Both sides are powers of one prime, so only exponents are compared.
    """
    pp = b if isinstance(b, PrimePower) else as_prime_power(b)
    if pp is None:
        raise PreconditionError(f"b={b} is not a prime power")
    if k < 2:
        raise PreconditionError(f"need k > 1, got {k}")
    j = exact_root(k, pp.base)
    if not j:
        return ()
    s = pp.exponent
    return tuple(
        (y, z) for y in range(1, zmax) for z in range(y + 1, zmax + 1) if s * y == j * (z - y)
    )


def pruned_search_xzy(inst: EquationInstance, zmax: int) -> tuple[ExponentTriple, ...]:
    """Solutions with x > z > y and z <= zmax for a prime-power b and k > 1.

    Any such solution has b^y = k^(z-y) and a^x k^(x-z) + 1 = (a+b)^z; the
    converse also holds, so the result equals the filtered full search.
    """
    if inst.k < 2:
        raise PreconditionError(f"need k > 1, got {inst.k}")
    a, k = inst.a, inst.k
    found = []
    for y, z in candidate_yz(inst.b, k, zmax):
        target = inst.sum**z - 1
        x = z + 1
        lhs = a**x * k
        while lhs <= target:
            if lhs == target:
                found.append(ExponentTriple(x, y, z))
            lhs *= a * k
            x += 1
    return tuple(sorted(found))


def _coprime_splits(b: int) -> list[tuple[int, int]]:
    """All b = b1 * b2 with gcd(b1, b2) = 1 and b1 > 1."""
    parts = [p**e for p, e in factorize(b).factors]
    out = []
    for r in range(1, len(parts) + 1):
        for combo in combinations(parts, r):
            b1 = math.prod(combo)
            out.append((b1, b // b1))
    return sorted(out)


@dataclass(frozen=True)
class ReductionWitness:
    instance: EquationInstance
    triple: ExponentTriple
    rad_k: int
    # Every split (b1, b2) satisfying b1^y = k^(z-y) and the reduced equation.
    splits: tuple[tuple[int, int], ...]


def reduction_witness(inst: EquationInstance, t: ExponentTriple) -> ReductionWitness:
    if inst.k < 2:
        raise PreconditionError(f"need k > 1, got {inst.k}")
    if not inst.holds(t.x, t.y, t.z):
        raise PreconditionError(f"{t} does not solve {inst}")
    if ordering_of(t) is not OrderingClass.XZY:
        raise PreconditionError(f"{t} does not satisfy x > z > y")
    a, b, k = inst.a, inst.b, inst.k
    x, y, z = t.x, t.y, t.z
    rad_k = radical(k)
    evidence = {"instance": inst, "triple": t, "rad_k": rad_k}
    if b % rad_k:
        raise LemmaFalsification(f"rad(k)={rad_k} does not divide b={b}", evidence)
    splits = tuple(
        (b1, b2)
        for b1, b2 in _coprime_splits(b)
        if b1**y == k ** (z - y) and a**x * k ** (x - z) + b2**y == inst.sum**z
    )
    if not splits:
        raise LemmaFalsification("no coprime split b = b1*b2 satisfies the reduction", evidence)
    return ReductionWitness(inst, t, rad_k, splits)


# ---------------------------------------------------------------------------
# Coverage guard


class Exclusion(enum.Enum):
    NO_XZY = "NoXZY"
    NO_YZX = "NoYZX"
    NO_EXCEPTIONAL = "NoExceptional"


class Justification(enum.Enum):
    SUN_TANG_PAIR = "SunTangPair"
    YUAN_HAN_SQUARE_B4 = "YuanHanSquareB4"
    YUAN_HAN_SQUARES_BMOD8 = "YuanHanSquaresBmod8"
    LE_SOYDAN_BAKER = "LeSoydanBaker"
    THEOREM12_I = "Theorem12_i"
    THEOREM12_II = "Theorem12_ii"
    THEOREM12_III = "Theorem12_iii"
    COROLLARY13 = "Corollary13"
    # Exceptional solutions with k > 1, min(a, b) > 2 have x>z>y or y>z>x.
    SUN_TANG_ORDERING = "SunTangOrdering"


class Overall(enum.Enum):
    PROVEN = "Proven"
    UNKNOWN = "Unknown"


SUN_TANG_PAIRS = frozenset({(3, 5), (5, 8), (8, 13), (13, 21)})


@dataclass(frozen=True)
class Verdict:
    instance: EquationInstance
    proven_exclusions: frozenset[Exclusion]
    justifications: frozenset[Justification]
    notes: tuple[str, ...] = field(default=())

    @property
    def overall(self) -> Overall:
        if Exclusion.NO_EXCEPTIONAL in self.proven_exclusions:
            return Overall.PROVEN
        return Overall.UNKNOWN


def theorem12_case(a: int, b: int) -> Justification | None:
    """Which case of the main theorem excludes x > z > y for the ordered pair."""
    pa, pb = as_prime_power(a), as_prime_power(b)
    if pa is None or pb is None or pa.base == pb.base:
        return None
    if pa.base == 2 and pa.exponent > 1:
        return Justification.THEOREM12_I
    if pb.base == 2 and pb.exponent > 1:
        return Justification.THEOREM12_II
    if pa.base > 2 and pb.base > 2:
        return Justification.THEOREM12_III
    return None


def guard(inst: EquationInstance) -> Verdict:
    """Which published results exclude exceptional solutions for ``inst``."""
    a, b, k = inst.a, inst.b, inst.k
    if k == 1:
        return Verdict(inst, frozenset(), frozenset(), ("k = 1: every cited result assumes k > 1",))
    J = Justification
    excl: set[Exclusion] = set()
    just: set[Justification] = set()
    notes = []

    # Each ordered orientation (u, v) excluding u-ordering x>z>y maps back to
    # NoXZY when (u, v) == (a, b) and to NoYZX when swapped.
    for (u, v), tag in (((a, b), Exclusion.NO_XZY), ((b, a), Exclusion.NO_YZX)):
        case = theorem12_case(u, v)
        if case is not None:
            excl.add(tag)
            just.add(case)
        if is_square(u) and is_square(v) and u > 64 * v**3:
            excl.add(tag)
            just.add(J.LE_SOYDAN_BAKER)
    for (u, v), tag in (((a, b), Exclusion.NO_YZX), ((b, a), Exclusion.NO_XZY)):
        if is_square(u) and is_square(v) and v % 8 == 4:
            excl.add(tag)
            just.add(J.YUAN_HAN_SQUARES_BMOD8)

    if (min(a, b), max(a, b)) in SUN_TANG_PAIRS:
        excl.add(Exclusion.NO_EXCEPTIONAL)
        just.add(J.SUN_TANG_PAIR)
    if (is_square(a) and b == 4) or (is_square(b) and a == 4):
        excl.add(Exclusion.NO_EXCEPTIONAL)
        just.add(J.YUAN_HAN_SQUARE_B4)
    if min(a, b) > 2:
        if as_prime_power(a) and as_prime_power(b):
            excl.add(Exclusion.NO_EXCEPTIONAL)
            just.add(J.COROLLARY13)
        elif {Exclusion.NO_XZY, Exclusion.NO_YZX} <= excl:
            excl.add(Exclusion.NO_EXCEPTIONAL)
            just.add(J.SUN_TANG_ORDERING)
    elif Exclusion.NO_EXCEPTIONAL not in excl:
        notes.append("min(a, b) <= 2: the ordering dichotomy is unavailable")
    return Verdict(inst, frozenset(excl), frozenset(just), tuple(notes))


# ---------------------------------------------------------------------------
# Census


class CoverageClass(enum.Enum):
    SUN_TANG = "SunTang"
    YUAN_HAN = "YuanHan"
    LE_SOYDAN = "LeSoydan"
    COROLLARY13 = "Corollary13"


CLASS_TAG = {
    CoverageClass.SUN_TANG: Justification.SUN_TANG_PAIR,
    CoverageClass.YUAN_HAN: Justification.YUAN_HAN_SQUARE_B4,
    CoverageClass.LE_SOYDAN: Justification.LE_SOYDAN_BAKER,
    CoverageClass.COROLLARY13: Justification.COROLLARY13,
}

CENSUS_CONVENTION = "unordered"
CENSUS_K = 2  # every result used is uniform in k > 1


@dataclass(frozen=True)
class CensusReport:
    N: int
    convention: str
    classes: dict[CoverageClass, tuple[tuple[int, int], ...]]
    total_pairs: int

    @property
    def counts(self) -> dict[CoverageClass, int]:
        return {c: len(v) for c, v in self.classes.items()}

    @property
    def covered(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(set().union(*self.classes.values())))

    @property
    def F(self) -> int:
        return len(self.covered)


def in_class(v: Verdict, cls: CoverageClass) -> bool:
    return v.overall is Overall.PROVEN and CLASS_TAG[cls] in v.justifications


def census(N: int, *, amin: int = 2, amax: int | None = None) -> CensusReport:
    """Unordered coprime pairs 2 <= a < b <= N proven for every k > 1, by class.

    ``amin``/``amax`` restrict the smaller element so the pair list can be sharded.
    """
    if N < 4:
        raise DomainError(f"census needs N >= 4, got {N}")
    classes: dict[CoverageClass, list[tuple[int, int]]] = {c: [] for c in CoverageClass}
    total = 0
    for a in range(max(amin, 2), min(N, amax or N) + 1):
        for b in range(a + 1, N + 1):
            if math.gcd(a, b) != 1:
                continue
            total += 1
            v = guard(EquationInstance(a, b, CENSUS_K))
            for c in CoverageClass:
                if in_class(v, c):
                    classes[c].append((a, b))
    return CensusReport(N, CENSUS_CONVENTION, {c: tuple(v) for c, v in classes.items()}, total)
