"""Batch execution: run plans, shard boxes across worker processes, merge
deterministically and wrap the result in a report envelope."""
from __future__ import annotations

import csv
import enum
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from . import __version__
from .bigarith import as_prime_power, is_prime
from .classify import (
    SIGN_NOTE,
    Conclusion8,
    Lemma8Outcome,
    OddPrimeRepunit,
    Sporadic,
    TwoPowerFamily,
    classify_2p,
    classify_pq_both,
    enum_2p,
    enum_pq,
)
from .errors import AmbiguousClassification, CeilingExceeded, LemmaFalsification
from .lemmas import (
    NL_PRINTED,
    catalan_enumerate,
    lemma3_check,
    lemma4_check,
    lemma5_check,
    lemma6_check,
    nl_discrepancy,
    nl_enumerate,
)
from .search import (
    EquationInstance,
    ExponentTriple,
    OrderingClass,
    Overall,
    census,
    guard,
    ordering_of,
    pruned_search_xzy,
    solve_instance,
)

TOOL = "ternexp"

SUBCOMMANDS = ("search", "pruned-search", "classify-2p", "classify-pq", "lemma", "census", "guard")
LEMMA_NAMES = ("nl", "catalan", "lemma3", "lemma4", "lemma5")

EXIT_CLEAN = 0
EXIT_USAGE = 1
EXIT_FALSIFICATION = 2
EXIT_CEILING = 3

# Plan fields that affect how a run executes but never what it computes.
EXECUTION_FIELDS = ("workers", "format", "output")


@dataclass(frozen=True)
class RunPlan:
    subcommand: str
    params: dict[str, Any]
    workers: int = 1
    format: str = "json"
    output: str | None = None

    def echo(self) -> dict[str, Any]:
        return {
            "subcommand": self.subcommand,
            "params": dict(sorted(self.params.items())),
            "workers": self.workers,
            "format": self.format,
            "output": self.output,
        }


@dataclass(frozen=True)
class Finding:
    kind: str  # falsification | discrepancy | ceiling | double-match | note
    source: str
    message: str
    evidence: Any = None

    def as_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "source": self.source, "message": self.message, "evidence": self.evidence}


@dataclass
class ReportEnvelope:
    plan: RunPlan
    payload: dict[str, Any]
    findings: list[Finding] = field(default_factory=list)
    duration_seconds: float = 0.0
    version: str = __version__

    @property
    def exit_status(self) -> int:
        kinds = {f.kind for f in self.findings}
        if "falsification" in kinds:
            return EXIT_FALSIFICATION
        if "ceiling" in kinds:
            return EXIT_CEILING
        return EXIT_CLEAN

    def as_dict(self) -> dict[str, Any]:
        return {
            "tool": TOOL,
            "version": self.version,
            "plan": self.plan.echo(),
            "payload": self.payload,
            "findings": [f.as_dict() for f in self.findings],
            "duration_seconds": self.duration_seconds,
        }

    def to_json(self) -> str:
        return json.dumps(jsonable(self.as_dict()), indent=2, sort_keys=True) + "\n"

    def canonical(self) -> str:
        """The report with timing and execution-only plan fields removed."""
        d = jsonable(self.as_dict())
        del d["duration_seconds"]
        for key in EXECUTION_FIELDS:
            del d["plan"][key]
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        rows = jsonable(self.payload.get("rows", []))
        buf = io.StringIO()
        columns: list[str] = []
        for row in rows:
            columns.extend(c for c in row if c not in columns)
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(v) for k, v in row.items()})
        return buf.getvalue()

    def render(self) -> str:
        return self.to_csv() if self.plan.format == "csv" else self.to_json()


def _csv_cell(v: Any) -> Any:
    # Lists flatten to ';'-separated items; a nested list such as a pair
    # becomes space-separated, so [[3, 4], [3, 5]] is "3 4;3 5".
    if isinstance(v, (list, tuple)):
        return ";".join(" ".join(map(str, x)) if isinstance(x, (list, tuple)) else str(x) for x in v)
    return v


def jsonable(obj: Any) -> Any:
    """Integers become decimal strings; enums become their values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(jsonable(k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in obj]
        return sorted(items) if isinstance(obj, (set, frozenset)) else items
    if hasattr(obj, "__dataclass_fields__"):
        return {k: jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__}
    return str(obj)


# ---------------------------------------------------------------------------
# Sharding


def split_range(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Split [lo, hi] into at most ``parts`` contiguous non-empty ranges."""
    if hi < lo:
        return []
    n = hi - lo + 1
    parts = max(1, min(parts, n))
    step = math.ceil(n / parts)
    return [(s, min(s + step - 1, hi)) for s in range(lo, hi + 1, step)]


def run_sharded(fn: Callable[[Any], Any], units: Sequence[Any], workers: int) -> list[Any]:
    """Apply ``fn`` to every unit; results come back in unit order."""
    if workers <= 1 or len(units) <= 1:
        return [fn(u) for u in units]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, units))


# ---------------------------------------------------------------------------
# Instance grids


def prime_power_pairs(nmax: int) -> list[tuple[int, int]]:
    """Ordered coprime pairs of prime powers with 2 < a, b <= nmax."""
    pps = [n for n in range(3, nmax + 1) if as_prime_power(n)]
    return [(a, b) for a in pps for b in pps if a != b and math.gcd(a, b) == 1]


def coprime_pairs(nmax: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(2, nmax + 1) for b in range(2, nmax + 1) if math.gcd(a, b) == 1]


def instances_for(params: dict[str, Any]) -> list[EquationInstance]:
    if params.get("grid_max") is None:
        return [EquationInstance(params["a"], params["b"], params["k"])]
    pairs = (prime_power_pairs if params["family"] == "prime-powers" else coprime_pairs)(params["grid_max"])
    return [EquationInstance(a, b, k) for a, b in pairs for k in range(params["kmin"], params["kmax"] + 1)]


# ---------------------------------------------------------------------------
# Worker functions (module level so they pickle)


def _search_unit(unit: tuple[tuple[int, int, int], int, int]) -> list[tuple[int, ...]]:
    (a, b, k), zlo, zhi = unit
    inst = EquationInstance(a, b, k)
    return [(a, b, k, t.x, t.y, t.z) for t in solve_instance(inst, zhi, zmin=zlo)]


def _pruned_unit(unit: tuple[tuple[int, int, int], int]) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    (a, b, k), zmax = unit
    inst = EquationInstance(a, b, k)
    pruned = [(a, b, k, t.x, t.y, t.z) for t in pruned_search_xzy(inst, zmax)]
    naive = [
        (a, b, k, t.x, t.y, t.z)
        for t in solve_instance(inst, zmax)
        if ordering_of(t) is OrderingClass.XZY
    ]
    return pruned, naive


def _enum_2p_unit(unit: tuple[int, int, int]) -> Any:
    lo, hi, lmax = unit
    return enum_2p(hi, lmax, Xmin=lo)


def _enum_pq_unit(unit: tuple[int, int, int]) -> Any:
    lo, hi, lmax = unit
    return enum_pq(hi, lmax, Xmin=lo)


def _nl_unit(unit: tuple[int, int, int, int]) -> Any:
    lo, hi, mmax, nmax = unit
    return nl_enumerate(hi, mmax, nmax, Xmin=lo)


def _catalan_shard(unit: tuple[int, int, int, int]) -> Any:
    lo, hi, vmax, emax = unit
    return catalan_enumerate(vmax, emax, Xmin=lo, Xmax=hi)


def _lemma_unit(unit: tuple[str, list[tuple[int, ...]]]) -> tuple[int, list[dict[str, Any]]]:
    name, args_list = unit
    check = {"lemma3": lemma3_check, "lemma4": lemma4_check, "lemma5": lemma5_check}[name]
    bad = []
    for args in args_list:
        try:
            check(*args)
        except LemmaFalsification as exc:
            bad.append({"args": list(args), "evidence": exc.evidence})
    return len(args_list), bad


def _census_unit(unit: tuple[int, int, int]) -> Any:
    N, lo, hi = unit
    rep = census(N, amin=lo, amax=hi)
    return rep.classes, rep.total_pairs


# ---------------------------------------------------------------------------
# Dispatch


def _run_search(plan: RunPlan, findings: list[Finding]) -> dict[str, Any]:
    p = plan.params
    insts = instances_for(p)
    units = [
        ((i.a, i.b, i.k), lo, hi)
        for i in insts
        for lo, hi in split_range(1, p["zmax"], plan.workers)
    ]
    merged = sorted({t for part in run_sharded(_search_unit, units, plan.workers) for t in part})
    rows = []
    for a, b, k, x, y, z in merged:
        inst = EquationInstance(a, b, k)
        t = ExponentTriple(x, y, z)
        order = ordering_of(t)
        rows.append({"a": a, "b": b, "k": k, "x": x, "y": y, "z": z,
                     "exceptional": t.exceptional, "ordering": order})
        if not inst.holds(x, y, z):
            findings.append(Finding("falsification", "search", "returned triple fails re-evaluation", rows[-1]))
        if t.exceptional and k > 1 and min(a, b) > 2 and order is OrderingClass.OTHER:
            findings.append(Finding(
                "falsification", "sun-tang-ordering",
                "exceptional solution with k > 1, min(a,b) > 2 outside both strict orderings", rows[-1]))
        if t.exceptional and guard(inst).overall is Overall.PROVEN:
            findings.append(Finding(
                "falsification", "guard", "exceptional solution for an instance the guard marks proven", rows[-1]))
    return {"instances": len(insts), "rows": rows}


def _run_pruned(plan: RunPlan, findings: list[Finding]) -> dict[str, Any]:
    p = plan.params
    insts = [i for i in instances_for(p) if i.k > 1 and as_prime_power(i.b)]
    units = [((i.a, i.b, i.k), p["zmax"]) for i in insts]
    results = run_sharded(_pruned_unit, units, plan.workers)
    pruned = sorted({t for pr, _ in results for t in pr})
    naive = sorted({t for _, nv in results for t in nv})
    if pruned != naive:
        findings.append(Finding(
            "falsification", "pruned-search", "pruned result differs from filtered full search",
            {"pruned": pruned, "naive": naive}))
    rows = [dict(zip("abkxyz", t)) for t in pruned]
    return {"instances": len(insts), "agrees_with_full_search": pruned == naive, "rows": rows}


def _outcome_fields(o: Any) -> dict[str, Any]:
    if isinstance(o, Sporadic):
        return {"outcome": "sporadic", "index": o.index}
    if isinstance(o, TwoPowerFamily):
        return {"outcome": "two-power-family", "zeta": o.zeta}
    if isinstance(o, OddPrimeRepunit):
        return {"outcome": "odd-prime-repunit"}
    return {"outcome": None}


def _x_units(lo: int, hi: int, workers: int, *extra: int) -> list[tuple[int, ...]]:
    # Several shards per worker keeps load balanced as values grow with X.
    return [(a, b, *extra) for a, b in split_range(lo, hi, workers * 4 if workers > 1 else 1)]


def _merge_enumerations(parts: Iterable[Any], source: str, findings: list[Finding]) -> list[Any]:
    sols = []
    for part in parts:
        sols.extend(part.solutions)
        for X, ell, reason in part.skipped:
            findings.append(Finding("ceiling", source, reason, {"X": X, "ell": ell}))
    return sorted(set(sols))


def _run_classify_2p(plan: RunPlan, findings: list[Finding]) -> dict[str, Any]:
    p = plan.params
    parts = run_sharded(_enum_2p_unit, _x_units(2, p["xmax"], plan.workers, p["lmax"]), plan.workers)
    sols = _merge_enumerations(parts, "enum-2p", findings)
    rows = []
    family_seen = False
    for s in sols:
        row = {"p": s.p, "X": s.X, "ell": s.ell, "m": s.m, "n": s.n}
        try:
            o = classify_2p(s)
        except LemmaFalsification as exc:
            findings.append(Finding("falsification", "classify-2p", str(exc), exc.evidence))
            o = None
        row.update(_outcome_fields(o))
        rows.append(row)
        if isinstance(o, TwoPowerFamily):
            family_seen = True
        if isinstance(o, OddPrimeRepunit):
            try:
                lemma6_check(s.X, s.ell, s.p, s.n)
            except LemmaFalsification as exc:
                findings.append(Finding("falsification", "lemma6", str(exc), exc.evidence))
    if family_seen:
        findings.append(Finding("discrepancy", "two-power-family-sign", SIGN_NOTE))
    return {"rows": rows}


def _outcome8(o: Lemma8Outcome | None) -> dict[str, Any] | None:
    if o is None:
        return None
    return {"conclusion": o.conclusion, "zeta": o.zeta}


def _run_classify_pq(plan: RunPlan, findings: list[Finding]) -> dict[str, Any]:
    p = plan.params
    parts = run_sharded(_enum_pq_unit, _x_units(2, p["xmax"], plan.workers, p["lmax"]), plan.workers)
    sols = _merge_enumerations(parts, "enum-pq", findings)
    rows = []
    for s in sols:
        row = {"p": s.p, "q": s.q, "X": s.X, "ell": s.ell, "m": s.m, "n": s.n}
        try:
            both = classify_pq_both(s)
        except LemmaFalsification as exc:
            findings.append(Finding("falsification", "classify-pq", str(exc), exc.evidence))
            both = {}
        except AmbiguousClassification as exc:
            findings.append(Finding("double-match", "classify-pq", str(exc), exc.evidence))
            both = {}
        row["as_p_smaller"] = _outcome8(both.get(s.p))
        row["as_p_larger"] = _outcome8(both.get(s.q))
        rows.append(row)
        for o in both.values():
            if o is None:
                continue
            if o.conclusion is Conclusion8.REPUNIT_Q:
                args = (s.X, s.ell, o.q, s.labeled(o.p)[3])
            elif o.conclusion is Conclusion8.REPUNIT_P:
                args = (s.X, s.ell, o.p, s.labeled(o.p)[2])
            else:
                continue
            try:
                lemma6_check(*args)
            except LemmaFalsification as exc:
                findings.append(Finding("falsification", "lemma6", str(exc), exc.evidence))
    return {"rows": rows}


def _lemma_args(name: str, p: dict[str, Any]) -> list[tuple[int, ...]]:
    if name == "lemma3":
        return [(X, m, n) for X in range(2, p["xmax"] + 1)
                for m in range(1, p["mmax"] + 1) for n in range(1, p["nmax"] + 1)]
    if name == "lemma4":
        ells = [l for l in range(3, p["lmax"] + 1) if is_prime(l)]
        return [(X, l) for l in ells for X in range(2, p["xmax"] + 1)]
    primes = p.get("primes") or [3, 5, 7]
    return [(q, X, l) for q in primes for X in range(q + 1, p["xmax"] + 1, q)
            for l in range(1, p["lmax"] + 1)]


def _run_lemma(plan: RunPlan, findings: list[Finding]) -> dict[str, Any]:
    p = plan.params
    name = p["name"]
    w = plan.workers
    if name == "nl":
        parts = run_sharded(_nl_unit, _x_units(2, p["xmax"], w, p["mmax"], p["nmax"]), w)
        sols = sorted({s for part in parts for s in part})
        diff = nl_discrepancy(tuple(sols))
        if diff["extra"] or diff["missing"]:
            findings.append(Finding(
                "discrepancy", "nagell-ljunggren",
                "enumerated solutions differ from the printed claim",
                {"printed": list(NL_PRINTED), **diff}))
        return {"rows": [vars(s) for s in sols], "printed": [vars(s) for s in NL_PRINTED]}
    if name == "catalan":
        parts = run_sharded(_catalan_shard, _x_units(2, p["vmax"], w, p["vmax"], p["emax"]), w)
        sols = sorted({s for part in parts for s in part})
        return {"rows": [vars(s) for s in sols]}
    args = _lemma_args(name, p)
    chunks = max(1, w * 4)
    size = max(1, math.ceil(len(args) / chunks))
    units = [(name, args[i:i + size]) for i in range(0, len(args), size)]
    checked = 0
    violations = []
    for n, bad in run_sharded(_lemma_unit, units, w):
        checked += n
        violations.extend(bad)
    for v in violations:
        findings.append(Finding("falsification", name, "lemma statement failed", v))
    return {"rows": [{"name": name, "checked": checked, "violations": len(violations)}]}


def _run_census(plan: RunPlan, findings: list[Finding]) -> dict[str, Any]:
    N = plan.params["n"]
    units = [(N, lo, hi) for lo, hi in split_range(2, N, plan.workers * 4 if plan.workers > 1 else 1)]
    classes: dict[Any, set] = {}
    total = 0
    for part, count in run_sharded(_census_unit, units, plan.workers):
        total += count
        for c, pairs in part.items():
            classes.setdefault(c, set()).update(pairs)
    covered = set().union(*classes.values()) if classes else set()
    rows = [{"class": c, "count": len(v), "pairs": sorted(v)} for c, v in classes.items()]
    return {
        "N": N,
        "convention": "unordered",
        "total_pairs": total,
        "F": len(covered),
        "log_bound": N**2 / math.log(N) ** 2,
        "rows": sorted(rows, key=lambda r: r["class"].value),
    }


def _run_guard(plan: RunPlan, findings: list[Finding]) -> dict[str, Any]:
    p = plan.params
    v = guard(EquationInstance(p["a"], p["b"], p["k"]))
    return {"rows": [{
        "a": p["a"], "b": p["b"], "k": p["k"],
        "overall": v.overall,
        "proven_exclusions": sorted(e.value for e in v.proven_exclusions),
        "justifications": sorted(j.value for j in v.justifications),
        "notes": list(v.notes),
    }]}


DISPATCH = {
    "search": _run_search,
    "pruned-search": _run_pruned,
    "classify-2p": _run_classify_2p,
    "classify-pq": _run_classify_pq,
    "lemma": _run_lemma,
    "census": _run_census,
    "guard": _run_guard,
}


def execute(plan: RunPlan) -> ReportEnvelope:
    start = time.perf_counter()
    findings: list[Finding] = []
    try:
        payload = DISPATCH[plan.subcommand](plan, findings)
    except CeilingExceeded as exc:
        findings.append(Finding("ceiling", plan.subcommand, str(exc), {"value": exc.value}))
        payload = {"rows": []}
    except LemmaFalsification as exc:
        findings.append(Finding("falsification", plan.subcommand, str(exc), exc.evidence))
        payload = {"rows": []}
    return ReportEnvelope(plan, payload, findings, time.perf_counter() - start)
