"""The full reproduction run: every scenario plus a quick invariant suite."""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .defects import (
    GroupType,
    defect_point,
    defect_point_closed,
    defect_point_dedekind,
    defect_point_oracle,
    floor_square_sum,
    floor_square_sum_closed,
    group_defect,
    group_defect_closed,
    group_occurs,
    primes_upto,
    special_q,
)
from .gsig import GroupCensus
from .localrep import Component, component_fixed_data, component_occurs, rotation_congruence, virtual_dim
from .plumbing import (
    AffineKind,
    atilde,
    atilde_rotation_sequences,
    chain_transfer,
    chain_transfer_stepwise,
    check_multiplicities,
    classify,
    dtilde,
    dtilde_congruence,
    etilde,
)
from .scenarios import (
    EXAMPLE_310_CASES,
    K3_SIGNATURE,
    example_39,
    example_310,
    scan_primes,
    theorem_a,
)

REPRODUCE_SCHEMA = "zpsym.reproduce/1"
THEOREM_A_PRIMES = primes_upto(997)
DTILDE_PRIMES = primes_upto(97)
FORCED_EXAMPLES = (11, 23, 47, 59, 71, 83)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _timed(name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed reproduction, not an abort
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, ok, detail, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

def _theorem_a() -> tuple[bool, str]:
    bad = [p for p in THEOREM_A_PRIMES if not theorem_a(p, K3_SIGNATURE).reproduced]
    return not bad, f"{len(THEOREM_A_PRIMES)} primes <= 997" + (f"; failed {bad}" if bad else "")


def _example_39() -> tuple[bool, str]:
    runs = [
        example_39(5),
        example_39(7),
        example_39(7, GroupCensus.of(d2=12)),
    ]
    broken = example_39(5, GroupCensus.of(d3=7))
    ok = all(r.reproduced for r in runs) and broken.verdict.value == "contradiction"
    return ok, "p=5 (0,0,8,0); p=7 (0,0,0,6) and (0,12,0,0); control (0,0,7,0) rejected"


def _example_310_case(case: str) -> Callable[[], tuple[bool, str]]:
    def run() -> tuple[bool, str]:
        r = example_310(case)
        return r.reproduced, f"lhs {r.lhs} vs rhs {r.rhs}: {r.verdict.value}"
    return run


def _example_310_dtilde() -> tuple[bool, str]:
    bad = [p for p in DTILDE_PRIMES if not example_310("dtilde4", p).reproduced]
    return not bad, f"{len(DTILDE_PRIMES)} primes <= 97" + (f"; failed {bad}" if bad else "")


def _scan() -> tuple[bool, str]:
    rows = scan_primes(200, K3_SIGNATURE)
    by_p = {r.p: r for r in rows}
    mismatched = [r.p for r in rows if r.predicted_forced and not r.report.forced_trivial]
    examples_ok = all(by_p[p].report.forced_trivial for p in FORCED_EXAMPLES)
    p5 = by_p[5].report
    p5_ok = not p5.forced_trivial and GroupCensus.of(d3=8) in p5.solutions
    delta1 = [r.p for r in rows for c in r.report.solutions if c[GroupType.T1]]
    ok = not mismatched and examples_ok and p5_ok and not delta1
    forced = sum(r.report.forced_trivial for r in rows)
    return ok, f"{len(rows)} primes, {forced} forced trivial, p=5 admits (0,0,8,0), delta_1 = 0 throughout"


# ---------------------------------------------------------------------------
# invariant quick-suite
# ---------------------------------------------------------------------------

def _three_paths() -> tuple[bool, str]:
    n = 0
    for p in primes_upto(47):
        for q in range(1, p):
            exact = defect_point(p, q)
            if exact != defect_point_dedekind(p, q):
                return False, f"Dedekind path differs at ({p},{q})"
            if abs(float(exact) - defect_point_oracle(p, q)) > 1e-6:
                return False, f"cotangent oracle differs at ({p},{q})"
            n += 1
    return True, f"{n} pairs (p <= 47)"


def _sl2_closed() -> tuple[bool, str]:
    bad = [p for p in THEOREM_A_PRIMES if defect_point(p, -1) != Fraction((p - 1) * (p - 2), 3)]
    return not bad, "I(p,-1) = (p-1)(p-2)/3 for p <= 997"


def _group_table() -> tuple[bool, str]:
    n = 0
    for p in primes_upto(199):
        for t in GroupType:
            if group_occurs(t, p):
                group_defect(t, p)  # raises on disagreement
                n += 1
    return group_defect_closed(3, 5) == -8, f"{n} (type, p) pairs agree with their closed forms"


def _floor_square_forms() -> tuple[bool, str]:
    n = 0
    for p in primes_upto(199):
        for label, m in (("-4", 4), ("-6", 6), ("(p+3)/2", 6), ("-3", 3)):
            if p <= 3 or (p % m) not in (1, m - 1):
                continue
            q = special_q(label, p)
            if floor_square_sum(q, p) != floor_square_sum_closed(label, p):
                return False, f"floor-square sum for q={label} at p={p}"
            if defect_point(p, q) != defect_point_closed(label, p):
                return False, f"I(p,{label}) at p={p}"
            n += 1
    return True, f"{n} closed-form instances"


def _components() -> tuple[bool, str]:
    n = 0
    for p in primes_upto(199):
        for comp in Component:
            if not component_occurs(comp, p):
                continue
            for data in component_fixed_data(comp, p):
                for sphere in data.spheres:
                    if not rotation_congruence(sphere.pairs, p):
                        return False, f"{comp.value} at p={p}: {sphere.label}"
                    if virtual_dim(sphere.pairs, p).denominator != 1:
                        return False, f"{comp.value} at p={p}: fractional dimension"
                    n += 1
    return True, f"{n} invariant spheres"


def _plumbing() -> tuple[bool, str]:
    families = [(atilde(n), AffineKind.A) for n in range(1, 10)]
    families += [(dtilde(n), AffineKind.D) for n in range(4, 10)]
    families += [(etilde(n), AffineKind.E) for n in (6, 7, 8)]
    for graph, kind in families:
        cls = classify(graph)
        if cls.kind is not kind or not check_multiplicities(graph, cls.multiplicities):
            return False, f"misclassified {graph}"
    if any(chain_transfer(i) != chain_transfer_stepwise(i) for i in range(1, 201)):
        return False, "transfer matrix recursion"
    for p in DTILDE_PRIMES:
        for n in range(4, 121):
            if dtilde_congruence(n, p) != ((n - 4) % p == 0):
                return False, f"D-tilde congruence at n={n}, p={p}"
    for p in (5, 7, 11, 13):
        for k in range(1, 4 * p + 1):
            if atilde_rotation_sequences(p, k) != [(p - 1,) * k]:
                return False, f"rotation sequences at p={p}, k={k}"
    return True, "affine families, transfer recursion, D-tilde congruence, cycle sequences"


SCENARIO_CHECKS: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("theorem-a", _theorem_a),
    ("example-3.9", _example_39),
    *[(f"example-3.10 {c}", _example_310_case(c)) for c in EXAMPLE_310_CASES if c != "dtilde4"],
    ("example-3.10 dtilde4", _example_310_dtilde),
    ("scan 200", _scan),
]

QUICK_SUITE: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("three-path defects", _three_paths),
    ("SL2 defect closed form", _sl2_closed),
    ("group defect table", _group_table),
    ("floor-square closed forms", _floor_square_forms),
    ("component rotation data", _components),
    ("plumbing", _plumbing),
]


def reproduce_all() -> list[CheckResult]:
    return [_timed(name, fn) for name, fn in SCENARIO_CHECKS + QUICK_SUITE]


def summary_text(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{r.name:<{width}}  {'PASS' if r.ok else 'FAIL'}  {r.detail}" for r in results]
    passed = sum(r.ok for r in results)
    lines.append(f"{passed}/{len(results)} reproduced")
    return "\n".join(lines)


def summary_json(results: list[CheckResult]) -> dict:
    # timings are left out so the output is byte-stable
    return {
        "schema": REPRODUCE_SCHEMA,
        "checks": [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results],
        "all_ok": all(r.ok for r in results),
    }
