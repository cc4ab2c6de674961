"""End-to-end replays of the signature arguments as checkable reports.

Every number in a ledger is recomputed from ``defects``/``gsig``/``plumbing``;
the only inputs are the manifold invariants and the case-selection facts
(which components may occur) that come from geometry outside this package.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .defects import (
    GroupType,
    defect_point,
    defect_point_closed,
    defect_surface,
    fmt_rational,
    group_defect,
    prime_order,
    primes_upto,
)
from .errors import ConsistencyError, DomainError
from .gsig import (
    FeasibilityReport,
    FixedPointData,
    GroupCensus,
    ManifoldInvariants,
    euler_from,
    feasibility_solver,
    gsf_details,
    gsig_residual,
)
from .localrep import LocalRep, SurfaceFixComponent
from .plumbing import fixed_chain_weights

REPORT_SCHEMA = "zpsym.scenario/1"
SCAN_SCHEMA = "zpsym.scan/1"
SCAN_MAX_P = 1000

K3_SIGNATURE = -16


class Verdict(str, enum.Enum):
    CONSISTENT = "consistent"
    CONTRADICTION = "contradiction"


@dataclass
class ScenarioReport:
    scenario_id: str
    inputs: dict[str, Any]
    ledger: list[tuple[str, Fraction]]
    lhs: Fraction
    rhs: Fraction
    relation: str  # "=" or ">="
    expected: Verdict
    narrative: str = ""
    side_conditions: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def relation_holds(self) -> bool:
        return self.lhs == self.rhs if self.relation == "=" else self.lhs >= self.rhs

    @property
    def holds(self) -> bool:
        return self.relation_holds and all(ok for _, ok in self.side_conditions)

    @property
    def verdict(self) -> Verdict:
        return Verdict.CONSISTENT if self.holds else Verdict.CONTRADICTION

    @property
    def reproduced(self) -> bool:
        return self.verdict is self.expected

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "scenario": self.scenario_id,
            "inputs": self.inputs,
            "ledger": [[label, fmt_rational(v)] for label, v in self.ledger],
            "lhs": fmt_rational(self.lhs),
            "rhs": fmt_rational(self.rhs),
            "relation": self.relation,
            "side_conditions": [[label, ok] for label, ok in self.side_conditions],
            "verdict": self.verdict.value,
            "expected": self.expected.value,
            "reproduced": self.reproduced,
            "narrative": self.narrative,
        }

    def to_text(self) -> str:
        width = max((len(label) for label, _ in self.ledger), default=0)
        lines = [f"scenario {self.scenario_id}"]
        lines += [f"  {k} = {v}" for k, v in self.inputs.items()]
        if self.narrative:
            lines.append(f"  {self.narrative}")
        lines += [f"  {label:<{width}}  {fmt_rational(v)}" for label, v in self.ledger]
        lines += [f"  check: {label}: {'ok' if ok else 'FAILS'}" for label, ok in self.side_conditions]
        lhs, rhs = fmt_rational(self.lhs), fmt_rational(self.rhs)
        if self.relation == "=":
            sym = "==" if self.relation_holds else "!="
        else:
            sym = ">=" if self.relation_holds else "<"
        lines.append(f"LHS {lhs} {sym} RHS {rhs}: {self.verdict.value.upper()}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# trivial canonical class
# ---------------------------------------------------------------------------

def theorem_a(p: int, sign: int = K3_SIGNATURE) -> ScenarioReport:
    """All fixed points are SL_2-type; compare their defect with what the equation demands."""
    p = prime_order(p)
    if sign == 0 or sign % 2:
        raise DomainError(f"signature {sign} must be nonzero and even")
    chi = euler_from(0, sign)
    if chi <= 0:
        raise DomainError(f"Euler characteristic {chi} must be positive")
    def_m = defect_point(p, -1)
    required = Fraction((p - 1) * sign, chi)
    data = FixedPointData(p, (LocalRep(p, 1, -1),) * chi)
    residual = gsig_residual(p, sign, sign, data)
    return ScenarioReport(
        scenario_id="theorem-a",
        inputs={"p": p, "sign": sign, "chi": chi},
        ledger=[
            ("|M^G| = chi", Fraction(chi)),
            ("def_m = I(p,-1)", def_m),
            ("(p-1) sign / |M^G|", required),
            ("G-signature residual", residual),
        ],
        lhs=def_m,
        rhs=required,
        relation="=",
        expected=Verdict.CONTRADICTION,
        narrative=f"def_m = (1/3)(p-1)(p-2) must equal (2/3)(1-p) = {fmt_rational(required)}",
    )


# ---------------------------------------------------------------------------
# topological realization (GSF)
# ---------------------------------------------------------------------------

EXAMPLE_39_DEFAULTS = {
    5: GroupCensus.of(d3=8),
    7: GroupCensus.of(d4=6),
}


def example_39(p: int = 5, census: GroupCensus | None = None) -> ScenarioReport:
    """Orbit-block form of the GSF condition for data made of exotic groups on a homotopy K3."""
    p = prime_order(p)
    if p not in EXAMPLE_39_DEFAULTS:
        raise DomainError(f"example is posed for p = 5 or 7, got {p}")
    census = census if census is not None else EXAMPLE_39_DEFAULTS[p]
    sign = K3_SIGNATURE
    chi = euler_from(0, sign)
    gsf = gsf_details(p, census, sign)
    data = census.expand(p)
    residual = gsig_residual(p, sign, sign, data)
    ledger: list[tuple[str, Fraction]] = []
    for t in GroupType:
        if census[t]:
            ledger.append((f"def_({t.value})", group_defect(t, p)))
            ledger.append((f"delta_{t.value}", Fraction(census[t])))
    ledger += [
        ("fixed points", Fraction(census.points)),
        ("chi", Fraction(chi)),
        ("total defect", census.total_defect(p)),
        ("(p-1) sign", Fraction((p - 1) * sign)),
        ("G-signature residual", residual),
    ]
    realized = census == EXAMPLE_39_DEFAULTS[p] or (p == 7 and census == GroupCensus.of(d2=12))
    if gsf.per_element is None:
        lhs, rhs = census.total_defect(p), Fraction((p - 1) * sign)
        narrative = "census is not a union of full k-orbits; summed form only"
    else:
        for t, b in gsf.blocks.items():
            ledger.append((f"orbit blocks of type {t.value}", Fraction(b)))
        lhs = sum((b * group_defect(t, p) for t, b in gsf.blocks.items()), Fraction(0))
        rhs = Fraction(sign)
        narrative = "sum over orbit blocks of their defect = sign(g,M) for every g"
    return ScenarioReport(
        scenario_id=f"example-3.9-p{p}",
        inputs={"p": p, "sign": sign, "census": str(census)},
        ledger=ledger,
        lhs=lhs,
        rhs=rhs,
        relation="=",
        expected=Verdict.CONSISTENT if realized else Verdict.CONTRADICTION,
        narrative=narrative,
        side_conditions=[
            ("census splits into full k-orbits", gsf.per_element is not None),
            ("fixed points = chi", census.points == chi),
            ("summed G-signature equation", gsf.summed),
            ("G-signature residual vanishes", residual == 0),
        ],
    )


# ---------------------------------------------------------------------------
# non-pseudofree actions on a homotopy K3 with small K.[omega]
# ---------------------------------------------------------------------------

EXAMPLE_310_CASES = ("p2", "p3", "p5-atilde4", "dtilde4")

# Case-selection facts supplied by the geometry (K.[omega] < 7).
MAX_FIXED_SPHERES_P2 = 3
MAX_FIXED_SPHERES_P3 = 2


def _case_p2() -> ScenarioReport:
    p, sign = 2, K3_SIGNATURE
    def_m = defect_point(p, 1)
    def_y = defect_surface(p, -2)
    bound = MAX_FIXED_SPHERES_P2 * def_y
    return ScenarioReport(
        scenario_id="example-3.10-p2",
        inputs={"p": p, "sign": sign},
        ledger=[
            ("def_m = I(2,1)", def_m),
            ("def_Y = (p^2-1)/3 (-2)", def_y),
            ("fixed (-2)-spheres, at most", Fraction(MAX_FIXED_SPHERES_P2)),
            ("lowest attainable defect sum", bound),
            ("-16(p-1)", Fraction(sign * (p - 1))),
        ],
        lhs=Fraction(sign * (p - 1)),
        rhs=bound,
        relation=">=",
        expected=Verdict.CONTRADICTION,
        narrative="-16(p-1) = sum def_Y >= 3 def_Y",
    )


def _case_p3() -> ScenarioReport:
    p, sign = 3, K3_SIGNATURE
    chi = euler_from(0, sign)
    low_m = min(defect_point(p, -1), defect_point(p, 1))
    def_y = defect_surface(p, -2)
    bound = chi * low_m + MAX_FIXED_SPHERES_P3 * def_y
    return ScenarioReport(
        scenario_id="example-3.10-p3",
        inputs={"p": p, "sign": sign, "chi": chi},
        ledger=[
            ("I(3,-1)", defect_point(p, -1)),
            ("I(3,1)", defect_point(p, 1)),
            ("def_m lower bound", low_m),
            ("def_Y = (p^2-1)/3 (-2)", def_y),
            ("isolated points, at most", Fraction(chi)),
            ("fixed (-2)-spheres, at most", Fraction(MAX_FIXED_SPHERES_P3)),
            ("24 (-2/3) + 2 (-16/3)", bound),
            ("-16(p-1)", Fraction(sign * (p - 1))),
        ],
        lhs=Fraction(sign * (p - 1)),
        rhs=bound,
        relation=">=",
        expected=Verdict.CONTRADICTION,
        narrative="-32 = -16(p-1) >= d_m (-2/3) + d_Y (-16/3) >= 24 (-2/3) + 2 (-16/3)",
    )


def _case_p5_atilde4() -> ScenarioReport:
    p, sign = 5, K3_SIGNATURE
    chi = euler_from(0, sign)
    # isolated points on the four non-fixed spheres of the cycle
    chain = [LocalRep(p, a, b * pow(a, -1, p)) for a, b in fixed_chain_weights(p - 2, p)]
    sphere = SurfaceFixComponent(0, -2)
    n_sl2 = chi - (len(chain) + sphere.euler)
    data = FixedPointData(p, tuple(chain) + (LocalRep(p, 1, -1),) * n_sl2, (sphere,))
    sl2 = defect_point(p, -1)
    def_y = defect_surface(p, -2)
    rhs = n_sl2 * sl2 + sum((r.defect() for r in chain), Fraction(0)) + def_y
    residual = gsig_residual(p, sign, sign, data)
    if residual != sign * (p - 1) - rhs:
        raise ConsistencyError("ledger and residual disagree")
    ledger = [("SL_2 points = chi - (3 + 2*1)", Fraction(n_sl2)), ("I(5,-1)", sl2)]
    ledger += [(f"I(5,{r.q})", r.defect()) for r in sorted(chain, key=lambda r: r.q)]
    ledger += [
        ("def_Y = (5^2-1)/3 (-2)", def_y),
        ("right-hand side", rhs),
        ("-16(5-1)", Fraction(sign * (p - 1))),
        ("G-signature residual", residual),
    ]
    return ScenarioReport(
        scenario_id="example-3.10-p5-atilde4",
        inputs={"p": p, "sign": sign, "chi": chi},
        ledger=ledger,
        lhs=Fraction(sign * (p - 1)),
        rhs=rhs,
        relation="=",
        expected=Verdict.CONTRADICTION,
        narrative="-16(5-1) = 19 I(5,-1) + I(5,1) + I(5,2) + I(5,3) + (5^2-1)/3 (-2)",
    )


def _case_dtilde4(p: int) -> ScenarioReport:
    from .plumbing import classify, dtilde

    p = prime_order(p)
    sign = K3_SIGNATURE
    i_m2 = defect_point_closed("-2", p)
    ledger = [("I(p,-2) = (1/6)(p-1)(p-5)", i_m2)]
    if p > 2:
        (a, b), = fixed_chain_weights(1, p)
        leaf = LocalRep(p, a, b * pow(a, -1, p))
        exact = leaf.defect()
        if leaf.q != (-2) % p or exact != i_m2:
            raise ConsistencyError(f"D-tilde_4 leaf point at p={p}: q={leaf.q}, I={exact}")
        ledger.append(("I(p,-2) exact", exact))
    center = max(classify(dtilde(4)).multiplicities)
    def_y = defect_surface(p, -2)
    rhs = 4 * i_m2 + def_y
    ledger += [
        ("center multiplicity", Fraction(center)),
        ("def_Y = -(2/3)(p^2-1)", def_y),
        ("4 I(p,-2) + def_Y", rhs),
        ("-16(p-1)", Fraction(sign * (p - 1))),
    ]
    return ScenarioReport(
        scenario_id=f"example-3.10-dtilde4-p{p}",
        inputs={"p": p, "sign": sign},
        ledger=ledger,
        lhs=Fraction(sign * (p - 1)),
        rhs=rhs,
        relation=">=",
        expected=Verdict.CONTRADICTION,
        narrative="-16(p-1) >= 4 I(p,-2) - (2/3)(p^2-1); remaining SL_2 points only add",
    )


def example_310(case: str, p: int | None = None) -> ScenarioReport:
    if case == "p2":
        return _case_p2()
    if case == "p3":
        return _case_p3()
    if case == "p5-atilde4":
        return _case_p5_atilde4()
    if case == "dtilde4":
        if p is None:
            raise DomainError("case dtilde4 needs a prime p")
        return _case_dtilde4(p)
    raise DomainError(f"unknown case {case!r}; expected one of {', '.join(EXAMPLE_310_CASES)}")


# ---------------------------------------------------------------------------
# prime scans
# ---------------------------------------------------------------------------

@dataclass
class ScanRow:
    p: int
    report: FeasibilityReport

    @property
    def mod4(self) -> int:
        return self.p % 4

    @property
    def mod6(self) -> int:
        return self.p % 6

    @property
    def predicted_forced(self) -> bool:
        """Whether the residue classes alone force triviality."""
        return self.report.sign != 0 and self.mod4 != 1 and self.mod6 != 1

    def to_json(self) -> dict:
        doc = self.report.to_json()
        doc.update(mod4=self.mod4, mod6=self.mod6, predicted_forced=self.predicted_forced)
        return doc


def scan_primes(p_max: int, sign: int = K3_SIGNATURE) -> list[ScanRow]:
    if p_max > SCAN_MAX_P:
        raise DomainError(f"p_max={p_max} exceeds {SCAN_MAX_P}")
    inv = ManifoldInvariants(sign)
    if inv.euler < 0:
        raise DomainError(f"signature {sign} gives negative Euler characteristic")
    return [ScanRow(p, feasibility_solver(p, inv)) for p in primes_upto(p_max)]


def scan_to_json(rows: list[ScanRow], p_max: int, sign: int) -> dict:
    return {"schema": SCAN_SCHEMA, "p_max": p_max, "sign": sign,
            "rows": [r.to_json() for r in rows]}


def scan_to_text(rows: list[ScanRow]) -> str:
    head = f"{'p':>5} {'p%4':>4} {'p%6':>4} {'forced':>7} {'predicted':>9} {'#sol':>5}  first solution"
    lines = [head]
    for r in rows:
        first = str(r.report.solutions[0]) if r.report.solutions else "-"
        lines.append(
            f"{r.p:>5} {r.mod4:>4} {r.mod6:>4} {str(r.report.forced_trivial):>7} "
            f"{str(r.predicted_forced):>9} {len(r.report.solutions):>5}  {first}"
        )
    return "\n".join(lines)
