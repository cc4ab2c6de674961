"""The G-signature equation for ``Z_p`` actions and the census feasibility problem.

For a homologically trivial action on a 4-manifold with ``c1^2 = 0`` every
fixed point is accounted for, ``|M^G| = chi(M)``, and the G-signature
theorem reads

    -(2/3)(p - 1) chi = sum of point defects.

Grouping the points into the standard fixed-point groups turns this into a linear
Diophantine problem over the group counts, solved here by exhaustive
enumeration of the bounded simplex ``sum size_t * delta_t = chi``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .defects import (
    GROUP_WEIGHTS,
    GroupType,
    defect_surface,
    fmt_rational,
    group_defect,
    group_occurs,
    group_slack,
    prime_order,
)
from .errors import DomainError
from .localrep import LocalRep, SurfaceFixComponent

FEASIBILITY_SCHEMA = "zpsym.feasibility/1"


def euler_from(c1_squared: int, signature: int) -> int:
    """Euler characteristic from ``2 chi + 3 sign = c1^2``."""
    num = c1_squared - 3 * signature
    if num % 2:
        raise DomainError(f"c1^2 - 3 sign = {num} is odd")
    return num // 2


@dataclass(frozen=True)
class ManifoldInvariants:
    signature: int
    c1_squared: int = 0
    b2_plus: int = 3
    homologically_trivial: bool = True

    def __post_init__(self) -> None:
        euler_from(self.c1_squared, self.signature)

    @property
    def euler(self) -> int:
        return euler_from(self.c1_squared, self.signature)


@dataclass(frozen=True)
class FixedPointData:
    p: int
    isolated: tuple[LocalRep, ...] = ()
    surfaces: tuple[SurfaceFixComponent, ...] = ()

    def __post_init__(self) -> None:
        prime_order(self.p)
        for rep in self.isolated:
            if rep.p != self.p:
                raise DomainError(f"representation mod {rep.p} in data for p={self.p}")

    @property
    def euler(self) -> int:
        """Euler characteristic of the fixed-point set."""
        return len(self.isolated) + sum(s.euler for s in self.surfaces)

    def point_defects(self) -> Fraction:
        return sum((r.defect() for r in self.isolated), Fraction(0))

    def surface_defects(self) -> Fraction:
        return sum((defect_surface(self.p, s.self_intersection) for s in self.surfaces), Fraction(0))

    def matches_euler(self, inv: ManifoldInvariants) -> bool:
        return self.euler == inv.euler


def gsig_residual(p: int, sign_M: int, sign_MG: int, data: FixedPointData) -> Fraction:
    """``p sign(M/G) - sign(M) - sum def_m - sum def_Y``; zero iff consistent."""
    p = prime_order(p)
    if data.p != p:
        raise DomainError(f"fixed-point data is for p={data.p}, not {p}")
    return p * sign_MG - sign_M - data.point_defects() - data.surface_defects()


# ---------------------------------------------------------------------------
# group censuses
# ---------------------------------------------------------------------------

# Enumeration order: lexicographic in (delta_4, delta_3, delta_2, delta_special, delta_1).
_ENUM_ORDER = (GroupType.T4, GroupType.T3, GroupType.T2, GroupType.SPECIAL)


def census_types(p: int) -> list[GroupType]:
    """Group types available for ``p``.

    For ``p = 2`` only ``SL_2`` points exist; for ``p = 3`` there are also the
    ``(k, k)`` points, grouped in threes.
    """
    return [t for t in GroupType if group_occurs(t, p)]


@dataclass(frozen=True)
class GroupCensus:
    delta: Mapping[GroupType, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for key, n in self.delta.items():
            t = GroupType.parse(key)
            if n < 0:
                raise DomainError(f"negative count for group type {t.value}")
            if n:
                clean[t] = int(n)
        object.__setattr__(self, "delta", clean)

    @classmethod
    def of(cls, d1: int = 0, d2: int = 0, d3: int = 0, d4: int = 0, special: int = 0) -> "GroupCensus":
        return cls({GroupType.T1: d1, GroupType.T2: d2, GroupType.T3: d3,
                    GroupType.T4: d4, GroupType.SPECIAL: special})

    def __getitem__(self, t: GroupType | int | str) -> int:
        return self.delta.get(GroupType.parse(t), 0)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return tuple(self[t] for t in (GroupType.T1, GroupType.T2, GroupType.T3, GroupType.T4))

    @property
    def special(self) -> int:
        return self[GroupType.SPECIAL]

    @property
    def points(self) -> int:
        return sum(t.size * n for t, n in self.delta.items())

    def validate(self, p: int) -> None:
        for t, n in self.delta.items():
            if n and not group_occurs(t, p):
                raise DomainError(f"group type {t.value} cannot occur for p={p}")

    def total_defect(self, p: int) -> Fraction:
        self.validate(p)
        return sum((n * group_defect(t, p) for t, n in self.delta.items()), Fraction(0))

    def expand(self, p: int) -> FixedPointData:
        """Explicit fixed-point data, one ``LocalRep`` per point (generator with ``k = 1``)."""
        self.validate(p)
        reps = []
        for t in GroupType:
            for _ in range(self[t]):
                for a, b in GROUP_WEIGHTS[t]:
                    reps.append(LocalRep(p, a, b * pow(a, -1, p)))
        return FixedPointData(p, tuple(reps))

    def __str__(self) -> str:
        s = "(" + ",".join(str(n) for n in self.as_tuple()) + ")"
        return s + (f"+special {self.special}" if self.special else "")


@dataclass
class FeasibilityReport:
    p: int
    chi: int
    sign: int
    solutions: list[GroupCensus]
    slack_table: dict[GroupType, Fraction]

    @property
    def forced_trivial(self) -> bool:
        return not self.solutions and self.chi > 0

    def to_json(self) -> dict:
        doc = {
            "schema": FEASIBILITY_SCHEMA,
            "p": self.p,
            "chi": self.chi,
            "sign": self.sign,
            "solutions": [list(c.as_tuple()) for c in self.solutions],
            "slack": {t.value: fmt_rational(v) for t, v in self.slack_table.items()},
            "forced_trivial": self.forced_trivial,
        }
        if GroupType.SPECIAL in self.slack_table:
            doc["special"] = [c.special for c in self.solutions]
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "FeasibilityReport":
        specials = doc.get("special", [0] * len(doc["solutions"]))
        return cls(
            p=doc["p"],
            chi=doc["chi"],
            sign=doc["sign"],
            solutions=[GroupCensus.of(*row, special=s) for row, s in zip(doc["solutions"], specials)],
            slack_table={GroupType(k): Fraction(v) for k, v in doc["slack"].items()},
        )


def _enumerate(types: list[GroupType], chi: int) -> Iterable[GroupCensus]:
    loops = [t for t in _ENUM_ORDER if t in types]
    ranges = [range(chi // t.size + 1) for t in loops]
    for combo in itertools.product(*ranges):
        used = sum(t.size * n for t, n in zip(loops, combo))
        if used > chi:
            continue
        counts = dict(zip(loops, combo))
        counts[GroupType.T1] = chi - used
        yield GroupCensus(counts)


def feasibility_solver(p: int, invariants: ManifoldInvariants) -> FeasibilityReport:
    """All group censuses satisfying both the point count and the G-signature equation."""
    p = prime_order(p)
    if invariants.c1_squared != 0:
        raise DomainError("feasibility is posed for c1^2 = 0 only")
    if not invariants.homologically_trivial:
        raise DomainError("feasibility is posed for homologically trivial actions only")
    chi = invariants.euler
    if chi < 0:
        raise DomainError(f"Euler characteristic {chi} is negative")
    types = census_types(p)
    target = -Fraction(2, 3) * (p - 1) * chi
    defects = {t: group_defect(t, p) for t in types}
    solutions = [
        c for c in _enumerate(types, chi)
        if sum((n * defects[t] for t, n in c.delta.items()), Fraction(0)) == target
    ]
    slack = {t: group_slack(t, p) for t in types}
    return FeasibilityReport(p, chi, invariants.signature, solutions, slack)


# ---------------------------------------------------------------------------
# GSF condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GSFResult:
    summed: bool
    per_element: bool | None  # None: census is not a union of full k-orbits
    blocks: dict[GroupType, int]

    @property
    def ok(self) -> bool:
        return self.summed and self.per_element is True


def gsf_details(p: int, census: GroupCensus, sign_M: int) -> GSFResult:
    p = prime_order(p)
    census.validate(p)
    summed = census.total_defect(p) == (p - 1) * sign_M
    if any(n % (p - 1) for n in census.delta.values()):
        return GSFResult(summed, None, {})
    blocks = {t: n // (p - 1) for t, n in census.delta.items()}
    per_element = sum((b * group_defect(t, p) for t, b in blocks.items()), Fraction(0)) == sign_M
    return GSFResult(summed, per_element, blocks)


def gsf_check(p: int, census: GroupCensus, sign_M: int) -> bool:
    """Realizability check for homologically trivial data made of full ``k``-orbits.

    Each block of ``p - 1`` groups of one type (the group evaluated at every
    ``k``) contributes that type's defect to ``sign(g, M)`` for every ``g``;
    the blocks must sum to ``sign(M)``.  The summed form over all ``g`` must
    hold as well.  Censuses that do not split into full orbits are rejected.
    """
    return gsf_details(p, census, sign_M).ok
