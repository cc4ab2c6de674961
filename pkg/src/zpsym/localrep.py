"""Local representations, rotation numbers and per-component fixed-point data."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .defects import GroupType, defect_point, prime_order
from .errors import DomainError


@dataclass(frozen=True)
class LocalRep:
    """Tangent representation ``(z1, z2) -> (mu^k z1, mu^{kq} z2)`` at a fixed point."""

    p: int
    k: int
    q: int

    def __post_init__(self) -> None:
        prime_order(self.p)
        if self.k % self.p == 0 or self.q % self.p == 0:
            raise DomainError(f"weights of ({self.k}, {self.k}*{self.q}) vanish mod {self.p}")
        object.__setattr__(self, "k", self.k % self.p)
        object.__setattr__(self, "q", self.q % self.p)

    @property
    def weights(self) -> tuple[int, int]:
        return self.k, (self.k * self.q) % self.p

    def defect(self) -> Fraction:
        return defect_point(self.p, self.q)


def normalize_rep(weights: tuple[int, int], p: int) -> LocalRep:
    """Bring raw tangent weights ``(a, b)`` to the form ``(1, q)``.

    The coordinate order is not intrinsic, so ``q`` is the smaller of
    ``b/a`` and ``a/b`` mod ``p``.
    """
    p = prime_order(p)
    a, b = weights
    if a % p == 0 or b % p == 0:
        raise DomainError(f"zero weight in {weights} mod {p}")
    q1 = (pow(a, -1, p) * b) % p
    q2 = (pow(b, -1, p) * a) % p
    return LocalRep(p, 1, min(q1, q2))


def sl2_check(rep: LocalRep) -> bool:
    """True iff the representation lies in ``SL_2(C)``, i.e. ``q = -1``."""
    return (rep.k + rep.k * rep.q) % rep.p == 0


# ---------------------------------------------------------------------------
# rotation numbers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RotationPair:
    """Rotation numbers at a fixed point along an invariant curve.

    Only defined up to order; stored sorted ascending.
    """

    m1: int
    m2: int

    def __post_init__(self) -> None:
        lo, hi = sorted((self.m1, self.m2))
        object.__setattr__(self, "m1", lo)
        object.__setattr__(self, "m2", hi)

    @classmethod
    def of(cls, m1: int, m2: int, p: int) -> "RotationPair":
        return cls(m1 % p, m2 % p)

    @property
    def total(self) -> int:
        return self.m1 + self.m2

    @property
    def embedded(self) -> bool:
        return self.m1 == 1

    def as_tuple(self) -> tuple[int, int]:
        return self.m1, self.m2


def _two_pairs(pairs: Sequence[RotationPair]) -> None:
    if len(pairs) != 2:
        raise DomainError(f"an invariant sphere has exactly two fixed points, got {len(pairs)}")


def rotation_congruence(pairs: Sequence[RotationPair], p: int, K_dot_C: int = 0) -> bool:
    """Integrality of the orbifold index on an invariant sphere.

    With ``K.C = 0`` this is ``sum (m_i1 + m_i2) = 0 mod p``.
    """
    p = prime_order(p)
    _two_pairs(pairs)
    return (K_dot_C + sum(r.total for r in pairs)) % p == 0


def virtual_dim(pairs: Sequence[RotationPair], p: int, K_dot_C: int = 0) -> Fraction:
    """``d_f = -K.C/p + 2 - sum (m_i1 + m_i2)/p``."""
    p = prime_order(p)
    _two_pairs(pairs)
    return Fraction(-K_dot_C, p) + 2 - Fraction(sum(r.total for r in pairs), p)


# ---------------------------------------------------------------------------
# adjunction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveSingularityProfile:
    genus: int
    double_points: int
    milnor_numbers: tuple[int, ...] = ()

    @property
    def budget(self) -> int:
        """Right-hand side ``2g + 2 delta + 2 sum kappa`` of the adjunction formula."""
        return 2 * self.genus + 2 * self.double_points + 2 * sum(self.milnor_numbers)

    def describe(self) -> str:
        if self == CurveSingularityProfile(1, 0):
            return "embedded torus"
        if self == CurveSingularityProfile(0, 1):
            return "nodal sphere"
        if self == CurveSingularityProfile(0, 0, (1,)):
            return "cusp sphere"
        if self == CurveSingularityProfile(0, 0):
            return "embedded sphere"
        return f"genus {self.genus}, {self.double_points} double point(s), Milnor {list(self.milnor_numbers)}"


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    largest = n if largest is None else largest
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def classify_single_curve(C_squared: int, K_dot_C: int) -> list[CurveSingularityProfile]:
    """All (genus, double points, Milnor numbers) compatible with the adjunction formula.

    Solves ``C^2 + K.C + 2 = 2g + 2 delta + 2 sum kappa``.  Ordered by genus,
    then double points, then partition, each descending.
    """
    total = C_squared + K_dot_C + 2
    if total < 0 or total % 2:
        raise DomainError(f"adjunction budget C^2 + K.C + 2 = {total} must be even and >= 0")
    half = total // 2
    out = []
    for g in range(half, -1, -1):
        for delta in range(half - g, -1, -1):
            for kappas in _partitions(half - g - delta):
                out.append(CurveSingularityProfile(g, delta, kappas))
    return out


# ---------------------------------------------------------------------------
# fixed-point data per component of the canonical curve
# ---------------------------------------------------------------------------

class Component(str, enum.Enum):
    I_FIXED = "I-fixed"
    I_P2 = "I-p2"
    I_P3 = "I-p3"
    II = "II"
    III = "III"
    IV = "IV"
    V_TRIPLE = "V-triple"


@dataclass(frozen=True)
class SurfaceFixComponent:
    genus: int
    self_intersection: int

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise DomainError("genus must be non-negative")

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus


@dataclass(frozen=True)
class FixedPoint:
    label: str
    rotations: tuple[RotationPair, ...]
    rep: LocalRep


@dataclass(frozen=True)
class InvariantSphere:
    """A non-fixed invariant sphere and the rotation numbers at its two fixed points."""

    label: str
    fixed: tuple[tuple[str, RotationPair], tuple[str, RotationPair]]

    @property
    def pairs(self) -> list[RotationPair]:
        return [r for _, r in self.fixed]


@dataclass(frozen=True)
class ComponentData:
    component: Component
    p: int
    points: tuple[FixedPoint, ...] = ()
    spheres: tuple[InvariantSphere, ...] = ()
    surfaces: tuple[SurfaceFixComponent, ...] = ()
    constraints: tuple[str, ...] = field(default=())

    @property
    def reps(self) -> list[LocalRep]:
        return [pt.rep for pt in self.points]


_OCCURS = {
    Component.I_FIXED: (lambda p: True, "any p"),
    Component.I_P2: (lambda p: p == 2, "p = 2"),
    Component.I_P3: (lambda p: p == 3, "p = 3"),
    Component.II: (lambda p: p >= 5, "p >= 5"),
    Component.III: (lambda p: True, "any p"),
    Component.IV: (lambda p: p >= 3, "p >= 3"),
    Component.V_TRIPLE: (lambda p: p != 3, "p != 3"),
}


def component_occurs(component: Component | str, p: int) -> bool:
    return _OCCURS[Component(component)][0](p)


def _point(label: str, p: int, *rots: RotationPair) -> FixedPoint:
    return FixedPoint(label, tuple(rots), normalize_rep(rots[0].as_tuple(), p))


def component_fixed_data(component: Component | str, p: int) -> list[ComponentData]:
    """Fixed points and rotation numbers carried by one component of the canonical curve.

    Returns one entry per admissible alternative; only ``I-p3`` has two
    (all three points ``(1,1)``, or all three ``(1,2)``).
    """
    p = prime_order(p)
    comp = Component(component)
    ok, cond = _OCCURS[comp]
    if not ok(p):
        raise DomainError(f"component {comp.value} requires {cond}, got p={p}")
    R = lambda a, b: RotationPair.of(a, b, p)  # noqa: E731

    if comp is Component.I_FIXED:
        return [ComponentData(comp, p, surfaces=(SurfaceFixComponent(1, 0),),
                              constraints=("torus fixed pointwise; zero defect",))]
    if comp is Component.I_P2:
        pts = tuple(_point(f"t{i}", p, R(1, 1)) for i in range(1, 5))
        return [ComponentData(comp, p, points=pts, constraints=("Seifert (-2,(2,1)^4)",))]
    if comp is Component.I_P3:
        return [
            ComponentData(comp, p, points=tuple(_point(f"t{i}", p, R(1, m)) for i in range(1, 4)),
                          constraints=(f"all three points share rotation numbers (1,{m})",))
            for m in (1, 2)
        ]
    if comp is Component.II:
        cusp, smooth = R(2, 3), R(1, p - 6)
        return [ComponentData(
            comp, p,
            points=(_point("cusp", p, cusp), _point("smooth", p, smooth)),
            spheres=(InvariantSphere("C", (("cusp", cusp), ("smooth", smooth))),),
        )]
    if comp is Component.III:
        node = R(1, p - 1)
        return [ComponentData(
            comp, p,
            points=(_point("node", p, node, node),),
            spheres=(InvariantSphere("C", (("node", node), ("node", node))),),
        )]
    if comp is Component.IV:
        x, a = R(1, 2), R(1, p - 4)
        return [ComponentData(
            comp, p,
            points=(_point("x", p, x, x), _point("a1", p, a), _point("a2", p, a)),
            spheres=(InvariantSphere("S1", (("x", x), ("a1", a))),
                     InvariantSphere("S2", (("x", x), ("a2", a)))),
        )]
    # three spheres through one point
    x, a = R(1, 1), R(1, p - 3)
    return [ComponentData(
        comp, p,
        points=(_point("x", p, x, x, x),) + tuple(_point(f"a{i}", p, a) for i in range(1, 4)),
        spheres=tuple(InvariantSphere(f"S{i}", (("x", x), (f"a{i}", a))) for i in range(1, 4)),
    )]


# Components whose points form exactly one fixed-point group (k = 1).
COMPONENT_GROUP: dict[Component, GroupType] = {
    Component.III: GroupType.T1,
    Component.II: GroupType.T2,
    Component.IV: GroupType.T3,
    Component.V_TRIPLE: GroupType.T4,
}


def rep_multiset(reps: Iterable[LocalRep]) -> list[int]:
    return sorted(r.q for r in reps)


# ---------------------------------------------------------------------------
# tori
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeifertData:
    """Normalized Seifert invariant ``(b, (a1, b1), ..., (an, bn))``."""

    b: int
    exceptional: tuple[tuple[int, int], ...]

    def __str__(self) -> str:
        fibres = ",".join(f"({a},{bb})" for a, bb in self.exceptional)
        return f"({self.b},{fibres})"


NO_FREE_TORUS_ACTION = "free T^3 action with fixed point on C impossible"


def torus_seifert_data(p: int) -> list[SeifertData]:
    """Seifert invariants of ``T^3 / Z_p`` for a non-fixed invariant torus.

    Only ``p = 2, 3`` admit one; otherwise the list is empty
    (see ``NO_FREE_TORUS_ACTION``).
    """
    p = prime_order(p)
    if p == 2:
        return [SeifertData(-2, ((2, 1),) * 4)]
    if p == 3:
        return [SeifertData(-1, ((3, 1),) * 3), SeifertData(-2, ((3, 2),) * 3)]
    return []
