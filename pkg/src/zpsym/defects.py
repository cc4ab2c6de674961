"""Dedekind sums and signature defects of cyclic actions of prime order.

The defect of an isolated fixed point with tangent weights ``(k, kq)`` is

    I(p, q) = sum_{k=1}^{p-1} (1 + mu^k)(1 + mu^{kq}) / ((1 - mu^k)(1 - mu^{kq}))

with ``mu = exp(2 pi i / p)``.  Three routes to the same number are provided:

* ``defect_point`` -- a closed rational expression in ``p``, ``q`` and the
  floor-square sum ``sum floor(kq/p)^2``;
* ``-4 p s(q, p)`` via ``dedekind_sum``;
* ``defect_point_oracle`` -- the cotangent sum in double precision.

All exact values are :class:`fractions.Fraction`.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ConsistencyError, DomainError

ORACLE_MAX_P = 10_000

Number = Union[int, Fraction]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_order(p: int) -> int:
    """Validate a group order and return it as a plain ``int``."""
    if isinstance(p, bool) or int(p) != p:
        raise DomainError(f"group order must be an integer, got {p!r}")
    p = int(p)
    if not is_prime(p):
        raise DomainError(f"group order {p} is not prime")
    return p


def primes_upto(n: int) -> list[int]:
    return [m for m in range(2, n + 1) if is_prime(m)]


def _check_unit(q: int, p: int) -> None:
    if q % p == 0:
        raise DomainError(f"q={q} is divisible by p={p}")


def canonical_q(q: int, p: int) -> int:
    """Representative of ``q mod p`` in the symmetric window around zero.

    For odd ``p`` the result lies in ``[-(p-1)/2, (p-1)/2]``; for ``p = 2``
    it is 1.
    """
    p = prime_order(p)
    _check_unit(q, p)
    r = q % p
    return r - p if r > p // 2 else r


def fmt_rational(x: Number) -> str:
    """Serialize an exact rational as ``"a/b"``, or ``"a"`` when integral."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


# ---------------------------------------------------------------------------
# elementary sums
# ---------------------------------------------------------------------------

def sawtooth(x: Number) -> Fraction:
    """The sawtooth ``((x))``: ``x - floor(x) - 1/2`` off the integers, else 0."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - math.floor(x) - Fraction(1, 2)


def f_sum(q: int, p: int) -> int:
    """``sum_{k=1}^{p-1} k * floor(kq/p)`` with true (toward -inf) floor."""
    p = prime_order(p)
    _check_unit(q, p)
    return sum(k * ((k * q) // p) for k in range(1, p))


def floor_square_sum(q: int, p: int) -> int:
    """``sum_{k=1}^{p-1} floor(kq/p)^2``, with ``q`` taken as given (not reduced)."""
    p = prime_order(p)
    _check_unit(q, p)
    return sum(((k * q) // p) ** 2 for k in range(1, p))


def dedekind_sum_direct(q: int, p: int) -> Fraction:
    """``s(q, p)`` straight from the sawtooth definition."""
    p = prime_order(p)
    _check_unit(q, p)
    return sum(
        (sawtooth(Fraction(k, p)) * sawtooth(Fraction(k * q, p)) for k in range(1, p + 1)),
        Fraction(0),
    )


def dedekind_sum_via_f(q: int, p: int) -> Fraction:
    """``s(q, p)`` from ``6p s = (p-1)(2pq - q - 3p/2) - 6 f_p(q)``."""
    p = prime_order(p)
    six_p_s = (p - 1) * (2 * p * q - q - Fraction(3 * p, 2)) - 6 * f_sum(q, p)
    return six_p_s / (6 * p)


def dedekind_sum(q: int, p: int) -> Fraction:
    """Dedekind sum ``s(q, p)`` for prime ``p``.

    Evaluated twice, by the sawtooth definition and by the ``f_p`` formula;
    the two must agree exactly.

    >>> dedekind_sum(1, 3)
    Fraction(1, 18)
    """
    direct = dedekind_sum_direct(q, p)
    via_f = dedekind_sum_via_f(q, p)
    if direct != via_f:
        raise ConsistencyError(f"s({q},{p}): sawtooth sum {direct} != f-formula {via_f}")
    return direct


# ---------------------------------------------------------------------------
# point defects
# ---------------------------------------------------------------------------

def _master(p: int, q: int) -> Fraction:
    # Valid for every q prime to p, not just small |q|.
    poly = (
        Fraction(-2 * p * q, 3)
        + Fraction(q, 3)
        + Fraction(1, 3 * q)
        + p
        - Fraction(2 * p, 3 * q)
    )
    return poly * (p - 1) + Fraction(2 * p, q) * floor_square_sum(q, p)


def defect_point(p: int, q: int) -> Fraction:
    """Exact defect ``I(p, q)`` of a fixed point with weights ``(k, kq)``.

    ``q`` is first reduced into the symmetric window mod ``p``.  For ``p = 2``
    the only admissible point has ``q = 1`` and defect 0.
    """
    p = prime_order(p)
    qc = canonical_q(q, p)
    if p == 2:
        return Fraction(0)
    return _master_cached(p, qc)


@functools.lru_cache(maxsize=4096)
def _master_cached(p: int, q: int) -> Fraction:
    return _master(p, q)


def defect_point_dedekind(p: int, q: int) -> Fraction:
    """``I(p, q)`` as ``-4 p s(q, p)``."""
    p = prime_order(p)
    return -4 * p * dedekind_sum(q, p)


def defect_point_oracle(p: int, q: int) -> float:
    """Floating-point ``I(p, q) = -sum cot(pi k/p) cot(pi k q/p)``.

    Independent of the exact machinery; used only as a cross-check.
    """
    p = prime_order(p)
    _check_unit(q, p)
    if p > ORACLE_MAX_P:
        raise DomainError(f"oracle refuses p={p} > {ORACLE_MAX_P}")
    total = math.fsum(
        1.0 / (math.tan(math.pi * k / p) * math.tan(math.pi * ((k * q) % p) / p))
        for k in range(1, p)
    )
    return -total


class DefectPath(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    DEDEKIND = "dedekind"
    ORACLE = "oracle"


@dataclass(frozen=True)
class DefectValue:
    value: Union[Fraction, float]
    path: DefectPath


def defect_value(p: int, q: int, path: DefectPath | str = DefectPath.CLOSED_FORM) -> DefectValue:
    path = DefectPath(path)
    if path is DefectPath.CLOSED_FORM:
        return DefectValue(defect_point(p, q), path)
    if path is DefectPath.DEDEKIND:
        return DefectValue(defect_point_dedekind(p, q), path)
    return DefectValue(defect_point_oracle(p, q), path)


def defect_surface(p: int, self_intersection: int) -> Fraction:
    """Defect ``(p^2 - 1)/3 * Y.Y`` of a fixed surface ``Y``."""
    p = prime_order(p)
    return Fraction(p * p - 1, 3) * self_intersection


# ---------------------------------------------------------------------------
# closed forms by residue class
# ---------------------------------------------------------------------------

def _residue(p: int, m: int, allowed: tuple[int, ...]) -> tuple[int, int]:
    """Write ``p = m r + a`` with ``a`` from ``allowed``; return ``(a, r)``."""
    for a in allowed:
        if (p - a) % m == 0:
            return a, (p - a) // m
    raise DomainError(f"p={p} is not congruent to any of {allowed} mod {m}")


def floor_square_sum_closed(q_label: str, p: int) -> int:
    """Polynomial closed form of ``sum floor(kq/p)^2`` for the four special ``q``.

    ``q_label`` is one of ``"-3"``, ``"-4"``, ``"-6"``, ``"(p+3)/2"``.
    """
    p = prime_order(p)
    if q_label == "-4":
        a, r = _residue(p, 4, (1, 3))
        return 30 * r if a == 1 else 30 * r + 13
    if q_label == "-6":
        a, r = _residue(p, 6, (1, 5))
        return 91 * r if a == 1 else 91 * r + 54
    if q_label == "(p+3)/2":
        a, r = _residue(p, 6, (1, 5))
        if a == 1:
            return r * (18 * r * r + 13 * r + 3)
        return (r + 1) * (18 * r * r + 31 * r + 14)
    if q_label == "-3":
        a, r = _residue(p, 3, (1, 2))
        return 14 * r if a == 1 else 14 * r + 4
    raise DomainError(f"no closed form for q={q_label!r}")


def special_q(q_label: str, p: int) -> int:
    """Integer value of a labelled ``q`` (``"(p+3)/2"`` needs odd ``p``)."""
    if q_label == "(p+3)/2":
        if p % 2 == 0:
            raise DomainError("(p+3)/2 requires odd p")
        return (p + 3) // 2
    return int(q_label)


def defect_point_closed(q_label: str, p: int) -> Fraction:
    """Residue-class closed forms of ``I(p, q)`` for the ``q`` the theory needs.

    Supported labels: ``"-1"``, ``"1"``, ``"2"``, ``"-2"``, ``"-3"``, ``"-4"``,
    ``"-6"``, ``"(p+3)/2"``.
    """
    p = prime_order(p)
    if q_label == "-1":
        return Fraction((p - 1) * (p - 2), 3)
    if q_label == "1":
        return -Fraction((p - 1) * (p - 2), 3)
    if q_label == "2":
        return -Fraction((p - 1) * (p - 5), 6)
    if q_label == "-2":
        return Fraction((p - 1) * (p - 5), 6)
    if q_label == "-4":
        a, r = _residue(p, 4, (1, 3))
        return Fraction(4 * r * (r - 4), 3) if a == 1 else Fraction(2 * (2 * r * r + 1), 3)
    if q_label == "-6":
        a, r = _residue(p, 6, (1, 5))
        return Fraction(2 * r * (r - 6)) if a == 1 else Fraction(2 * r * r + 4 * r + 4)
    if q_label == "(p+3)/2":
        a, r = _residue(p, 6, (1, 5))
        return Fraction(2 * r * (2 - r)) if a == 1 else Fraction(-2 * r * r + 4 * r + 4)
    if q_label == "-3":
        a, r = _residue(p, 3, (1, 2))
        return Fraction(r * (r - 3)) if a == 1 else Fraction(r * (r - 1))
    raise DomainError(f"no closed form for q={q_label!r}")


# ---------------------------------------------------------------------------
# fixed-point groups
# ---------------------------------------------------------------------------

class GroupType(str, enum.Enum):
    """The five kinds of fixed-point groups of a pseudofree action."""

    T1 = "1"
    T2 = "2"
    T3 = "3"
    T4 = "4"
    SPECIAL = "3-special"

    @classmethod
    def parse(cls, value: "GroupType | int | str") -> "GroupType":
        if isinstance(value, GroupType):
            return value
        return cls(str(value))

    @property
    def size(self) -> int:
        """Number of fixed points in one group."""
        return {"1": 1, "2": 2, "3": 3, "4": 4, "3-special": 3}[self.value]


# Tangent weights (a, b) of the points of one group, generator chosen so k = 1.
GROUP_WEIGHTS: dict[GroupType, tuple[tuple[int, int], ...]] = {
    GroupType.T1: ((1, -1),),
    GroupType.T2: ((2, 3), (-1, 6)),
    GroupType.T3: ((1, 2), (-1, 4), (-1, 4)),
    GroupType.T4: ((1, 1), (-1, 3), (-1, 3), (-1, 3)),
    GroupType.SPECIAL: ((1, 1), (1, 1), (1, 1)),
}

# The same groups written as sums of I(p, q) labels.
GROUP_TERMS: dict[GroupType, tuple[tuple[int, str], ...]] = {
    GroupType.T1: ((1, "-1"),),
    GroupType.T2: ((1, "-6"), (1, "(p+3)/2")),
    GroupType.T3: ((1, "2"), (2, "-4")),
    GroupType.T4: ((1, "1"), (3, "-3")),
    GroupType.SPECIAL: ((3, "1"),),
}


def group_occurs(group_type: GroupType | int | str, p: int) -> bool:
    t = GroupType.parse(group_type)
    if t is GroupType.T1:
        return True
    if t is GroupType.T2:
        return p > 5
    if t in (GroupType.T3, GroupType.T4):
        return p > 3
    return p == 3


def _check_occurs(t: GroupType, p: int) -> None:
    if not group_occurs(t, p):
        raise DomainError(f"fixed-point group of type {t.value} cannot occur for p={p}")


def group_defect_sum(group_type: GroupType | int | str, p: int) -> Fraction:
    """Total defect of one group, summed point by point from ``defect_point``."""
    p = prime_order(p)
    t = GroupType.parse(group_type)
    _check_occurs(t, p)
    return sum(
        (mult * defect_point(p, special_q(label, p)) for mult, label in GROUP_TERMS[t]),
        Fraction(0),
    )


def group_defect_closed(group_type: GroupType | int | str, p: int) -> Fraction:
    """Residue-class closed form of a group's total defect."""
    p = prime_order(p)
    t = GroupType.parse(group_type)
    _check_occurs(t, p)
    if t is GroupType.T1:
        return Fraction((p - 1) * (p - 2), 3)
    if t is GroupType.T2:
        a, r = _residue(p, 6, (1, 5))
        return Fraction(-8 * r) if a == 1 else Fraction(8 * r + 8)
    if t is GroupType.T3:
        a, r = _residue(p, 4, (1, 3))
        return Fraction(-8 * r) if a == 1 else Fraction(2)
    if t is GroupType.T4:
        a, r = _residue(p, 3, (1, 2))
        return Fraction(-8 * r) if a == 1 else Fraction(-4 * r)
    # p == 3: three points of type (k, k)
    return -3 * Fraction((p - 1) * (p - 2), 3)


def group_defect(group_type: GroupType | int | str, p: int) -> Fraction:
    """Total defect of one fixed-point group, checked against its closed form.

    >>> group_defect(3, 5)
    Fraction(-8, 1)
    """
    summed = group_defect_sum(group_type, p)
    closed = group_defect_closed(group_type, p)
    if summed != closed:
        raise ConsistencyError(
            f"group {GroupType.parse(group_type).value} at p={p}: sum {summed} != closed {closed}"
        )
    return summed


def group_slack(group_type: GroupType | int | str, p: int) -> Fraction:
    """``def + (2 n / 3)(p - 1)`` where ``n`` is the group's point count.

    Non-negative for every group that occurs; a census solving the
    signature equation can only use groups of zero slack.
    """
    t = GroupType.parse(group_type)
    return group_defect(t, p) + Fraction(2 * t.size, 3) * (p - 1)
