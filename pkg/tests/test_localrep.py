from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import primes
from zpsym.defects import GroupType, group_defect
from zpsym.errors import DomainError
from zpsym.localrep import (
    COMPONENT_GROUP,
    NO_FREE_TORUS_ACTION,
    Component,
    CurveSingularityProfile,
    LocalRep,
    RotationPair,
    SeifertData,
    classify_single_curve,
    component_fixed_data,
    component_occurs,
    normalize_rep,
    rep_multiset,
    rotation_congruence,
    sl2_check,
    torus_seifert_data,
    virtual_dim,
)


def R(a, b, p):
    return RotationPair.of(a, b, p)


def test_normalize_examples():
    assert normalize_rep((2, 3), 5) == LocalRep(5, 1, 4)
    assert normalize_rep((1, 1), 7) == LocalRep(7, 1, 1)
    assert normalize_rep((3, 1), 7) == LocalRep(7, 1, 3)
    with pytest.raises(DomainError):
        normalize_rep((0, 1), 5)


@given(st.sampled_from(primes(3, 199)), st.data())
def test_normalize_preserves_defect(p, data):
    a = data.draw(st.integers(1, p - 1))
    b = data.draw(st.integers(1, p - 1))
    rep = normalize_rep((a, b), p)
    assert rep.k == 1
    assert rep.defect() == LocalRep(p, a, b * pow(a, -1, p)).defect()


def test_sl2_examples():
    for p in primes(3, 50):
        assert sl2_check(LocalRep(p, 1, p - 1))
        assert not sl2_check(LocalRep(p, 1, 1))
    assert sl2_check(normalize_rep((2, 3), 5))


def test_rotation_examples():
    assert rotation_congruence([R(2, 3, 7), R(1, 1, 7)], 7)
    assert not rotation_congruence([R(1, 2, 7), R(1, 1, 7)], 7)
    for p in primes(2, 50):
        assert rotation_congruence([R(1, p - 1, p)] * 2, p)
        assert virtual_dim([R(1, p - 1, p)] * 2, p) == 0
    assert virtual_dim([R(2, 3, 7), R(1, 1, 7)], 7) == 1
    assert virtual_dim([R(1, 2, 5), R(1, 1, 5)], 5) == 1


def test_rotation_needs_two_points():
    with pytest.raises(DomainError):
        rotation_congruence([R(1, 1, 5)], 5)
    with pytest.raises(DomainError):
        virtual_dim([R(1, 1, 5)] * 3, 5)


@given(st.sampled_from(primes(2, 97)), st.lists(st.integers(1, 200), min_size=4, max_size=4),
       st.integers(-5, 5))
def test_congruence_iff_integral_dimension(p, ms, kc):
    pairs = [RotationPair(ms[0], ms[1]), RotationPair(ms[2], ms[3])]
    assert rotation_congruence(pairs, p, kc) == (virtual_dim(pairs, p, kc).denominator == 1)


def test_pairs_are_unordered():
    assert RotationPair(3, 2) == RotationPair(2, 3)
    assert RotationPair(1, 4).embedded


def test_single_curve_profiles():
    assert classify_single_curve(0, 0) == [
        CurveSingularityProfile(1, 0), CurveSingularityProfile(0, 1), CurveSingularityProfile(0, 0, (1,)),
    ]
    assert [c.describe() for c in classify_single_curve(0, 0)] == ["embedded torus", "nodal sphere", "cusp sphere"]
    assert classify_single_curve(-2, 0) == [CurveSingularityProfile(0, 0)]
    assert classify_single_curve(-1, -1) == [CurveSingularityProfile(0, 0)]
    with pytest.raises(DomainError):
        classify_single_curve(-5, 0)
    with pytest.raises(DomainError):
        classify_single_curve(1, 0)


@given(st.integers(-2, 12).map(lambda n: 2 * n), st.integers(-2, 2))
def test_profiles_spend_the_budget(c2, kc):
    total = c2 + kc + 2
    if total < 0 or total % 2:
        return
    profiles = classify_single_curve(c2, kc)
    assert len(set(profiles)) == len(profiles)
    assert all(pr.budget == total for pr in profiles)


def test_component_examples():
    (ii,) = component_fixed_data("II", 7)
    assert [pt.rotations[0].as_tuple() for pt in ii.points] == [(2, 3), (1, 1)]
    (iii,) = component_fixed_data("III", 11)
    assert [r.as_tuple() for r in iii.points[0].rotations] == [(1, 10), (1, 10)]
    (iv,) = component_fixed_data("IV", 5)
    assert [pt.rotations[0].as_tuple() for pt in iv.points] == [(1, 2), (1, 1), (1, 1)]
    (ip2,) = component_fixed_data("I-p2", 2)
    assert len(ip2.points) == 4 and all(pt.rotations[0].as_tuple() == (1, 1) for pt in ip2.points)
    assert len(component_fixed_data("I-p3", 3)) == 2


def test_component_occurrence():
    with pytest.raises(DomainError):
        component_fixed_data("II", 3)
    with pytest.raises(DomainError):
        component_fixed_data("V-triple", 3)
    assert not component_occurs("I-p2", 3)


def test_component_spheres_integral():
    for p in primes(2, 199):
        for comp in Component:
            if not component_occurs(comp, p):
                continue
            for data in component_fixed_data(comp, p):
                for sphere in data.spheres:
                    assert rotation_congruence(sphere.pairs, p)
                    assert virtual_dim(sphere.pairs, p).denominator == 1


def test_components_match_group_defects():
    """Points on components II..V form exactly the corresponding defect groups."""
    for p in primes(5, 199):
        for comp, t in COMPONENT_GROUP.items():
            if not component_occurs(comp, p) or (t is GroupType.T2 and p <= 5):
                continue
            (data,) = component_fixed_data(comp, p)
            assert sum((r.defect() for r in data.reps), Fraction(0)) == group_defect(t, p)


def test_rep_multiset():
    (iv,) = component_fixed_data("IV", 7)
    assert rep_multiset(iv.reps) == sorted(r.q for r in iv.reps)


def test_torus_data():
    assert torus_seifert_data(2) == [SeifertData(-2, ((2, 1),) * 4)]
    assert [str(s) for s in torus_seifert_data(3)] == ["(-1,(3,1),(3,1),(3,1))", "(-2,(3,2),(3,2),(3,2))"]
    assert torus_seifert_data(5) == []
    assert "impossible" in NO_FREE_TORUS_ACTION
