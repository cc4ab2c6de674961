import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import primes
from zpsym.defects import GroupType, defect_point, group_defect
from zpsym.errors import DomainError
from zpsym.gsig import (
    FeasibilityReport,
    FixedPointData,
    GroupCensus,
    ManifoldInvariants,
    census_types,
    euler_from,
    feasibility_solver,
    gsf_check,
    gsf_details,
    gsig_residual,
)
from zpsym.localrep import LocalRep, SurfaceFixComponent

K3 = ManifoldInvariants(-16)


def test_euler_examples():
    assert euler_from(0, -16) == 24
    assert euler_from(0, 0) == 0
    for s in range(-40, 41, 2):
        assert euler_from(0, s) == -3 * s // 2
    with pytest.raises(DomainError):
        euler_from(0, -15)


def test_residual_example_39_data():
    data = GroupCensus.of(d3=8).expand(5)
    assert len(data.isolated) == 24
    assert gsig_residual(5, -16, -16, data) == 0


def test_residual_free_action():
    assert gsig_residual(7, 0, 0, FixedPointData(7)) == 0


def test_residual_theorem_a():
    data = FixedPointData(5, (LocalRep(5, 1, -1),) * 24)
    assert gsig_residual(5, -16, -16, data) == -160


def test_residual_with_surface():
    data = FixedPointData(5, (), (SurfaceFixComponent(0, -2),))
    assert data.euler == 2
    assert gsig_residual(5, 0, 0, data) == 16


def test_residual_rejects_mismatch():
    with pytest.raises(DomainError):
        gsig_residual(7, 0, 0, FixedPointData(5))
    with pytest.raises(DomainError):
        FixedPointData(7, (LocalRep(5, 1, 1),))


def brute_force(p: int, chi: int) -> set[tuple[int, ...]]:
    """Naive search over every count vector, independent of the solver's loop order."""
    types = census_types(p)
    target = -Fraction(2, 3) * (p - 1) * chi
    found = set()
    for counts in itertools.product(range(chi + 1), repeat=len(types)):
        if sum(t.size * n for t, n in zip(types, counts)) != chi:
            continue
        if sum((n * group_defect(t, p) for t, n in zip(types, counts)), Fraction(0)) == target:
            c = GroupCensus(dict(zip(types, counts)))
            found.add(c.as_tuple() + (c.special,))
    return found


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13, 17, 19, 23])
def test_solver_matches_brute_force(p):
    chi = 12  # keeps the naive product small
    inv = ManifoldInvariants(-8)
    report = feasibility_solver(p, inv)
    assert {c.as_tuple() + (c.special,) for c in report.solutions} == brute_force(p, chi)


def test_solver_examples():
    assert feasibility_solver(11, K3).forced_trivial
    assert GroupCensus.of(d3=8) in feasibility_solver(5, K3).solutions
    for p in (2, 3, 5, 7, 11):
        r = feasibility_solver(p, ManifoldInvariants(0))
        assert r.solutions == [GroupCensus()] and not r.forced_trivial


def test_solver_at_three_uses_special_groups():
    assert GroupType.SPECIAL in feasibility_solver(3, K3).slack_table
    assert feasibility_solver(3, K3).forced_trivial


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(primes(2, 199)), st.sampled_from([-16, -32, -8, 0]))
def test_solutions_satisfy_equation_and_count(p, sign):
    inv = ManifoldInvariants(sign)
    report = feasibility_solver(p, inv)
    for c in report.solutions:
        assert c.points == inv.euler
        assert c.total_defect(p) == (p - 1) * sign
        assert gsig_residual(p, sign, sign, c.expand(p)) == 0
        # only zero-slack groups can appear
        assert all(report.slack_table[t] == 0 for t in c.delta)


def test_delta_one_vanishes():
    for p in primes(2, 199):
        for sign in (-16, -32):
            for c in feasibility_solver(p, ManifoldInvariants(sign)).solutions:
                assert c[GroupType.T1] == 0


def test_report_json_round_trip():
    for p in (3, 5, 7, 11):
        report = feasibility_solver(p, K3)
        doc = json.loads(json.dumps(report.to_json()))
        assert doc["schema"] == "zpsym.feasibility/1"
        back = FeasibilityReport.from_json(doc)
        assert back.solutions == report.solutions
        assert back.slack_table == report.slack_table
        assert back.forced_trivial == report.forced_trivial
    doc = feasibility_solver(5, K3).to_json()
    assert doc["solutions"] == [[0, 0, 8, 0]]
    assert doc["slack"] == {"1": "20/3", "3": "0", "4": "20/3"}


def test_solver_preconditions():
    with pytest.raises(DomainError):
        feasibility_solver(5, ManifoldInvariants(-16, c1_squared=2))
    with pytest.raises(DomainError):
        feasibility_solver(5, ManifoldInvariants(2))
    with pytest.raises(DomainError):
        feasibility_solver(5, ManifoldInvariants(-16, homologically_trivial=False))


def test_gsf_examples():
    assert gsf_check(5, GroupCensus.of(d3=8), -16)
    assert not gsf_check(5, GroupCensus.of(d3=7), -16)
    assert gsf_check(11, GroupCensus(), 0)
    assert gsf_details(5, GroupCensus.of(d3=8), -16).blocks == {GroupType.T3: 2}
    assert gsf_details(5, GroupCensus.of(d3=7), -16).per_element is None


def test_gsf_rejects_impossible_types():
    with pytest.raises(DomainError):
        gsf_check(5, GroupCensus.of(d2=6), -16)


def test_expand_uses_group_weights():
    data = GroupCensus.of(d3=1).expand(5)
    assert sorted(r.q for r in data.isolated) == [1, 1, 2]
    assert data.point_defects() == group_defect(3, 5) == 2 * defect_point(5, 1) + defect_point(5, 2)


def test_census_string():
    assert str(GroupCensus.of(d3=8)) == "(0,0,8,0)"
    with pytest.raises(DomainError):
        GroupCensus.of(d1=-1)


@pytest.mark.parametrize("sign", [-8, -16, -32, -48])
def test_residue_classes_force_triviality(sign):
    inv = ManifoldInvariants(sign)
    for p in primes(2, 199):
        if p % 4 != 1 and p % 6 != 1:
            assert feasibility_solver(p, inv).forced_trivial


def test_solver_order_is_lexicographic():
    sols = feasibility_solver(13, K3).solutions
    keys = [(c[GroupType.T4], c[GroupType.T3], c[GroupType.T2]) for c in sols]
    assert keys == sorted(keys)
