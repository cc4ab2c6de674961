import pytest
from hypothesis import given, strategies as st

from zpsym.errors import InputFormatError
from zpsym.formats import (
    format_fixed_point_data,
    format_graph,
    parse_fixed_point_data,
    parse_graph,
    to_dot,
)
from zpsym.gsig import GroupCensus
from zpsym.plumbing import PlumbingGraph, classify, dtilde


def test_fixed_point_file():
    text = "# p=5\n# a comment\npoint 1 -1\npoint 2 3  # trailing\nsurface 0 -2\n"
    data = parse_fixed_point_data(text)
    assert data.p == 5
    assert [(r.k, r.q) for r in data.isolated] == [(1, 4), (2, 3)]
    assert data.surfaces[0].self_intersection == -2
    assert parse_fixed_point_data(format_fixed_point_data(data)) == data


def test_fixed_point_round_trip_of_census():
    data = GroupCensus.of(d3=8).expand(5)
    assert parse_fixed_point_data(format_fixed_point_data(data)) == data


@pytest.mark.parametrize("text", [
    "point 1 1\n",                 # no header
    "# p=5\npoint 1\n",            # short line
    "# p=5\nvertex 1 1\n",         # unknown keyword
    "# p=5\npoint a 1\n",          # not an integer
    "# p=5\n# p=7\n",              # two headers
])
def test_fixed_point_file_errors(text):
    with pytest.raises(InputFormatError):
        parse_fixed_point_data(text)


def test_graph_file():
    named = parse_graph("# star\nc a\nc b\nc d\nc e\n")
    assert named.names == ("c", "a", "b", "d", "e")
    assert classify(named.graph).multiplicities == (2, 1, 1, 1, 1)
    single = parse_graph("x\n")
    assert single.graph.vertex_count == 1
    double = parse_graph("0 1 2\n")
    assert classify(double.graph).name == "A-tilde(1)"
    tangent = parse_graph("tangency\n0 1\n")
    assert tangent.graph.tangency


@pytest.mark.parametrize("text", ["", "# only a comment\n", "a b c d\n", "a a\n", "a b 0\n", "a b x\n"])
def test_graph_file_errors(text):
    with pytest.raises(InputFormatError):
        parse_graph(text)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.just(n), st.dictionaries(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1]),
                                st.integers(1, 3)))))
def test_graph_round_trip(shape):
    n, edges = shape
    graph = PlumbingGraph(n, edges)
    assert parse_graph(format_graph(graph)).graph == graph


def test_dot_output():
    g = dtilde(4)
    dot = to_dot(g, multiplicities=classify(g).multiplicities)
    assert dot.startswith('graph "plumbing" {')
    assert dot.count(" -- ") == 4
    assert "n=2" in dot
    assert to_dot(PlumbingGraph(2, {(0, 1): 2})).count(" -- ") == 2
