"""Text formats: fixed-point data files, graph edge lists, DOT output.

Fixed-point data::

    # p=5
    point 1 -1        # k q
    surface 0 -2      # genus self-intersection

Graph edge lists: one ``v1 v2 [mult]`` per line, a lone ``v`` declares a
vertex, and the directive ``tangency`` marks the two-sphere tangency
configuration.  Vertex names are arbitrary tokens, numbered in order of
first appearance.  ``#`` starts a comment in both formats.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputFormatError
from .gsig import FixedPointData
from .localrep import LocalRep, SurfaceFixComponent
from .plumbing import GraphFormatError, PlumbingGraph

_HEADER = re.compile(r"#\s*p\s*=\s*(-?\d+)\s*$")


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InputFormatError(f"line {lineno}: expected an integer, got {token!r}") from None


def parse_fixed_point_data(text: str) -> FixedPointData:
    p = None
    points: list[tuple[int, int]] = []
    surfaces: list[SurfaceFixComponent] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        m = _HEADER.match(line)
        if m:
            if p is not None:
                raise InputFormatError(f"line {lineno}: second '# p=' header")
            p = int(m.group(1))
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if len(rest) != 2 or head not in ("point", "surface"):
            raise InputFormatError(f"line {lineno}: expected 'point k q' or 'surface genus selfint'")
        a, b = (_int(t, lineno) for t in rest)
        if head == "point":
            points.append((a, b))
        else:
            surfaces.append(SurfaceFixComponent(a, b))
    if p is None:
        raise InputFormatError("missing '# p=<prime>' header")
    return FixedPointData(p, tuple(LocalRep(p, k, q) for k, q in points), tuple(surfaces))


def format_fixed_point_data(data: FixedPointData) -> str:
    lines = [f"# p={data.p}"]
    lines += [f"point {r.k} {r.q}" for r in data.isolated]
    lines += [f"surface {s.genus} {s.self_intersection}" for s in data.surfaces]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class NamedGraph:
    graph: PlumbingGraph
    names: tuple[str, ...]


def parse_graph(text: str) -> NamedGraph:
    names: dict[str, int] = {}
    edges: list[tuple[int, int, int]] = []
    tangency = False

    def vertex(tok: str) -> int:
        return names.setdefault(tok, len(names))

    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if tokens == ["tangency"]:
            tangency = True
            continue
        if len(tokens) == 1:
            vertex(tokens[0])
            continue
        if len(tokens) > 3:
            raise GraphFormatError(f"line {lineno}: expected 'v1 v2 [mult]'")
        a, b = vertex(tokens[0]), vertex(tokens[1])
        mult = _int(tokens[2], lineno) if len(tokens) == 3 else 1
        if mult < 1:
            raise GraphFormatError(f"line {lineno}: multiplicity must be positive")
        if a == b:
            raise GraphFormatError(f"line {lineno}: self-loop on {tokens[0]!r}")
        edges.append((a, b, mult))
    if not names:
        raise GraphFormatError("empty graph input")
    graph = PlumbingGraph.from_edges(len(names), edges, tangency=tangency)
    return NamedGraph(graph, tuple(names))


def format_graph(graph: PlumbingGraph, names: Sequence[str] | None = None) -> str:
    names = names or [str(i) for i in range(graph.vertex_count)]
    lines = ["tangency"] if graph.tangency else []
    lines += list(names)  # declaring every vertex first keeps the numbering
    for (a, b), m in graph.edges.items():
        lines.append(f"{names[a]} {names[b]}" + (f" {m}" if m != 1 else ""))
    return "\n".join(lines) + "\n"


def to_dot(graph: PlumbingGraph, names: Sequence[str] | None = None,
           multiplicities: Iterable[int] | None = None, title: str = "plumbing") -> str:
    """Undirected DOT: one node per sphere, one edge per intersection point."""
    names = list(names or [str(i) for i in range(graph.vertex_count)])
    mults = list(multiplicities) if multiplicities is not None else None
    lines = [f'graph "{title}" {{']
    for v in range(graph.vertex_count):
        label = f"{names[v]} ({graph.self_intersections[v]})"
        if mults is not None:
            label += f"\\nn={mults[v]}"
        lines.append(f'  v{v} [label="{label}"];')
    for (a, b), m in graph.edges.items():
        if graph.tangency:
            lines.append(f'  v{a} -- v{b} [label="tangent"];')
        else:
            lines += [f"  v{a} -- v{b};"] * m
    lines.append("}")
    return "\n".join(lines) + "\n"
