"""Configurations of (-2)-spheres and the equivariant plumbing recursion.

A configuration is a multigraph: one vertex per sphere and one edge per
transverse intersection point.  ``classify`` decides exactly (rational
arithmetic, no eigenvalues) whether the intersection form is negative
semidefinite with a positive null vector, which singles out the affine
Dynkin diagrams, and returns the null vector as the multiplicity vector.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from .defects import prime_order
from .errors import ConsistencyError, DomainError, InputFormatError

Matrix = list[list[Fraction]]
IntMatrix = tuple[tuple[int, int], tuple[int, int]]


class GraphFormatError(InputFormatError):
    pass


@dataclass(frozen=True)
class PlumbingGraph:
    """Spheres ``0..n-1`` with intersection multiplicities on the edges.

    ``tangency`` marks the two-sphere configuration meeting at one point with
    tangency of order two (local intersection number 2 at a single contact).
    """

    vertex_count: int
    edges: dict[tuple[int, int], int] = field(default_factory=dict)
    self_intersections: tuple[int, ...] | None = None
    tangency: bool = False

    def __post_init__(self) -> None:
        n = self.vertex_count
        if n < 1:
            raise DomainError("a configuration needs at least one sphere")
        clean: dict[tuple[int, int], int] = {}
        for (a, b), m in self.edges.items():
            if a == b or not (0 <= a < n and 0 <= b < n):
                raise DomainError(f"bad edge ({a}, {b}) for {n} vertices")
            if m < 0:
                raise DomainError("negative edge multiplicity")
            if m:
                key = (min(a, b), max(a, b))
                clean[key] = clean.get(key, 0) + m
        object.__setattr__(self, "edges", dict(sorted(clean.items())))
        if self.self_intersections is None:
            object.__setattr__(self, "self_intersections", (-2,) * n)
        elif len(self.self_intersections) != n:
            raise DomainError("one self-intersection per vertex required")
        if self.tangency and (n != 2 or self.edges != {(0, 1): 1}):
            raise DomainError("tangency is only allowed on two spheres with one contact point")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], **kw) -> "PlumbingGraph":
        acc: dict[tuple[int, int], int] = {}
        for e in edges:
            a, b = e[0], e[1]
            m = e[2] if len(e) > 2 else 1
            key = (min(a, b), max(a, b))
            acc[key] = acc.get(key, 0) + m
        return cls(n, acc, **kw)

    def neighbours(self, v: int) -> list[int]:
        return [b if a == v else a for (a, b) in self.edges if v in (a, b)]

    def degree(self, v: int) -> int:
        return sum(m for (a, b), m in self.edges.items() if v in (a, b))

    def is_connected(self) -> bool:
        seen = {0}
        todo = deque([0])
        while todo:
            v = todo.popleft()
            for w in self.neighbours(v):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == self.vertex_count

    def intersection_matrix(self) -> list[list[int]]:
        n = self.vertex_count
        m = [[0] * n for _ in range(n)]
        for i, s in enumerate(self.self_intersections):
            m[i][i] = s
        for (a, b), mult in self.edges.items():
            val = 2 * mult if self.tangency else mult
            m[a][b] = m[b][a] = val
        return m

    def induced(self, vertices: Sequence[int]) -> "PlumbingGraph":
        index = {v: i for i, v in enumerate(vertices)}
        edges = {(index[a], index[b]): m for (a, b), m in self.edges.items()
                 if a in index and b in index}
        return PlumbingGraph(len(vertices), edges,
                             tuple(self.self_intersections[v] for v in vertices))


def q_matrix(graph: PlumbingGraph) -> Matrix:
    """``Q`` with ``q_ii = 1`` and ``q_ij = -(1/2)`` times the edge multiplicity."""
    if graph.tangency:
        raise DomainError("Q is only defined for transverse configurations")
    n = graph.vertex_count
    q = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        q[i][i] = Fraction(1)
    for (a, b), m in graph.edges.items():
        q[a][b] = q[b][a] = Fraction(-m, 2)
    return q


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

def is_psd(matrix: Sequence[Sequence]) -> bool:
    """Exact positive-semidefiniteness test for a symmetric rational matrix.

    Symmetric elimination: a negative pivot, or a zero pivot with a nonzero
    row, certifies indefiniteness.
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    idx = list(range(len(a)))
    while idx:
        i = idx.pop(0)
        piv = a[i][i]
        if piv < 0:
            return False
        if piv == 0:
            if any(a[i][j] != 0 for j in idx):
                return False
            continue
        for r in idx:
            f = a[r][i] / piv
            if f:
                for c in idx:
                    a[r][c] -= f * a[i][c]
    return True


def is_positive_definite(matrix: Sequence[Sequence]) -> bool:
    return is_psd(matrix) and not nullspace(matrix)


def nullspace(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the rational kernel via reduced row echelon form."""
    a = [[Fraction(x) for x in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][fc]
        basis.append(v)
    return basis


def primitive_integer(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector, first nonzero entry positive."""
    den = reduce(lambda x, y: x * y // gcd(x, y), (Fraction(x).denominator for x in vec), 1)
    ints = [int(Fraction(x) * den) for x in vec]
    g = reduce(gcd, (abs(x) for x in ints), 0) or 1
    ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 1)
    return tuple(-x for x in ints) if lead < 0 else tuple(ints)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

class AffineKind(str, enum.Enum):
    A = "A-tilde"
    D = "D-tilde"
    E = "E-tilde"
    NOT_AFFINE = "not-affine"


@dataclass(frozen=True)
class GraphClass:
    kind: AffineKind
    rank: int | None = None
    multiplicities: tuple[int, ...] | None = None

    @property
    def affine(self) -> bool:
        return self.kind is not AffineKind.NOT_AFFINE

    @property
    def name(self) -> str:
        return self.kind.value if not self.affine else f"{self.kind.value}({self.rank})"


def _arm_length(graph: PlumbingGraph, start: int, came_from: int) -> int:
    length, prev, cur = 1, came_from, start
    while True:
        nxt = [w for w in graph.neighbours(cur) if w != prev]
        if not nxt:
            return length
        if len(nxt) > 1:
            return -1
        prev, cur = cur, nxt[0]
        length += 1


def match_affine_pattern(graph: PlumbingGraph) -> tuple[AffineKind, int] | None:
    """Recognise the affine diagrams from degree data and arm lengths alone.

    Independent of any linear algebra; ``classify`` cross-checks against it.
    """
    n = graph.vertex_count
    if graph.tangency or any(s != -2 for s in graph.self_intersections):
        return None
    if not graph.is_connected():
        return None
    mults = list(graph.edges.values())
    if n == 2 and mults == [2]:
        return AffineKind.A, 1
    if any(m != 1 for m in mults):
        return None
    deg = [graph.degree(v) for v in range(n)]
    e = len(graph.edges)
    if e == n and n >= 3 and all(d == 2 for d in deg):
        return AffineKind.A, n - 1
    if e != n - 1 or max(deg, default=0) > 4:
        return None
    branch = [v for v in range(n) if deg[v] >= 3]
    if len(branch) == 1 and deg[branch[0]] == 4:
        return (AffineKind.D, 4) if n == 5 else None
    if any(deg[v] != 3 for v in branch):
        return None
    if len(branch) == 2:
        for b in branch:
            leaves = [w for w in graph.neighbours(b) if deg[w] == 1]
            if len(leaves) != 2:
                return None
        return AffineKind.D, n - 1
    if len(branch) == 1:
        c = branch[0]
        arms = sorted(_arm_length(graph, w, c) for w in graph.neighbours(c))
        return {(2, 2, 2): (AffineKind.E, 6), (1, 3, 3): (AffineKind.E, 7),
                (1, 2, 5): (AffineKind.E, 8)}.get(tuple(arms))
    return None


def affine_null_vector(graph: PlumbingGraph) -> tuple[int, ...] | None:
    """Strictly positive primitive null vector of a semidefinite form, if any."""
    q = q_matrix(graph)
    if not is_psd(q):
        return None
    kernel = nullspace(q)
    if len(kernel) != 1:
        return None
    vec = primitive_integer(kernel[0])
    return vec if all(x > 0 for x in vec) else None


def classify(graph: PlumbingGraph) -> GraphClass:
    """Affine type and multiplicity vector of a connected (-2)-configuration.

    The verdict comes from the exact null-vector computation; the type label
    comes from the pattern matcher, and the two must agree.
    """
    if graph.tangency:
        raise DomainError("tangency configurations are outside the affine classification")
    if any(s != -2 for s in graph.self_intersections):
        raise DomainError("classification is for (-2)-spheres only")
    if not graph.is_connected():
        raise DomainError("configuration is disconnected")
    null = affine_null_vector(graph)
    pattern = match_affine_pattern(graph)
    if (null is None) != (pattern is None):
        raise ConsistencyError(f"null vector {null} but pattern {pattern} for {graph}")
    if null is None:
        return GraphClass(AffineKind.NOT_AFFINE)
    kind, rank = pattern
    return GraphClass(kind, rank, null)


def check_multiplicities(graph: PlumbingGraph, mults: Sequence[int]) -> bool:
    """``sum_j n_j C_j . C_i = 0`` for every ``i``."""
    m = graph.intersection_matrix()
    return all(sum(n * c for n, c in zip(mults, row)) == 0 for row in m)


def tangency_multiplicity_check(n_i: int, n_j: int, intersection: int) -> bool:
    """Two spheres meeting with ``C_i . C_j >= 2``: admissible iff ``n_i = n_j`` and ``C_i . C_j = 2``."""
    if intersection < 2:
        raise DomainError("tangency bound applies to C_i.C_j >= 2")
    return n_i == n_j and intersection == 2


# ---------------------------------------------------------------------------
# standard diagrams
# ---------------------------------------------------------------------------

def atilde(n: int) -> PlumbingGraph:
    """Cycle on ``n + 1`` spheres (double edge for ``n = 1``)."""
    if n == 1:
        return PlumbingGraph(2, {(0, 1): 2})
    return PlumbingGraph.from_edges(n + 1, [(i, (i + 1) % (n + 1)) for i in range(n + 1)])


def dtilde(n: int) -> PlumbingGraph:
    """``n + 1`` spheres: a chain ``2..n-2`` with two leaves at each end."""
    if n < 4:
        raise DomainError("D-tilde needs n >= 4")
    if n == 4:
        return PlumbingGraph.from_edges(5, [(4, i) for i in range(4)])
    chain = list(range(2, n - 1))
    edges = [(a, b) for a, b in zip(chain, chain[1:])]
    edges += [(0, chain[0]), (1, chain[0]), (n - 1, chain[-1]), (n, chain[-1])]
    return PlumbingGraph.from_edges(n + 1, edges)


def etilde(n: int) -> PlumbingGraph:
    arms = {6: (2, 2, 2), 7: (1, 3, 3), 8: (1, 2, 5)}[n]
    edges, nxt = [], 1
    for length in arms:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
    return PlumbingGraph.from_edges(nxt, edges)


# ---------------------------------------------------------------------------
# equivariant plumbing weights
# ---------------------------------------------------------------------------

SEW: IntMatrix = ((-1, 0), (2, 1))
SWAP: IntMatrix = ((0, 1), (1, 0))


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def apply(m: IntMatrix, vec: tuple[int, int]) -> tuple[int, int]:
    return m[0][0] * vec[0] + m[0][1] * vec[1], m[1][0] * vec[0] + m[1][1] * vec[1]


def chain_transfer(i: int) -> IntMatrix:
    """Weights on the far side of sphere ``i`` in terms of the first sphere's near side."""
    if i < 1:
        raise DomainError("chain index starts at 1")
    return ((-i, 1 - i), (i + 1, i))


def dtilde_transfer(i: int) -> IntMatrix:
    """Same recursion indexed from a seed sphere ``v_0``."""
    if i < 0:
        raise DomainError("D-tilde chain index starts at 0")
    return ((-(i + 1), -i), (i + 2, i + 1))


def chain_transfer_stepwise(i: int) -> IntMatrix:
    """``chain_transfer`` rebuilt by composing one sewing and one swap per sphere."""
    if i < 1:
        raise DomainError("chain index starts at 1")
    m = SEW
    step = matmul(SWAP, SEW)
    for _ in range(i - 1):
        m = matmul(m, step)
    return m


def fixed_chain_weights(count: int, p: int | None = None) -> list[tuple[int, int]]:
    """Tangent weights at the far side of spheres ``2..count+1`` of a chain whose first sphere is fixed.

    Seeded with ``(u, v) = (0, 1)``; reduced mod ``p`` when given.
    """
    out = []
    for i in range(2, count + 2):
        u, v = apply(chain_transfer(i), (0, 1))
        out.append((u % p, v % p) if p else (u, v))
    return out


def dtilde_congruence(n: int, p: int) -> bool:
    """Whether a fixed sphere at the end of the ``D-tilde_n`` chain is compatible with ``Z_p``.

    Seeds the first chain sphere as fixed, ``(u, v) = (0, 1)``, runs the
    recursion across ``n - 4`` spheres and asks for the last weight ``u`` to
    vanish mod ``p``.
    """
    p = prime_order(p)
    if n < 4:
        raise DomainError("D-tilde needs n >= 4")
    u, _ = apply(dtilde_transfer(n - 4), (0, 1))
    return u % p == 0


def atilde_fixed_congruence(seed: tuple[int, int], k: int, p: int) -> bool:
    """Closing a cycle of ``k`` spheres: ``k (u + v) = 0 mod p``.

    Also evaluated by carrying the seed around the cycle with the transfer
    matrix and the final swap; the two must agree.
    """
    p = prime_order(p)
    u, v = seed
    closed = (k * (u + v)) % p == 0
    back = apply(SWAP, apply(chain_transfer(k), seed))
    composed = (back[0] - u) % p == 0 and (back[1] - v) % p == 0
    if closed != composed:
        raise ConsistencyError(f"cycle closure disagrees for seed {seed}, k={k}, p={p}")
    return closed


def _sequence_consistent(seq: Sequence[int], p: int) -> bool:
    k = len(seq)
    primes = []
    for i in range(k):
        prev = seq[i - 1]
        if prev % p == 0:
            return False
        primes.append(pow(prev, -1, p))
    for i in range(k):
        if (2 + primes[i] + seq[i]) % p:
            return False
    seed = (1, primes[0])
    for i in range(1, k + 1):
        u, v = apply(chain_transfer(i), seed)
        if (v - u * seq[i - 1]) % p:
            return False
    return True


def atilde_rotation_sequences(p: int, k: int, bound: int | None = None) -> list[tuple[int, ...]]:
    """Cyclic rotation-number sequences ``m_1..m_k`` on a cycle of non-fixed spheres.

    Constraints: ``m'_i m_{i-1} = 1``, ``(1 + m'_i) + (1 + m_i) = 0`` on each
    sphere, and ``v_{i,2} = u_{i,2} m_i`` along the transfer recursion seeded
    with ``(1, m'_1)``, all mod ``p``.  The sphere relation determines each
    term from the previous one, so the search runs over the starting value.
    """
    p = prime_order(p)
    if p < 3:
        raise DomainError("rotation sequences need p >= 3")
    bound = 4 * p if bound is None else bound
    if k < 1 or k > bound:
        raise DomainError(f"cycle length {k} outside 1..{bound}")
    out = []
    for start in range(1, p):
        seq, prev = [], start
        for _ in range(k):
            m = (-2 - pow(prev, -1, p)) % p
            if m == 0:
                break
            seq.append(m)
            prev = m
        if len(seq) == k and seq[-1] == start and _sequence_consistent(seq, p):
            out.append(tuple(seq))
    return sorted(out)


def rotation_sequence_candidates(seq: Sequence[int], p: int) -> bool:
    """Whether an arbitrary sequence passes every constraint (for exhaustive search)."""
    if any(m % p == 0 for m in seq):
        return False
    return _sequence_consistent(seq, p)
