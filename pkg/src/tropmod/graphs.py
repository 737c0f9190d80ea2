"""Stability graphs and complete multipartite recognition.

A stability graph lives on the vertex labels ``2..n`` (marking 1 is never a
vertex) and always contains the edge ``{2, 3}``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Optional

from .errors import (
    BadLabelRange,
    BoundExceeded,
    MissingEdge23,
    NotConnected,
    NotSimple,
    ParseError,
)

Edge = tuple[int, int]

MAX_ENUMERATION_N = 7


def _norm_edge(e) -> Edge:
    i, j = e
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class StabilityGraph:
    """A validated stability graph. Immutable; construct via :func:`validate_graph`."""

    n: int
    edges: frozenset = field(repr=False)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(range(2, self.n + 1))

    @property
    def removed_count(self) -> int:
        """Number of edges removed from ``K_{n-1}`` to obtain this graph."""
        return comb(self.n - 1, 2) - len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return _norm_edge((i, j)) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def neighbors(self, v: int) -> set[int]:
        return {j if i == v else i for i, j in self.edges if v in (i, j)}

    def spans_edge(self, labels: Iterable[int]) -> bool:
        """True iff some edge of the graph has both ends in ``labels``."""
        s = set(labels)
        return any(i in s and j in s for i, j in self.edges)

    def induced_edges(self, labels: Iterable[int]) -> list[Edge]:
        s = set(labels)
        return sorted(e for e in self.edges if e[0] in s and e[1] in s)

    def is_supergraph_of(self, other: "StabilityGraph") -> bool:
        return self.n == other.n and other.edges <= self.edges

    def to_spec(self) -> str:
        return format_graph(self)

    def __str__(self) -> str:
        return format_graph(self)


def validate_graph(n: int, edges: Iterable) -> StabilityGraph:
    """Check the stability-graph conventions and return the graph.

    Raises:
        BadLabelRange: ``n < 4`` or an endpoint outside ``2..n``.
        NotSimple: a loop or a repeated edge.
        MissingEdge23: ``{2, 3}`` is absent.
        NotConnected: the graph on ``2..n`` is disconnected.
    """
    if not isinstance(n, int) or n < 4:
        raise BadLabelRange(f"n must be an integer >= 4, got {n!r}")
    seen: set[Edge] = set()
    for e in edges:
        try:
            i, j = e
        except (TypeError, ValueError):
            raise NotSimple(f"edge {e!r} is not a pair") from None
        if i == j:
            raise NotSimple(f"loop at vertex {i}")
        for v in (i, j):
            if not isinstance(v, int) or not 2 <= v <= n:
                raise BadLabelRange(f"vertex {v!r} outside 2..{n}")
        ne = _norm_edge((i, j))
        if ne in seen:
            raise NotSimple(f"repeated edge {ne[0]}-{ne[1]}")
        seen.add(ne)
    if (2, 3) not in seen:
        raise MissingEdge23("edge 2-3 is required")
    if not _connected(range(2, n + 1), seen):
        raise NotConnected("graph on 2..n is not connected")
    return StabilityGraph(n, frozenset(seen))


def complete_graph(n: int) -> StabilityGraph:
    return validate_graph(n, itertools.combinations(range(2, n + 1), 2))


def _connected(vertices: Iterable[int], edges: Iterable[Edge]) -> bool:
    vertices = list(vertices)
    if not vertices:
        return True
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    stack, seen = [vertices[0]], {vertices[0]}
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == len(vertices)


# -- multipartite recognition ------------------------------------------------
#
# The three routes below work on arbitrary (vertices, edges) so they can be
# reused on the factor graphs of boundary strata, which do not follow the
# 2..n labelling convention.


@dataclass(frozen=True)
class MultipartitePartition:
    parts: tuple[tuple[int, ...], ...]

    def edges(self) -> frozenset:
        """Rebuild the complete multipartite edge set."""
        out = set()
        for p, q in itertools.combinations(self.parts, 2):
            for i in p:
                for j in q:
                    out.add(_norm_edge((i, j)))
        return frozenset(out)

    def as_lists(self) -> list[list[int]]:
        return [list(p) for p in self.parts]


def complement_components(vertices: Iterable[int], edges: Iterable[Edge]) -> list[tuple[int, ...]]:
    vertices = sorted(vertices)
    es = {_norm_edge(e) for e in edges}
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in itertools.combinations(vertices, 2):
        if (i, j) not in es:
            parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for v in vertices:
        groups.setdefault(find(v), []).append(v)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def multipartite_parts(vertices: Iterable[int], edges: Iterable[Edge]) -> Optional[MultipartitePartition]:
    """Complement components, if each one is a clique of the complement."""
    es = {_norm_edge(e) for e in edges}
    comps = complement_components(vertices, es)
    for comp in comps:
        for i, j in itertools.combinations(comp, 2):
            if (i, j) in es:
                return None
    return MultipartitePartition(tuple(comps))


def one_edge_triple(vertices: Iterable[int], edges: Iterable[Edge]) -> Optional[tuple[int, int, int]]:
    """First triple (i, j, k) whose induced subgraph is exactly the edge ``ij``."""
    es = {_norm_edge(e) for e in edges}
    for i, j in sorted(es):
        for k in sorted(vertices):
            if k in (i, j):
                continue
            if _norm_edge((i, k)) not in es and _norm_edge((j, k)) not in es:
                return (i, j, k)
    return None


def covers_neighbors(vertices: Iterable[int], edges: Iterable[Edge]) -> bool:
    es = {_norm_edge(e) for e in edges}
    vs = list(vertices)
    for i, j in es:
        for k in vs:
            if k in (i, j):
                continue
            if _norm_edge((i, k)) not in es and _norm_edge((j, k)) not in es:
                return False
    return True


def is_complete_multipartite(G: StabilityGraph) -> Optional[MultipartitePartition]:
    """Return the multipartite parts of ``G``, or ``None`` if it is not complete multipartite."""
    return multipartite_parts(G.vertices, G.edges)


def multipartite_witness(G: StabilityGraph) -> Optional[tuple[int, int, int]]:
    """A triple ``(i, j, k)`` with ``ij`` an edge and ``ik``, ``jk`` non-edges, else ``None``."""
    return one_edge_triple(G.vertices, G.edges)


def neighbor_cover_check(G: StabilityGraph) -> bool:
    return covers_neighbors(G.vertices, G.edges)


def enumerate_stability_graphs(n: int) -> Iterator[StabilityGraph]:
    """Yield every stability graph on ``2..n`` exactly once.

    Order is deterministic: bitmasks over the optional pairs (lexicographic
    pair order, lowest pair = least significant bit), counting upward.
    """
    if n < 4 or n > MAX_ENUMERATION_N:
        raise BoundExceeded(f"enumeration supports 4 <= n <= {MAX_ENUMERATION_N}, got {n}")
    optional = [p for p in itertools.combinations(range(2, n + 1), 2) if p != (2, 3)]
    vertices = range(2, n + 1)
    for mask in range(1 << len(optional)):
        edges = {(2, 3)}
        edges.update(p for b, p in enumerate(optional) if mask >> b & 1)
        if _connected(vertices, edges):
            yield StabilityGraph(n, frozenset(edges))


# -- text format ---------------------------------------------------------------

_SPEC_RE = re.compile(r"^n\s*=\s*(\d+)\s*;\s*edges\s*=\s*(.*)$", re.S)


def parse_graph(spec: str) -> StabilityGraph:
    """Parse ``n=<int>;edges=<i>-<j>,...`` (whitespace tolerant) and validate."""
    m = _SPEC_RE.match(spec.strip())
    if not m:
        raise ParseError(f"cannot parse graph spec {spec!r}")
    n = int(m.group(1))
    body = m.group(2).strip().rstrip(",")
    edges = []
    if body:
        for tok in body.split(","):
            tok = tok.strip()
            em = re.fullmatch(r"(\d+)\s*-\s*(\d+)", tok)
            if not em:
                raise ParseError(f"bad edge token {tok!r}")
            edges.append((int(em.group(1)), int(em.group(2))))
    return validate_graph(n, edges)


def format_graph(G: StabilityGraph) -> str:
    return f"n={G.n};edges=" + ",".join(f"{i}-{j}" for i, j in G.sorted_edges())
