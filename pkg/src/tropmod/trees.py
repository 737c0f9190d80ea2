"""Dual trees of stable curves, nested families, and graphic stabilization.

A boundary stratum is stored canonically as a :class:`NestedFamily`: the
set of index sets ``I`` (``1 not in I``) cut off by its bounded edges. The
equivalent :class:`MarkedTree` is built on demand.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InvalidFamily, InvalidTree, ParseError
from .graphs import StabilityGraph


def set_key(s: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(s))


def divisor_key(s: Iterable[int]) -> tuple:
    """Size-then-lexicographic order used for divisor lists."""
    t = set_key(s)
    return (len(t), t)


def compatible(a: frozenset, b: frozenset) -> bool:
    """Two index sets are compatible iff they are nested or disjoint."""
    return a <= b or b <= a or not (a & b)


@dataclass(frozen=True)
class NestedFamily:
    """A laminar family of index sets inside ``{2..n}``.

    ``sets`` is kept sorted lexicographically by the sorted tuple of each
    member, which makes equal families compare and hash equal.
    """

    n: int
    sets: tuple = ()

    def __post_init__(self):
        canon = tuple(sorted({frozenset(s) for s in self.sets}, key=set_key))
        object.__setattr__(self, "sets", canon)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, item) -> bool:
        return frozenset(item) in self.sets

    def as_lists(self) -> list[list[int]]:
        return [list(set_key(s)) for s in self.sets]

    def minimal_members(self) -> list[frozenset]:
        return [s for s in self.sets if not any(t < s for t in self.sets)]

    def subfamily(self, members: Iterable) -> "NestedFamily":
        return NestedFamily(self.n, tuple(members))

    def __str__(self) -> str:
        return format_family(self)


def validate_family(n: int, sets: Iterable[Iterable[int]]) -> NestedFamily:
    """Build a :class:`NestedFamily`, checking sizes, labels and nestedness.

    Raises:
        InvalidFamily: on any violated invariant.
    """
    members = []
    for s in sets:
        s = list(s)
        fs = frozenset(s)
        if len(fs) != len(s):
            raise InvalidFamily(f"repeated marking in {sorted(s)}")
        if not fs <= set(range(2, n + 1)):
            raise InvalidFamily(f"index set {sorted(fs)} not inside 2..{n}")
        if not 2 <= len(fs) <= n - 2:
            raise InvalidFamily(f"index set {sorted(fs)} must have size in [2, {n - 2}]")
        if fs in members:
            raise InvalidFamily(f"duplicate member {sorted(fs)}")
        members.append(fs)
    for a, b in itertools.combinations(members, 2):
        if not compatible(a, b):
            raise InvalidFamily(f"{sorted(a)} and {sorted(b)} are neither nested nor disjoint")
    if len(members) > n - 3:
        raise InvalidFamily(f"{len(members)} members exceed n-3 = {n - 3}")
    return NestedFamily(n, tuple(members))


def is_gamma_stable_family(F: NestedFamily, G: StabilityGraph) -> bool:
    """Every minimal member spans an edge of ``G``.

    Supersets of a spanning set span too, so this is the same as asking it
    of every member.
    """
    return all(G.spans_edge(s) for s in F.minimal_members())


# -- marked trees ----------------------------------------------------------------


@dataclass(frozen=True)
class MarkedTree:
    """A tree with bounded edges and legs labelled ``1..n``.

    Vertices are integers; ``legs[m]`` is the vertex carrying marking ``m``.
    """

    n: int
    vertices: tuple
    edges: frozenset
    legs: Mapping[int, int] = field(hash=False)

    @property
    def root(self) -> int:
        return self.legs[1]

    def incident(self, v: int) -> list[tuple[int, int]]:
        return [e for e in self.edges if v in e]

    def legs_at(self, v: int) -> list[int]:
        return sorted(m for m, w in self.legs.items() if w == v)

    def valence(self, v: int) -> int:
        return len(self.incident(v)) + len(self.legs_at(v))

    def adjacency(self) -> dict[int, set[int]]:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def side_markings(self, edge: tuple[int, int]) -> frozenset:
        """Markings on the side of ``edge`` away from the root."""
        u, v = edge
        adj = self.adjacency()
        # the far endpoint is the one whose component (edge removed) lacks the root
        comp = _component(adj, v, blocked=(u, v))
        if self.root in comp:
            comp = _component(adj, u, blocked=(u, v))
        return frozenset(m for m, w in self.legs.items() if w in comp)

    def far_vertex(self, edge: tuple[int, int]) -> int:
        u, v = edge
        comp = _component(self.adjacency(), v, blocked=(u, v))
        return u if self.root in comp else v

    def family(self) -> NestedFamily:
        return nested_family_from_tree(self)

    def same_type(self, other: "MarkedTree") -> bool:
        """Equality up to renaming vertices."""
        return self.n == other.n and self.family() == other.family()

    def validate(self) -> "MarkedTree":
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise InvalidTree("repeated vertex")
        for u, v in self.edges:
            if u not in vs or v not in vs or u == v:
                raise InvalidTree(f"bad edge {(u, v)}")
        if sorted(self.legs) != list(range(1, self.n + 1)):
            raise InvalidTree(f"legs must be exactly 1..{self.n}")
        if any(w not in vs for w in self.legs.values()):
            raise InvalidTree("leg attached to unknown vertex")
        if len(self.edges) != len(vs) - 1:
            raise InvalidTree("edge count is not |V| - 1")
        if vs and len(_component(self.adjacency(), next(iter(vs)))) != len(vs):
            raise InvalidTree("tree is disconnected")
        for v in vs:
            if self.valence(v) < 3:
                raise InvalidTree(f"vertex {v} has valence {self.valence(v)} < 3")
        return self


def _component(adj, start, blocked=None) -> set:
    seen, stack = {start}, [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if blocked and {v, w} == set(blocked):
                continue
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def make_tree(n: int, edges: Iterable, legs: Mapping[int, int]) -> MarkedTree:
    edges = frozenset(tuple(sorted(e)) for e in edges)
    vertices = sorted({w for e in edges for w in e} | set(legs.values()))
    return MarkedTree(n, tuple(vertices), edges, dict(legs)).validate()


def tree_from_nested_family(F: NestedFamily) -> MarkedTree:
    """The stable tree whose non-root edge cuts are the members of ``F``.

    Vertex 0 is the root; the k-th member of ``F`` (canonical order) is cut
    off by the edge into vertex ``k + 1``.
    """
    validate_family(F.n, F.sets)
    members = list(F.sets)
    vid = {s: k + 1 for k, s in enumerate(members)}

    def smallest_container(pred) -> int:
        cands = [s for s in members if pred(s)]
        if not cands:
            return 0
        return vid[min(cands, key=len)]

    edges = set()
    for s in members:
        parent = smallest_container(lambda t, s=s: s < t)
        edges.add(tuple(sorted((parent, vid[s]))))
    legs = {m: smallest_container(lambda t, m=m: m in t) for m in range(1, F.n + 1)}
    return make_tree(F.n, edges, legs)


def nested_family_from_tree(T: MarkedTree) -> NestedFamily:
    return NestedFamily(T.n, tuple(T.side_markings(e) for e in T.edges))


def is_gamma_stable_tree(T: MarkedTree, G: StabilityGraph) -> bool:
    """Every non-root vertex with one bounded edge carries two ``G``-adjacent legs."""
    for v in T.vertices:
        if v == T.root or len(T.incident(v)) != 1:
            continue
        if not G.spans_edge(T.legs_at(v)):
            return False
    return True


def extremal_assignment(T: MarkedTree, G: StabilityGraph) -> set[frozenset]:
    """Tails away from marking 1 whose markings span no edge of ``G``."""
    return {s for s in (T.side_markings(e) for e in T.edges) if not G.spans_edge(s)}


def contract_tail(T: MarkedTree, edge: tuple[int, int]) -> MarkedTree:
    """Collapse the subtree beyond ``edge`` onto its attachment vertex."""
    far = T.far_vertex(edge)
    near = edge[0] if edge[1] == far else edge[1]
    removed = _component(T.adjacency(), far, blocked=edge)
    edges = {e for e in T.edges if not (set(e) & removed)}
    legs = {m: (near if w in removed else w) for m, w in T.legs.items()}
    vertices = tuple(v for v in T.vertices if v not in removed)
    return MarkedTree(T.n, vertices, frozenset(edges), legs)


def assigned_edges(T: MarkedTree, G: StabilityGraph) -> list[tuple[int, int]]:
    return sorted(e for e in T.edges if not G.spans_edge(T.side_markings(e)))


def stabilize(T: MarkedTree, G: StabilityGraph, order=None) -> MarkedTree:
    """Contract every tail picked out by :func:`extremal_assignment`.

    Args:
        order: optional callable choosing which assigned edge to contract
            next from the sorted candidate list; defaults to the first one.
            The result does not depend on it.
    """
    pick = order or (lambda cands: cands[0])
    while True:
        cands = assigned_edges(T, G)
        if not cands:
            return T
        T = contract_tail(T, pick(cands))


def stabilize_family(F: NestedFamily, G: StabilityGraph) -> NestedFamily:
    return NestedFamily(F.n, tuple(s for s in F.sets if G.spans_edge(s)))


# -- metric trees and distance coordinates --------------------------------------------


@dataclass(frozen=True)
class MetricTree:
    tree: MarkedTree
    lengths: Mapping[tuple[int, int], Fraction] = field(hash=False)

    def __post_init__(self):
        fixed = {}
        for e, ell in self.lengths.items():
            ell = Fraction(ell)
            if ell <= 0:
                raise InvalidTree(f"edge {e} has non-positive length {ell}")
            fixed[tuple(sorted(e))] = ell
        if set(fixed) != set(self.tree.edges):
            raise InvalidTree("lengths must be given for exactly the bounded edges")
        object.__setattr__(self, "lengths", fixed)

    def edge_sets(self) -> list[tuple[frozenset, Fraction]]:
        return [(self.tree.side_markings(e), ell) for e, ell in sorted(self.lengths.items())]


def metric_tree_from_family(F: NestedFamily, lengths: Mapping) -> MetricTree:
    """Metric tree with ``lengths[I]`` on the edge cutting off ``I``."""
    T = tree_from_nested_family(F)
    by_set = {frozenset(k): Fraction(v) for k, v in lengths.items()}
    out = {}
    for e in T.edges:
        out[e] = by_set[T.side_markings(e)]
    return MetricTree(T, out)


@dataclass(frozen=True)
class DistanceVector:
    """Pairwise leg distances, compared modulo the image of ``x -> (x_i + x_j)``."""

    n: int
    entries: Mapping[tuple[int, int], Fraction] = field(hash=False)

    def __getitem__(self, pair) -> Fraction:
        i, j = pair
        return self.entries[(min(i, j), max(i, j))]

    def scaled(self, c) -> "DistanceVector":
        c = Fraction(c)
        return DistanceVector(self.n, {k: c * v for k, v in self.entries.items()})

    def equivalent(self, other: "DistanceVector") -> bool:
        diff = {k: self.entries[k] - other.entries[k] for k in self.entries}
        return in_phi_image(self.n, diff)

    def satisfies_four_point(self) -> bool:
        for i, j, k, l in itertools.combinations(range(1, self.n + 1), 4):
            sums = sorted([self[i, j] + self[k, l], self[i, k] + self[j, l], self[i, l] + self[j, k]])
            if sums[1] != sums[2]:
                return False
        return True


def in_phi_image(n: int, d: Mapping[tuple[int, int], Fraction]) -> bool:
    """Whether ``d`` equals ``(x_i + x_j)_{i<j}`` for some rational ``x``.

    For ``n >= 3`` the map is injective, and ``x_i`` is forced to be
    ``(d_ij + d_ik - d_jk) / 2``; we solve for it and check every pair.
    """
    x = {}
    for i in range(1, n + 1):
        j, k = [m for m in range(1, n + 1) if m != i][:2]
        get = lambda a, b: d[(min(a, b), max(a, b))]
        x[i] = (get(i, j) + get(i, k) - get(j, k)) / 2
    return all(d[(i, j)] == x[i] + x[j] for i, j in itertools.combinations(range(1, n + 1), 2))


def distance_vector(M: MetricTree) -> DistanceVector:
    T = M.tree
    adj = T.adjacency()
    out = {}
    for i, j in itertools.combinations(range(1, T.n + 1), 2):
        path = _path(adj, T.legs[i], T.legs[j])
        out[(i, j)] = sum((M.lengths[tuple(sorted(e))] for e in zip(path, path[1:])), Fraction(0))
    return DistanceVector(T.n, out)


def _path(adj, a, b) -> list:
    prev = {a: None}
    stack = [a]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in prev:
                prev[w] = v
                stack.append(w)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


# -- text / JSON formats -------------------------------------------------------------


def format_family(F: NestedFamily) -> str:
    return ";".join("{" + ",".join(map(str, set_key(s))) + "}" for s in F.sets)


def parse_family(text: str, n: int) -> NestedFamily:
    """Parse ``{3,4};{3,4,5}``. The empty string is the empty family."""
    text = text.strip()
    if not text:
        return validate_family(n, [])
    sets = []
    for tok in text.split(";"):
        tok = tok.strip()
        m = re.fullmatch(r"\{\s*([\d\s,]*)\}", tok)
        if not m:
            raise ParseError(f"bad index set {tok!r}")
        body = [p.strip() for p in m.group(1).split(",") if p.strip()]
        sets.append([int(p) for p in body])
    return validate_family(n, sets)


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def tree_to_json(T: MarkedTree | MetricTree) -> str:
    lengths = None
    if isinstance(T, MetricTree):
        lengths = T.lengths
        T = T.tree
    edges = sorted(T.edges)
    doc = {
        "n": T.n,
        "vertices": list(T.vertices),
        "edges": [list(e) for e in edges],
        "legs": {str(m): T.legs[m] for m in sorted(T.legs)},
    }
    if lengths is not None:
        doc["lengths"] = [_fmt_q(lengths[e]) for e in edges]
    return json.dumps(doc, sort_keys=True)


def tree_from_json(text: str) -> MarkedTree | MetricTree:
    try:
        doc = json.loads(text)
        n = int(doc["n"])
        edges = [tuple(sorted(e)) for e in doc["edges"]]
        legs = {int(k): int(v) for k, v in doc["legs"].items()}
        T = MarkedTree(n, tuple(doc["vertices"]), frozenset(edges), legs).validate()
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        if isinstance(exc, InvalidTree):
            raise
        raise ParseError(f"bad tree JSON: {exc}") from exc
    if "lengths" in doc:
        return MetricTree(T, {e: Fraction(s) for e, s in zip(edges, doc["lengths"])})
    return T
