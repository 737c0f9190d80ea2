"""Boundary divisors and the boundary complex of the graphically stable space."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .graphs import StabilityGraph, complete_graph, format_graph
from .trees import NestedFamily, compatible, divisor_key, is_gamma_stable_family, set_key


def enumerate_divisors(G: StabilityGraph) -> list[frozenset]:
    """All ``I`` in ``2..n`` with ``2 <= |I| <= n-2`` spanning an edge of ``G``.

    Ordered by size, then lexicographically.
    """
    labels = range(2, G.n + 1)
    out = []
    for k in range(2, G.n - 1):
        for combo in itertools.combinations(labels, k):
            if G.spans_edge(combo):
                out.append(frozenset(combo))
    out.sort(key=divisor_key)
    return out


@dataclass(frozen=True)
class BoundaryComplex:
    """Simplicial complex of divisors and their nonempty intersections.

    ``cells[k]`` lists the nested families with ``k`` members (``cells[0]``
    is the empty family, the open stratum).
    """

    graph: StabilityGraph
    divisors: tuple
    cells: dict = field(hash=False)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def dimension(self) -> int:
        return self.graph.n - 3

    @property
    def f_vector(self) -> list[int]:
        return [len(self.cells.get(k, ())) for k in range(self.dimension + 1)]

    def all_cells(self) -> list[NestedFamily]:
        return [F for k in sorted(self.cells) for F in self.cells[k]]

    def maximal_cells(self) -> list[NestedFamily]:
        cellset = self.all_cells()
        members = [frozenset(F.sets) for F in cellset]
        return [F for F, m in zip(cellset, members) if not any(m < o for o in members)]

    def one_skeleton(self) -> list[tuple[frozenset, frozenset]]:
        return [tuple(F.sets) for F in self.cells.get(2, [])]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "graph": format_graph(self.graph),
            "divisors": [list(set_key(d)) for d in self.divisors],
            "cells": {str(k): [F.as_lists() for F in self.cells[k]] for k in sorted(self.cells) if k > 0},
            "f_vector": self.f_vector,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dot(self) -> str:
        """DOT source for the 1-skeleton."""
        name = lambda s: '"{' + ",".join(map(str, set_key(s))) + '}"'
        lines = ["graph boundary {"]
        lines += [f"  {name(d)};" for d in self.divisors]
        lines += [f"  {name(a)} -- {name(b)};" for a, b in self.one_skeleton()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def _families(divisors: list[frozenset]):
    """Depth-first generation of pairwise compatible subsets, ascending index."""
    compat = [[compatible(a, b) for b in divisors] for a in divisors]

    def extend(chosen, start):
        yield chosen
        for k in range(start, len(divisors)):
            if all(compat[k][c] for c in chosen):
                yield from extend(chosen + [k], k + 1)

    yield from extend([], 0)


def enumerate_complex(G: StabilityGraph) -> BoundaryComplex:
    divisors = enumerate_divisors(G)
    cells: dict[int, list[NestedFamily]] = {k: [] for k in range(G.n - 2)}
    for idx in _families(divisors):
        F = NestedFamily(G.n, tuple(divisors[k] for k in idx))
        cells[len(F)].append(F)
    for k in cells:
        cells[k].sort(key=lambda F: [divisor_key(s) for s in F.sets])
    return BoundaryComplex(G, tuple(divisors), cells)


def filtered_complex_cells(G: StabilityGraph) -> set[NestedFamily]:
    """Independent route: all strata of the full space, kept if graphically stable."""
    full = enumerate_complex(complete_graph(G.n))
    return {F for F in full.all_cells() if is_gamma_stable_family(F, G)}


def stratum_divisors(F: NestedFamily) -> list[frozenset]:
    """The divisors whose intersection is the stratum of ``F``."""
    return list(F.sets)
