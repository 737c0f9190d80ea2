"""Divisorial valuations of the torus coordinates ``x_ij / x_23``.

The coordinate frame of a stability graph is its edge list minus ``{2,3}``
in lexicographic order. A divisor ``D_I`` is sent to the integer vector of
vanishing orders of the frame coordinates along it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .boundary import enumerate_divisors
from .errors import PairNotInFrame, UnstableDivisor
from .graphs import StabilityGraph, complete_graph
from .trees import divisor_key, set_key

PAIR_23 = (2, 3)


@dataclass(frozen=True)
class CoordinateFrame:
    pairs: tuple

    @classmethod
    def of(cls, G: StabilityGraph) -> "CoordinateFrame":
        return _frame(G)

    @property
    def dim(self) -> int:
        return len(self.pairs)

    def index(self, pair) -> int:
        p = tuple(sorted(pair))
        try:
            return self.pairs.index(p)
        except ValueError:
            raise PairNotInFrame(f"pair {p} is not a frame coordinate") from None

    def labels(self) -> list[str]:
        return [f"x{i}{j}" if max(i, j) < 10 else f"x{i}_{j}" for i, j in self.pairs]


@lru_cache(maxsize=None)
def _frame(G: StabilityGraph) -> CoordinateFrame:
    return CoordinateFrame(tuple(e for e in G.sorted_edges() if e != PAIR_23))


def _check_divisor(I, G: StabilityGraph) -> frozenset:
    I = frozenset(I)
    if not (I <= set(G.vertices) and 2 <= len(I) <= G.n - 2 and G.spans_edge(I)):
        raise UnstableDivisor(f"{sorted(I)} is not a divisor for {G}")
    return I


def ord(I: Iterable[int], pair, G: StabilityGraph) -> int:
    """Order of vanishing of ``x_pair / x_23`` along ``D_I``.

    ``+1`` when the pair lies in ``I`` and ``{2,3}`` does not, ``-1`` when
    ``{2,3}`` lies in ``I`` and the pair does not, ``0`` otherwise. "Lies in"
    means both elements are in ``I``.
    """
    CoordinateFrame.of(G).index(pair)
    I = frozenset(I)
    pair_in = set(pair) <= I
    base_in = set(PAIR_23) <= I
    if pair_in and not base_in:
        return 1
    if base_in and not pair_in:
        return -1
    return 0


def pi_gamma(I: Iterable[int], G: StabilityGraph) -> tuple[int, ...]:
    """Image of the divisor ``D_I`` in the cocharacter lattice.

    Raises:
        UnstableDivisor: ``I`` is not a divisor of the graphically stable space.
    """
    I = _check_divisor(I, G)
    return tuple(ord(I, p, G) for p in CoordinateFrame.of(G).pairs)


def pi_gamma_setsum(I: Iterable[int], G: StabilityGraph, reading: str = "not_both") -> tuple[int, ...]:
    """The closed-form set-sum version of :func:`pi_gamma`.

    Without ``{2,3}`` in ``I`` the vector is the sum of unit vectors of the
    frame pairs inside ``I``. With ``{2,3}`` in ``I`` it is minus the sum over
    frame pairs "outside" ``I``. ``reading`` selects what outside means:

    ``"not_both"``
        not both endpoints in ``I`` (agrees with the coordinatewise table);
    ``"both_outside"``
        both endpoints outside ``I`` (kept to document that it disagrees).
    """
    I = frozenset(I)
    frame = CoordinateFrame.of(G)
    v = [0] * frame.dim
    if not set(PAIR_23) <= I:
        for k, p in enumerate(frame.pairs):
            if set(p) <= I:
                v[k] += 1
    else:
        for k, p in enumerate(frame.pairs):
            if reading == "not_both":
                outside = not set(p) <= I
            elif reading == "both_outside":
                outside = not (set(p) & I)
            else:
                raise ValueError(f"unknown reading {reading!r}")
            if outside:
                v[k] -= 1
    return tuple(v)


def edge_vector(pair, G: StabilityGraph) -> tuple[int, ...]:
    """Image of a two-element divisor: a unit vector, or all ``-1`` for ``{2,3}``."""
    frame = CoordinateFrame.of(G)
    if tuple(sorted(pair)) == PAIR_23:
        return tuple([-1] * frame.dim)
    k = frame.index(pair)
    return tuple(int(i == k) for i in range(frame.dim))


def decompose_check(I: Iterable[int], G: StabilityGraph) -> bool:
    """Whether ``pi_gamma(I)`` is the sum of the edge vectors of ``G``-edges inside ``I``."""
    I = _check_divisor(I, G)
    total = [0] * CoordinateFrame.of(G).dim
    for e in G.induced_edges(I):
        total = [a + b for a, b in zip(total, edge_vector(e, G))]
    return tuple(total) == pi_gamma(I, G)


def proj_gamma(v: Sequence[int], G: StabilityGraph) -> tuple[int, ...]:
    """Forget the full-space frame coordinates whose pair is not an edge of ``G``."""
    full = CoordinateFrame.of(complete_graph(G.n))
    if len(v) != full.dim:
        raise ValueError(f"expected a vector of length {full.dim}, got {len(v)}")
    keep = CoordinateFrame.of(G).pairs
    return tuple(v[full.index(p)] for p in keep)


def pi_full(I: Iterable[int], n: int) -> tuple[int, ...]:
    """Valuation vector of ``D_I`` on the full space, in the complete-graph frame."""
    return pi_gamma(I, complete_graph(n))


def projected_image(I: Iterable[int], G: StabilityGraph) -> tuple[int, ...]:
    """``proj_gamma(pi_full(I))``; defined for every divisor of the full space."""
    return proj_gamma(pi_full(I, G.n), G)


@dataclass(frozen=True)
class InjectivityReport:
    injective: bool
    collisions: tuple  # groups of divisors (each a tuple of sorted tuples) sharing one vector
    vectors: tuple  # (divisor, vector) in divisor order

    def to_dict(self) -> dict:
        return {
            "injective": self.injective,
            "collisions": [[list(d) for d in grp] for grp in self.collisions],
        }


def injectivity_report(G: StabilityGraph) -> InjectivityReport:
    divs = enumerate_divisors(G)
    groups: dict[tuple, list[frozenset]] = {}
    pairs = []
    for I in divs:
        v = pi_gamma(I, G)
        groups.setdefault(v, []).append(I)
        pairs.append((set_key(I), v))
    collisions = tuple(
        tuple(set_key(I) for I in sorted(grp, key=divisor_key))
        for grp in groups.values()
        if len(grp) > 1
    )
    return InjectivityReport(not collisions, collisions, tuple(pairs))


def valuation_matrix(G: StabilityGraph) -> tuple[list[str], list[tuple], list[tuple[int, ...]]]:
    """Rows are divisors in enumeration order, columns the frame coordinates."""
    divs = enumerate_divisors(G)
    return CoordinateFrame.of(G).labels(), [set_key(I) for I in divs], [pi_gamma(I, G) for I in divs]


def matrix_tsv(G: StabilityGraph) -> str:
    cols, rows, vecs = valuation_matrix(G)
    lines = ["divisor\t" + "\t".join(cols)]
    for r, v in zip(rows, vecs):
        lines.append("{" + ",".join(map(str, r)) + "}\t" + "\t".join(map(str, v)))
    return "\n".join(lines) + "\n"


def matrix_json(G: StabilityGraph) -> str:
    cols, rows, vecs = valuation_matrix(G)
    return json.dumps({"columns": cols, "divisors": [list(r) for r in rows], "rows": [list(v) for v in vecs]},
                      sort_keys=True)
