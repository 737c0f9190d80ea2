"""The weighted fan trop(M_{0,Gamma}), balancing, and the embedding test.

The fan is the image of the full tropical moduli fan under the coordinate
projection. Every cone of the full fan is pushed forward, zero rays are
dropped, and the image is recorded by its extremal rays together with the
graphically stable strata that produced it.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .boundary import BoundaryComplex, enumerate_complex
from .errors import DimensionTooLarge, NotPure, UnstableTree
from .graphs import StabilityGraph, complete_graph, format_graph, is_complete_multipartite
from .lattice import (
    cone_contains,
    extremal_generators,
    in_span,
    nullspace,
    primitive,
    primitive_normal,
    rank,
    relative_interior_coefficients,
)
from .trees import MetricTree, NestedFamily, divisor_key, is_gamma_stable_tree, set_key, stabilize_family
from .valuation import CoordinateFrame, injectivity_report, pi_gamma, projected_image

MAX_FACE_CHECK_N = 7


@dataclass
class WeightedFan:
    """Simplicial fan with weights on its maximal cones.

    ``cones`` holds the maximal cones and all their faces, each a sorted
    tuple of ray indices. ``image_cones`` maps every cone that is the image
    of some stratum to its dimension, and ``provenance`` maps it to those
    strata. For graphs that are not complete multipartite an image cone can
    sit inside a maximal cone without being one of its faces. ``merges``
    lists maximal cones hit by more than one top-dimensional stratum
    (weights are not summed there).
    """

    ambient_dim: int
    rays: list
    cones: list
    weights: dict
    provenance: dict = field(default_factory=dict)
    image_cones: dict = field(default_factory=dict)
    merges: list = field(default_factory=list)
    ray_sources: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return max((len(c) for c in self.cones), default=0)

    def maximal_cones(self) -> list[tuple]:
        return sorted(self.weights)

    def cone_rays(self, cone) -> list[tuple]:
        return [self.rays[i] for i in cone]

    def locate(self, point) -> Optional[tuple]:
        """The cone whose relative interior contains ``point`` (``()`` for the origin)."""
        if not any(point):
            return ()
        for cone in sorted(set(self.cones) | set(self.image_cones), key=lambda c: (len(c), c)):
            if relative_interior_coefficients(self.cone_rays(cone), point) is not None:
                return cone
        return None

    def to_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "rays": [list(r) for r in self.rays],
            "cones": [list(c) for c in self.cones],
            "image_cones": [list(c) for c in self.image_cones],
            "maximal_cones": [list(c) for c in self.maximal_cones()],
            "weights": [self.weights[c] for c in self.maximal_cones()],
            "provenance": {
                ",".join(map(str, c)): [F.as_lists() for F in fams] for c, fams in sorted(self.provenance.items())
            },
            "ray_sources": [[list(set_key(I)) for I in self.ray_sources.get(i, [])] for i in range(len(self.rays))],
            "merged": [list(c) for c in self.merges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        """One ray per line, then one maximal cone per line (ray indices and weight)."""
        lines = [f"# rays {len(self.rays)} ambient {self.ambient_dim}"]
        lines += [" ".join(map(str, r)) for r in self.rays]
        lines.append(f"# maximal cones {len(self.weights)}")
        lines += [" ".join(map(str, c)) + f" : {self.weights[c]}" for c in self.maximal_cones()]
        return "\n".join(lines) + "\n"


def _image_cone(vectors: list[tuple], ray_index: dict) -> tuple[tuple, int]:
    distinct = sorted({primitive(v) for v in vectors if any(v)})
    if not distinct:
        return (), 0
    d = rank(distinct)
    keep = range(len(distinct)) if d == len(distinct) else extremal_generators(distinct)
    return tuple(sorted(ray_index[distinct[i]] for i in keep)), d


@lru_cache(maxsize=8)
def _full_complex(n: int) -> BoundaryComplex:
    return enumerate_complex(complete_graph(n))


def build_trop_fan(G: StabilityGraph, full: Optional[BoundaryComplex] = None) -> WeightedFan:
    """Push the full moduli fan through the projection onto the frame of ``G``.

    Every top-dimensional image cone gets weight 1.
    """
    full = full or _full_complex(G.n)
    frame = CoordinateFrame.of(G)
    rays: list[tuple] = []
    ray_index: dict[tuple, int] = {}
    ray_sources: dict[int, list] = {}
    image = {}
    for I in full.divisors:
        v = projected_image(I, G)
        image[I] = v
        if not any(v):
            continue
        r = primitive(v)
        if r not in ray_index:
            ray_index[r] = len(rays)
            rays.append(r)
        ray_sources.setdefault(ray_index[r], []).append(I)

    prov: dict[tuple, set] = {}
    top: dict[tuple, set] = {}
    cone_dim: dict[tuple, int] = {}
    for F in full.all_cells():
        cone, d = _image_cone([image[I] for I in F.sets], ray_index)
        if not cone:
            continue
        stable = stabilize_family(F, G)
        prov.setdefault(cone, set()).add(stable)
        cone_dim[cone] = d
        if d == len(stable) == G.n - 3:
            top.setdefault(cone, set()).add(stable)

    dim = max(cone_dim.values(), default=0)
    maximal = sorted(c for c, d in cone_dim.items() if d == dim)
    cones = set()
    for c in maximal:
        for k in range(1, len(c) + 1):
            cones.update(itertools.combinations(c, k))
    return WeightedFan(
        ambient_dim=frame.dim,
        rays=rays,
        cones=sorted(cones, key=lambda c: (len(c), c)),
        weights={c: 1 for c in maximal},
        image_cones=dict(sorted(cone_dim.items())),
        provenance={c: sorted(fams, key=lambda F: [divisor_key(s) for s in F.sets]) for c, fams in prov.items()},
        merges=sorted(c for c, fams in top.items() if len(fams) > 1),
        ray_sources=ray_sources,
    )


# -- balancing ----------------------------------------------------------------------------


@dataclass(frozen=True)
class BalancingEntry:
    tau: tuple
    contributions: tuple  # (sigma, weight, normal)
    residual: tuple
    passed: bool


@dataclass(frozen=True)
class BalancingCertificate:
    entries: tuple
    balanced: bool

    def failures(self) -> list[BalancingEntry]:
        return [e for e in self.entries if not e.passed]

    def to_dict(self) -> dict:
        return {
            "balanced": self.balanced,
            "codim1_cones": len(self.entries),
            "entries": [
                {
                    "tau": list(e.tau),
                    "sigmas": [[list(s), w, list(u)] for s, w, u in e.contributions],
                    "residual": [str(x) for x in e.residual],
                    "pass": e.passed,
                }
                for e in self.entries
            ],
        }


def check_balanced(fan: WeightedFan) -> BalancingCertificate:
    """Weighted sum of primitive normals around every codimension-one cone.

    The residual must lie in the span of the codimension-one cone; this is
    decided exactly.

    Raises:
        NotPure: some cone is not a face of a top-dimensional cone.
    """
    maximal = fan.maximal_cones()
    dim = fan.dim
    if any(len(c) != dim for c in maximal):
        raise NotPure("maximal cones of different dimensions")
    for c in fan.image_cones:
        if not any(set(c) <= set(m) for m in maximal) and not any(
            all(cone_contains(fan.cone_rays(m), r) for r in fan.cone_rays(c)) for m in maximal
        ):
            raise NotPure(f"image cone {c} lies in no maximal cone")
    taus = sorted({t for m in maximal for t in itertools.combinations(m, dim - 1)})
    entries = []
    for tau in taus:
        tau_rays = fan.cone_rays(tau)
        contribs = []
        residual = [0] * fan.ambient_dim
        for sigma in maximal:
            if not set(tau) <= set(sigma):
                continue
            u = primitive_normal(fan.cone_rays(sigma), tau_rays)
            w = fan.weights[sigma]
            contribs.append((sigma, w, u))
            residual = [a + w * b for a, b in zip(residual, u)]
        ok = in_span(residual, tau_rays)
        entries.append(BalancingEntry(tau, tuple(contribs), tuple(residual), ok))
    return BalancingCertificate(tuple(entries), all(e.passed for e in entries))


# -- embedding ----------------------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingReport:
    vertex_injective: bool
    dim_preserving: bool
    face_compatible: Optional[bool]
    is_embedding: bool
    failures: tuple = ()

    def to_dict(self) -> dict:
        return {
            "vertexInjective": self.vertex_injective,
            "dimPreserving": self.dim_preserving,
            "faceCompatible": self.face_compatible,
            "isEmbedding": self.is_embedding,
        }


def _cell_gens(F: NestedFamily, G: StabilityGraph) -> list[tuple]:
    return [pi_gamma(I, G) for I in F.sets]


def _same_cone(A: list, B: list) -> bool:
    return all(cone_contains(B, a) for a in A) and all(cone_contains(A, b) for b in B)


def _simplicial_overlap(a_only: list, b_only: list, shared: list) -> bool:
    """Whether simplicial cones on ``a_only + shared`` and ``b_only + shared`` meet
    outside ``cone(shared)``.

    With each cone's generators independent this happens exactly when some
    nonzero nonnegative combination of ``a_only`` equals one of ``b_only``
    modulo ``span(shared)``, i.e. when the space ``L`` of such relations
    meets the nonnegative orthant. Every nonnegative vector of ``L`` is a
    conformal sum of elementary vectors (the lines cut out of ``L`` by
    zeroing ``dim L - 1`` coordinates), so checking those suffices.
    """
    free = a_only + [tuple(-x for x in v) for v in b_only]
    f = len(free)
    if rank(free + shared) == f + len(shared):
        return False
    cols = free + shared
    basis = [b[:f] for b in nullspace([[c[i] for c in cols] for i in range(len(cols[0]))], len(cols))]
    m = len(basis)
    for zeros in itertools.combinations(range(f), m - 1):
        line = nullspace([[b[z] for b in basis] for z in zeros], m) if zeros else [[1]]
        if len(line) != 1:
            continue
        z = [sum(c * b[i] for c, b in zip(line[0], basis)) for i in range(f)]
        if all(x >= 0 for x in z) or all(x <= 0 for x in z):
            return True
    return False


def _elementary_sign_vectors(cols: tuple) -> list[list[Fraction]]:
    """Nonnegative elementary vectors of ``{x : sum x_i cols[i] = 0}``, up to scaling."""
    N = len(cols)
    basis = nullspace([[c[i] for c in cols] for i in range(len(cols[0]))], N)
    m = len(basis)
    out = []
    if not m:
        return out
    for zeros in itertools.combinations(range(N), m - 1):
        line = nullspace([[b[z] for b in basis] for z in zeros], m) if zeros else [[1]]
        if len(line) != 1:
            continue
        z = [sum(c * b[i] for c, b in zip(line[0], basis)) for i in range(N)]
        if all(x <= 0 for x in z):
            z = [-x for x in z]
        if all(x >= 0 for x in z) and z not in out:
            out.append(z)
    return out


def _improper_meet(A: list, B: list, face: list) -> bool:
    """Whether ``cone(A)`` and ``cone(B)`` share a point outside ``cone(face)``.

    The intersection is the image of the pointed cone of nonnegative
    relations ``A @ x = B @ y``, whose extreme rays are its elementary vectors.
    """
    if not A or not B:
        return False
    cols = tuple(A) + tuple(tuple(-x for x in v) for v in B)
    for z in _elementary_sign_vectors(cols):
        point = [sum(c * a[i] for c, a in zip(z, A)) for i in range(len(A[0]))]
        if not cone_contains(face, point):
            return True
    return False


def embedding_report(G: StabilityGraph, level: str = "full", complex_: Optional[BoundaryComplex] = None) -> EmbeddingReport:
    """Decide whether the valuation map embeds the boundary complex as a fan.

    ``level="full"`` always runs the face-compatibility check. ``"quick"``
    skips it (reporting ``None``) once injectivity on rays or dimension
    preservation has already failed.

    Raises:
        DimensionTooLarge: ``n`` above the supported bound.
    """
    if G.n > MAX_FACE_CHECK_N:
        raise DimensionTooLarge(f"embedding check supports n <= {MAX_FACE_CHECK_N}")
    if level not in ("quick", "full"):
        raise ValueError(f"unknown level {level!r}")
    cx = complex_ or enumerate_complex(G)
    vi = injectivity_report(G).injective
    failures = []
    dp = True
    for F in cx.all_cells():
        if F.sets and rank(_cell_gens(F, G)) != len(F):
            dp = False
            failures.append(("dimension", F.as_lists()))
    fc: Optional[bool] = None
    if level == "full" or (vi and dp):
        fc = True
        maximal = cx.maximal_cells()
        gens = {F: _cell_gens(F, G) for F in maximal}
        for F1, F2 in itertools.combinations(maximal, 2):
            shared = F1.subfamily(set(F1.sets) & set(F2.sets))
            face = _cell_gens(shared, G)
            if dp:
                bad = _simplicial_overlap(
                    _cell_gens(F1.subfamily(set(F1.sets) - set(F2.sets)), G),
                    _cell_gens(F2.subfamily(set(F2.sets) - set(F1.sets)), G),
                    face,
                )
            else:
                bad = _improper_meet(gens[F1], gens[F2], face)
            if bad:
                fc = False
                failures.append(("face", F1.as_lists(), F2.as_lists()))
                if level == "quick":
                    break
    return EmbeddingReport(vi, dp, fc, bool(vi and dp and fc), tuple(failures))


# -- metric trees into the fan -------------------------------------------------------------


def trop_embed(M: MetricTree, G: StabilityGraph) -> tuple[Fraction, ...]:
    """Sum over bounded edges of length times the valuation vector of the edge's cut.

    Raises:
        UnstableTree: the tree is not graphically stable.
    """
    if not is_gamma_stable_tree(M.tree, G):
        raise UnstableTree("stabilize the tree before embedding it")
    out = [Fraction(0)] * CoordinateFrame.of(G).dim
    for I, ell in M.edge_sets():
        out = [a + ell * b for a, b in zip(out, pi_gamma(I, G))]
    return tuple(out)


def fan_summary(G: StabilityGraph, fan: WeightedFan, cx: BoundaryComplex) -> dict:
    return {
        "graph": format_graph(G),
        "rays": len(fan.rays),
        "maximal_cones": len(fan.weights),
        "divisors": len(cx.divisors),
        "maximal_cells": len(cx.maximal_cells()),
        "multipartite": is_complete_multipartite(G) is not None,
    }
