"""Marked-point families over ``Q[t]``, their Plücker minors, and cross-ratio units.

A point of the projective line is a pair ``(x : y)`` of polynomials in the
formal parameter ``t``. The t-adic order of the minors ``x_ij`` gives the
tropical point of the family, which can then be compared with the fan.
Cross-ratio units are handled combinatorially from index sets.
"""
from __future__ import annotations

import ast
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    AmbiguousSplit,
    ConsistencyError,
    IdenticallyZeroCoordinate,
    InvalidFamily,
    MalformedMonomial,
    ParseError,
)
from .graphs import StabilityGraph, multipartite_parts
from .trees import NestedFamily, set_key, tree_from_nested_family
from .valuation import PAIR_23, CoordinateFrame


class Poly:
    """Univariate polynomial in ``t`` with :class:`~fractions.Fraction` coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Fraction] | None = None):
        self.coeffs = {int(k): Fraction(v) for k, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({0: c})

    @classmethod
    def t(cls) -> "Poly":
        return cls({1: 1})

    @staticmethod
    def _lift(other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.const(other)

    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._lift(other)
        out: dict[int, Fraction] = {}
        for (a, u), (b, v) in itertools.product(self.coeffs.items(), other.coeffs.items()):
            out[a + b] = out.get(a + b, 0) + u * v
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if not isinstance(e, int) or e < 0:
            raise ValueError("only nonnegative integer powers")
        out = Poly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return self.coeffs == self._lift(other).coeffs

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def ord(self) -> int:
        """Lowest exponent with a nonzero coefficient."""
        if not self.coeffs:
            raise IdenticallyZeroCoordinate("the zero polynomial has no order")
        return min(self.coeffs)

    def at(self, t0) -> Fraction:
        return sum((v * Fraction(t0) ** k for k, v in self.coeffs.items()), Fraction(0))

    def shift_down(self, k: int) -> "Poly":
        """Divide by ``t**k``; every exponent must stay nonnegative."""
        if self.coeffs and min(self.coeffs) < k:
            raise ValueError(f"t^{k} does not divide {self}")
        return Poly({e - k: v for e, v in self.coeffs.items()})

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in sorted(self.coeffs):
            v = self.coeffs[k]
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and v == 1:
                terms.append(mono)
            elif mono and v == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{v}" + (f"*{mono}" if mono else ""))
        return " + ".join(terms).replace("+ -", "- ")


# -- families --------------------------------------------------------------------------


@dataclass(frozen=True)
class PointFamily:
    """``n`` points ``(x_i(t) : y_i(t))``, indexed ``1..n``."""

    n: int
    points: tuple  # ((x, y), ...) in marking order

    def __post_init__(self):
        if len(self.points) != self.n:
            raise InvalidFamily(f"expected {self.n} points, got {len(self.points)}")
        for i, (x, y) in enumerate(self.points, start=1):
            if x.is_zero() and y.is_zero():
                raise InvalidFamily(f"point {i} is (0:0)")

    def point(self, i: int) -> tuple[Poly, Poly]:
        return self.points[i - 1]

    def normalized(self) -> "PointFamily":
        """Divide each point by the largest power of ``t`` dividing both coordinates."""
        out = []
        for x, y in self.points:
            k = min(p.ord() for p in (x, y) if not p.is_zero())
            out.append((x.shift_down(k), y.shift_down(k)))
        return PointFamily(self.n, tuple(out))

    def special_fiber(self) -> list[tuple[Fraction, Fraction]]:
        return [(x.at(0), y.at(0)) for x, y in self.normalized().points]


INFINITY = (Poly.const(1), Poly.const(0))

_IMPLICIT = re.compile(r"(\d|\))\s*(?=[t(])")
_LINE = re.compile(r"^\s*p(\d+)\s*=\s*(.+?)\s*$")


def _poly_from_ast(node) -> Poly:
    if isinstance(node, ast.Expression):
        return _poly_from_ast(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Poly.const(node.value)
    if isinstance(node, ast.Name) and node.id == "t":
        return Poly.t()
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        p = _poly_from_ast(node.operand)
        return -p if isinstance(node.op, ast.USub) else p
    if isinstance(node, ast.BinOp):
        left = _poly_from_ast(node.left)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ParseError("exponents must be integer literals")
            return left ** node.right.value
        right = _poly_from_ast(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if set(right.coeffs) - {0} or right.is_zero():
                raise ParseError("division only by nonzero constants")
            return left * Poly.const(1 / right.coeffs[0])
    raise ParseError(f"unsupported syntax in polynomial: {ast.dump(node)}")


def parse_poly(text: str) -> Poly:
    """Parse a polynomial in ``t`` such as ``1 + 2t - t^2/3``."""
    src = _IMPLICIT.sub(r"\1*", text.strip()).replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse polynomial {text!r}") from exc
    return _poly_from_ast(tree)


def parse_point(text: str) -> tuple[Poly, Poly]:
    text = text.strip()
    if text in ("inf", "oo", "∞"):
        return INFINITY
    if text.startswith("(") and text.endswith(")") and ":" in text:
        x, _, y = text[1:-1].partition(":")
        return parse_poly(x), parse_poly(y)
    return parse_poly(text), Poly.const(1)


def default_point(i: int) -> tuple[Poly, Poly]:
    """Filler for markings a family file leaves out: ``1`` goes to infinity, ``i`` to ``(100 i : 1)``."""
    return INFINITY if i == 1 else (Poly.const(100 * i), Poly.const(1))


def parse_family(text: str, n: Optional[int] = None) -> PointFamily:
    """Parse the family DSL: one ``p<i> = (x(t) : y(t))`` per line.

    A bare polynomial means ``(x(t) : 1)`` and ``inf`` means ``(1 : 0)``.
    An optional ``n = <int>`` line fixes the number of markings. Missing
    markings are filled by :func:`default_point`.
    """
    given: dict[int, tuple[Poly, Poly]] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"n\s*=\s*(\d+)", line)
        if m:
            n_file = int(m.group(1))
            if n is not None and n != n_file:
                raise InvalidFamily(f"family is for n={n_file}, graph has n={n}")
            n = n_file
            continue
        m = _LINE.match(line)
        if not m:
            raise ParseError(f"cannot parse family line {raw!r}")
        i = int(m.group(1))
        if i in given:
            raise InvalidFamily(f"point {i} given twice")
        given[i] = parse_point(m.group(2))
    if n is None:
        n = max(given, default=0)
    if any(i < 1 or i > n for i in given):
        raise InvalidFamily(f"point labels must lie in 1..{n}")
    return make_family(n, given)


def make_family(n: int, points: Mapping[int, tuple]) -> PointFamily:
    """Family from a partial map marking -> point; gaps use :func:`default_point`.

    A point is an ``(x, y)`` pair or a single value standing for ``(x : 1)``.

    Raises:
        InvalidFamily: two markings coincide identically.
    """
    pts = []
    for i in range(1, n + 1):
        pt = points.get(i, default_point(i))
        x, y = pt if isinstance(pt, tuple) else (pt, 1)
        pts.append((Poly._lift(x), Poly._lift(y)))
    Pf = PointFamily(n, tuple(pts))
    for (i, (xi, yi)), (j, (xj, yj)) in itertools.combinations(enumerate(Pf.points, 1), 2):
        if (xi * yj - xj * yi).is_zero():
            raise InvalidFamily(f"points {i} and {j} coincide for every t")
    return Pf


def format_family(Pf: PointFamily) -> str:
    return "".join(f"p{i} = ({x} : {y})\n" for i, (x, y) in enumerate(Pf.points, 1))


def degeneration_family(F: NestedFamily, lengths: Optional[Mapping] = None) -> PointFamily:
    """A family whose limit has dual tree ``F`` and whose edge speeds are ``lengths``.

    Marking 1 sits at infinity. Every other marking is a sum over the chain
    of members containing it, one term per vertex passed, each term an
    offset that separates siblings times ``t`` to the depth of that vertex.
    Two markings then differ first at the vertex where their paths split, so
    ``ord_t(x_ij)`` is the total length of the members containing both.
    """
    lengths = {frozenset(k): int(v) for k, v in (lengths or {}).items()}
    members = sorted(F.sets, key=lambda s: (-len(s), set_key(s)))
    depth = {s: lengths.get(s, 1) for s in members}
    for s in members:
        if depth[s] < 1:
            raise InvalidFamily("edge lengths must be positive integers")
        parent = [p for p in members if s < p]
        if parent:
            depth[s] += depth[min(parent, key=len)]

    def children(node: Optional[frozenset]) -> list:
        inside = [s for s in members if node is None or s < node]
        tops = [s for s in inside if not any(s < o for o in inside)]
        covered = set().union(*tops) if tops else set()
        pool = set(range(2, F.n + 1)) if node is None else set(node)
        legs = sorted(pool - covered)
        return sorted(tops, key=set_key) + [frozenset([m]) for m in legs]

    coords: dict[int, Poly] = {i: Poly() for i in range(2, F.n + 1)}
    stack: list[tuple[Optional[frozenset], int]] = [(None, 0)]
    while stack:
        node, d = stack.pop()
        for k, child in enumerate(children(node), start=1):
            for m in child:
                coords[m] = coords[m] + Poly({d: k})
            if child in depth:
                stack.append((child, depth[child]))
    return make_family(F.n, {i: (p, Poly.const(1)) for i, p in coords.items()})


# -- Plücker coordinates ----------------------------------------------------------------


@dataclass(frozen=True)
class PlueckerVector:
    """The 2x2 minors ``x_ij`` (``i < j``) of a normalized family."""

    n: int
    minors: dict = field(hash=False)

    def __getitem__(self, pair) -> Poly:
        i, j = pair
        if i == j:
            return Poly()
        if i < j:
            return self.minors[(i, j)]
        return -self.minors[(j, i)]

    def relations_hold(self) -> bool:
        for i, j, k, l in itertools.combinations(range(1, self.n + 1), 4):
            r = self[i, j] * self[k, l] - self[i, k] * self[j, l] + self[i, l] * self[j, k]
            if not r.is_zero():
                return False
        return True


def pluecker(Pf: PointFamily) -> PlueckerVector:
    """Minors ``x_ij = x_i y_j - x_j y_i`` of the family after clearing common ``t``-powers.

    Raises:
        ConsistencyError: the three-term relations fail (cannot happen for
            exact arithmetic; checked anyway).
    """
    pts = Pf.normalized().points
    minors = {}
    for i, j in itertools.combinations(range(1, Pf.n + 1), 2):
        (xi, yi), (xj, yj) = pts[i - 1], pts[j - 1]
        minors[(i, j)] = xi * yj - xj * yi
    Pv = PlueckerVector(Pf.n, minors)
    if not Pv.relations_hold():
        raise ConsistencyError("Plücker relations fail")
    return Pv


def _required_pairs(G: StabilityGraph) -> list[tuple[int, int]]:
    return [(1, j) for j in range(2, G.n + 1)] + G.sorted_edges()


def gamma_open_check(Pv: PlueckerVector, G: StabilityGraph, fiber: str = "special") -> bool:
    """Whether the family lies in the open set where ``x_1j`` and the ``G``-edge minors are nonzero.

    ``fiber="special"`` evaluates at ``t = 0``; ``"generic"`` only asks that
    none of these minors vanish identically.
    """
    if fiber == "special":
        return all(Pv[p].at(0) != 0 for p in _required_pairs(G))
    if fiber == "generic":
        return all(not Pv[p].is_zero() for p in _required_pairs(G))
    raise ValueError(f"unknown fiber {fiber!r}")


def _ord(Pv: PlueckerVector, pair) -> int:
    p = Pv[pair]
    if p.is_zero():
        raise IdenticallyZeroCoordinate(f"x{pair[0]}{pair[1]} vanishes identically")
    return p.ord()


def trop_pair(Pv: PlueckerVector, pair) -> int:
    """Order of the gauge-invariant ratio ``x_ij x_12 x_13 / (x_1i x_1j x_23)``.

    This equals ``ord x_ij - ord x_23`` whenever no ``x_1k`` vanishes at
    ``t = 0``, and does not depend on rescaling individual points.
    """
    i, j = pair
    return (
        _ord(Pv, (i, j)) + _ord(Pv, (1, 2)) + _ord(Pv, (1, 3))
        - _ord(Pv, (1, i)) - _ord(Pv, (1, j)) - _ord(Pv, PAIR_23)
    )


def trop_family(Pv: PlueckerVector, G: StabilityGraph) -> tuple[int, ...]:
    """t-adic valuation of the frame coordinates ``x_ij / x_23`` of ``G``.

    Raises:
        IdenticallyZeroCoordinate: a needed minor is the zero polynomial.
    """
    return tuple(trop_pair(Pv, p) for p in CoordinateFrame.of(G).pairs)


# -- cross-ratio units ------------------------------------------------------------------


@dataclass(frozen=True)
class CrossRatioUnit:
    """Forgetful map to the markings ``{1, a, b, c}``, read off at the split ``{a,b} | {1,c}``."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if len({1, self.a, self.b, self.c}) != 4:
            raise ValueError(f"markings 1,{self.a},{self.b},{self.c} must be distinct")

    def is_admissible(self, G: StabilityGraph) -> bool:
        """Nodal on a divisor only if ``a`` and ``b`` can not collide, i.e. ``ab`` is an edge."""
        return G.has_edge(self.a, self.b)


def cross_ratio_valuation(u: CrossRatioUnit, J: Iterable[int]) -> int:
    """Valuation of ``u`` along ``D_J``: 1 for a nodal image with the designated split, 0 for smooth.

    Raises:
        AmbiguousSplit: ``J`` meets ``{a,b,c}`` in a pair other than ``{a,b}``.
        ValueError: ``1 in J``.
    """
    J = frozenset(J)
    if 1 in J:
        raise ValueError("divisor index sets never contain marking 1")
    meet = J & {u.a, u.b, u.c}
    if len(meet) != 2:
        return 0
    if meet == {u.a, u.b}:
        return 1
    raise AmbiguousSplit(f"{sorted(J)} splits {{1,{u.a},{u.b},{u.c}}} as {sorted(meet)}")


def separates(u: CrossRatioUnit, S: NestedFamily, I: frozenset) -> bool:
    """Valuation 1 on ``D_I`` and 0 on every other member of ``S``."""
    try:
        return cross_ratio_valuation(u, I) == 1 and all(
            cross_ratio_valuation(u, J) == 0 for J in S.sets if J != I
        )
    except AmbiguousSplit:
        return False


def local_partitions(S: NestedFamily, I: frozenset) -> tuple[list[frozenset], list[frozenset]]:
    """Parts of ``I`` and of its complement seen from the two ends of the ``I``-edge.

    On the ``I`` side the parts are the maximal members strictly inside ``I``
    and the single markings attached there. On the other side they are the
    sibling members, the single markings at the parent vertex and the rest
    of the curve (the part holding marking 1).
    """
    members = list(S.sets)
    inner = [s for s in members if s < I]
    tops = [s for s in inner if not any(s < o for o in inner)]
    lam_I = sorted(tops, key=set_key) + [frozenset([m]) for m in sorted(I - set().union(*tops))]

    above = [s for s in members if I < s]
    parent = min(above, key=len) if above else frozenset(range(1, S.n + 1))
    siblings = [s for s in members if s < parent and s != I and not s < I and not I < s]
    sib_tops = [s for s in siblings if not any(s < o for o in siblings)]
    covered = set(I).union(*sib_tops)
    rest = frozenset(range(1, S.n + 1)) - parent
    lam_c = sorted(sib_tops, key=set_key) + [frozenset([m]) for m in sorted(parent - covered)]
    if rest:
        lam_c.append(rest)
    return lam_I, lam_c


def find_separating_unit(S: NestedFamily, I: Iterable[int], G: StabilityGraph) -> Optional[CrossRatioUnit]:
    """A cross-ratio unit with valuation 1 on ``D_I`` and 0 on the other divisors of ``S``.

    Picks ``a, b`` in different parts of the ``I`` side joined by an edge of
    ``G`` and ``c`` in a part of the far side avoiding marking 1. Every
    candidate is verified before it is returned; ``None`` if none works.
    """
    I = frozenset(I)
    if I not in S.sets:
        raise ValueError(f"{sorted(I)} is not a member of the stratum")
    lam_I, lam_c = local_partitions(S, I)
    part_of = {m: k for k, part in enumerate(lam_I) for m in part}
    cs = sorted(m for part in lam_c if 1 not in part for m in part)
    for a, b in G.induced_edges(I):
        if part_of[a] == part_of[b]:
            continue
        for c in cs:
            u = CrossRatioUnit(a, b, c)
            if separates(u, S, I):
                return u
    return None


def brute_force_units(S: NestedFamily, I: Iterable[int], G: StabilityGraph) -> list[CrossRatioUnit]:
    """Every admissible unit separating ``D_I`` within ``S``, by exhaustive search."""
    I = frozenset(I)
    out = []
    for a, b in G.sorted_edges():
        for c in range(2, G.n + 1):
            if c in (a, b):
                continue
            u = CrossRatioUnit(a, b, c)
            if separates(u, S, I):
                out.append(u)
    return out


# -- monomials as products of cross ratios ------------------------------------------------


INF = "inf"

_FACTOR = re.compile(r"\(?\s*x(\d+)\s*(?:-\s*(1|x(\d+)))?\s*\)?\s*(?:\^\s*\(?\s*(-?\d+)\s*\)?)?")


@dataclass(frozen=True)
class CrossRatioFactor:
    """``CR(P1,P2,P3,P4)^exponent`` with ``CR = (P1-P2)(P3-P4) / ((P1-P3)(P2-P4))``.

    Each ``P`` is a coordinate name like ``"x4"``, the integers 0 or 1, or ``"inf"``.
    """

    points: tuple
    exponent: int = 1

    def markings(self, chart: Optional[Mapping] = None) -> tuple[int, ...]:
        """The four markings in a chart placing markings 2, 3, 1 at 0, 1, infinity."""
        chart = chart or {0: 2, 1: 3, INF: 1}
        return tuple(chart[p] if p in chart else int(str(p)[1:]) for p in self.points)


@dataclass(frozen=True)
class UnitDecomposition:
    constant: Fraction
    factors: tuple

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        out = Fraction(self.constant)
        for f in self.factors:
            out *= cross_ratio_value(f.points, values) ** f.exponent
        return out


def _diff(p, q, values) -> Optional[Fraction]:
    # None stands for an infinite difference; its sign is tracked by the caller
    if p == INF or q == INF:
        return None
    val = lambda s: Fraction(s) if isinstance(s, int) else values[s]
    return val(p) - val(q)


def cross_ratio_value(points: Sequence, values: Mapping[str, Fraction]) -> Fraction:
    """Exact cross ratio; a point at infinity cancels from one numerator and one denominator factor."""
    p1, p2, p3, p4 = points
    num = [(p1, p2), (p3, p4)]
    den = [(p1, p3), (p2, p4)]
    out = Fraction(1)
    for p, q in num:
        d = _diff(p, q, values)
        out *= (1 if p == INF else -1) if d is None else d
    for p, q in den:
        d = _diff(p, q, values)
        out /= (1 if p == INF else -1) if d is None else d
    return out


def parse_monomial(text: str) -> list[tuple[tuple, int]]:
    """``"x4^2*(x4-1)^-1*(x4-x5)"`` -> ``[(("x", 4), 2), (("x-1", 4), -1), (("x-x", 4, 5), 1)]``.

    Raises:
        MalformedMonomial: unrecognized factor.
    """
    factors = []
    for raw in (s for s in re.split(r"\s*\*\s*(?![^()]*\))", text.strip()) if s):
        m = _FACTOR.fullmatch(raw)
        if not m:
            raise MalformedMonomial(f"cannot read factor {raw!r}")
        i = int(m.group(1))
        e = int(m.group(4)) if m.group(4) else 1
        if m.group(2) is None:
            key = ("x", i)
        elif m.group(2) == "1":
            key = ("x-1", i)
        else:
            j = int(m.group(3))
            if j == i:
                raise MalformedMonomial(f"x{i}-x{j} is identically zero")
            key = ("x-x", i, j)
        factors.append((key, e))
    if not factors:
        raise MalformedMonomial("empty monomial")
    return factors


def units_monomial_decompose(monomial: str | Sequence) -> UnitDecomposition:
    """Write a monomial in ``x_i``, ``x_i - 1``, ``x_i - x_j`` as a constant times cross ratios.

    ``x_i`` is ``CR(x_i, 0, inf, 1)``; ``x_i - 1`` is ``-CR(x_i, 1, inf, 0)``;
    ``x_i - x_j`` is ``CR(x_i, 0, inf, 1) * CR(x_i, x_j, 0, inf)``.
    """
    factors = parse_monomial(monomial) if isinstance(monomial, str) else list(monomial)
    constant = Fraction(1)
    out = []
    for key, e in factors:
        kind, i = key[0], key[1]
        xi = f"x{i}"
        if kind == "x":
            out.append(CrossRatioFactor((xi, 0, INF, 1), e))
        elif kind == "x-1":
            constant *= Fraction(-1) ** e
            out.append(CrossRatioFactor((xi, 1, INF, 0), e))
        elif kind == "x-x":
            out.append(CrossRatioFactor((xi, 0, INF, 1), e))
            out.append(CrossRatioFactor((xi, f"x{key[2]}", 0, INF), e))
        else:
            raise MalformedMonomial(f"unknown factor kind {kind!r}")
    return UnitDecomposition(constant, tuple(out))


def monomial_value(factors: Sequence, values: Mapping[str, Fraction]) -> Fraction:
    out = Fraction(1)
    for key, e in factors:
        xi = values[f"x{key[1]}"]
        base = xi if key[0] == "x" else (xi - 1 if key[0] == "x-1" else xi - values[f"x{key[2]}"])
        out *= base ** e
    return out


# -- strata as products of smaller moduli spaces -------------------------------------------


@dataclass(frozen=True)
class FactorGraph:
    """Stability graph induced on one component of a stratum.

    ``labels`` are the markings on the component plus one negative label
    per node other than the one playing the role of marking 1. Node labels
    are joined to everything.
    """

    vertex: int
    labels: tuple
    edges: frozenset

    @property
    def multipartite(self) -> bool:
        return multipartite_parts(self.labels, self.edges) is not None


def stratum_factor_graphs(S: NestedFamily, G: StabilityGraph) -> list[FactorGraph]:
    """One induced graph per component of the generic curve in the stratum of ``S``."""
    T = tree_from_nested_family(S)
    adj = T.adjacency()
    out = []
    for v in T.vertices:
        legs = [m for m in T.legs_at(v) if m != 1]
        if v == T.root:
            nodes = sorted(adj[v])
        else:
            parent = next(w for w in adj[v] if 1 in _far_markings(T, v, w))
            nodes = sorted(w for w in adj[v] if w != parent)
        labels = tuple(sorted(legs)) + tuple(-w for w in nodes)
        edges = {e for e in G.induced_edges(legs)}
        for w in nodes:
            edges |= {tuple(sorted((-w, x))) for x in labels if x != -w}
        out.append(FactorGraph(v, labels, frozenset(edges)))
    return out


def _far_markings(T, v: int, w: int) -> frozenset:
    """Markings reached from ``v`` by first stepping to ``w``."""
    adj = T.adjacency()
    seen, stack = {v, w}, [w]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    seen.discard(v)
    return frozenset(m for m, x in T.legs.items() if x in seen)
