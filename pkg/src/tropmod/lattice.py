"""Exact rational linear algebra, lattice saturation and small polyhedral cones.

Everything here works on plain Python ints and :class:`fractions.Fraction`;
matrices are lists of row lists. Sizes are tiny (ambient dimension below 15),
so clarity beats speed.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence

from .errors import NotAFacet, ZeroVector

Vector = tuple


def _rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def _int_rank(rows: list[list[int]]) -> int:
    # fraction-free elimination; rows are scaled by cross-multiplication
    r = 0
    ncols = len(rows[0])
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        a = rows[r][c]
        for i in range(r + 1, len(rows)):
            b = rows[i][c]
            if b:
                g = gcd(a, b)
                rows[i] = [(a // g) * x - (b // g) * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    if all(type(x) is int for v in vectors for x in v):
        return _int_rank([list(v) for v in vectors])
    return len(_rref(vectors)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Rational basis of ``{x : rows @ x = 0}``."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    m, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -m[r][f]
        basis.append(x)
    return basis


def solve(columns: Sequence[Sequence], v: Sequence) -> Optional[list[Fraction]]:
    """Coefficients ``c`` with ``sum c_i columns_i = v``, or ``None``.

    ``columns`` must be linearly independent, making the answer unique.
    """
    k = len(columns)
    d = len(v)
    if k == 0:
        return [] if all(x == 0 for x in v) else None
    aug = [[columns[j][i] for j in range(k)] + [v[i]] for i in range(d)]
    m, pivots = _rref(aug)
    if k in pivots:
        return None
    coeffs = [Fraction(0)] * k
    for r, p in enumerate(pivots):
        coeffs[p] = m[r][k]
    return coeffs


def in_span(v: Sequence, vectors: Sequence[Sequence]) -> bool:
    if all(x == 0 for x in v):
        return True
    if not vectors:
        return False
    return rank(list(vectors) + [list(v)]) == rank(vectors)


def independent_subset(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal independent subset, chosen greedily in order."""
    keep: list[int] = []
    for i, v in enumerate(vectors):
        if rank([vectors[j] for j in keep] + [v]) > len(keep):
            keep.append(i)
    return keep


def to_integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector with the same direction."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return primitive(tuple(int(Fraction(x) * den) for x in v))


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """``v`` divided by the gcd of its entries. Direction is preserved.

    Raises:
        ZeroVector: if every entry is zero.
    """
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        raise ZeroVector("the zero vector has no primitive representative")
    return tuple(int(x) // g for x in v)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """A Z-basis of ``{x in Z^ncols : rows @ x = 0}``.

    Column operations bring ``rows`` to echelon form while the same
    operations act on an identity matrix ``U``; ``U`` stays unimodular, so
    the columns matching the zero columns of the reduced matrix are a basis
    of the kernel lattice.
    """
    A = [[int(x) for x in r] for r in rows]
    U = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(c1, c2, a, b, c, d):
        # (col c1, col c2) <- (a*c1 + b*c2, c*c1 + d*c2), determinant +-1
        for M in (A, U):
            for row in M:
                x, y = row[c1], row[c2]
                row[c1], row[c2] = a * x + b * y, c * x + d * y

    pivot_col = 0
    for r in range(len(A)):
        if pivot_col >= ncols:
            break
        for c in range(pivot_col + 1, ncols):
            x, y = A[r][pivot_col], A[r][c]
            if y == 0:
                continue
            g, s, t = xgcd(x, y)
            colop(pivot_col, c, s, t, -y // g, x // g)
        if A[r][pivot_col] != 0:
            pivot_col += 1
    return [tuple(U[i][c] for i in range(ncols)) for c in range(pivot_col, ncols)]


def saturation_basis(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """A Z-basis of ``span(vectors) ∩ Z^d``."""
    d = len(vectors[0])
    normals = [to_integer_vector(y) for y in nullspace(vectors, d)]
    return integer_kernel(normals, d)


# -- simplicial cones ------------------------------------------------------------------


def primitive_normal(sigma: Sequence[Sequence[int]], tau: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Lattice normal of the simplicial cone ``sigma`` relative to its facet ``tau``.

    Returns an integer vector ``u`` in the saturated lattice of ``sigma``
    whose class generates that lattice modulo the saturated lattice of
    ``tau`` and which points into ``sigma``. Only the class modulo
    ``span(tau)`` is meaningful.

    Raises:
        NotAFacet: unless ``tau``'s rays are ``sigma``'s rays minus one and
            ``sigma``'s rays are linearly independent.
    """
    sig = [tuple(r) for r in sigma]
    ta = [tuple(r) for r in tau]
    extra = [r for r in sig if r not in ta]
    if len(extra) != 1 or len(ta) != len(sig) - 1 or any(r not in sig for r in ta):
        raise NotAFacet("tau must be sigma with exactly one ray removed")
    if rank(sig) != len(sig):
        raise NotAFacet("sigma is not simplicial")
    basis, coords = _saturated_coordinates(tuple(sig))
    j = sig.index(extra[0])
    q = [c[j] for c in coords]
    den = 1
    for x in q:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in q]
    g, combo = ints[0], [1] + [0] * (len(ints) - 1)
    for i in range(1, len(ints)):
        g2, s, t = xgcd(g, ints[i])
        combo = [s * c for c in combo]
        combo[i] = t
        g = g2
    if g < 0:
        combo = [-c for c in combo]
    d = len(sig[0])
    return tuple(sum(c * b[k] for c, b in zip(combo, basis)) for k in range(d))


@lru_cache(maxsize=None)
def _saturated_coordinates(rays: tuple) -> tuple[list, list]:
    """Saturated lattice basis of ``span(rays)`` and each basis vector in ray coordinates."""
    basis = saturation_basis(rays)
    return basis, [solve(rays, b) for b in basis]


def cone_contains(gens: Sequence[Sequence], v: Sequence) -> bool:
    """Exact membership ``v in cone(gens)``.

    By Caratheodory it suffices to try every linearly independent subset.
    """
    if all(x == 0 for x in v):
        return True
    gens = [tuple(g) for g in gens]
    for k in range(1, len(gens) + 1):
        for sub in itertools.combinations(gens, k):
            if rank(sub) != k:
                continue
            c = solve(sub, v)
            if c is not None and all(x >= 0 for x in c):
                return True
    return False


def relative_interior_coefficients(gens: Sequence[Sequence], v: Sequence) -> Optional[list[Fraction]]:
    """Coefficients of ``v`` in independent ``gens`` if all are positive, else ``None``."""
    c = solve(gens, v)
    if c is None or any(x <= 0 for x in c):
        return None
    return c


def extremal_generators(gens: Sequence[Sequence]) -> list[int]:
    """Indices of generators spanning extremal rays (one per ray, first occurrence)."""
    gens = [tuple(g) for g in gens]
    keep = []
    seen_dirs = set()
    for i, g in enumerate(gens):
        if all(x == 0 for x in g):
            continue
        d = to_integer_vector(g)
        if d in seen_dirs:
            continue
        seen_dirs.add(d)
        others = [h for j, h in enumerate(gens) if j != i and any(h) and to_integer_vector(h) != d]
        if not cone_contains(others, g):
            keep.append(i)
    return keep


def cone_intersection_rays(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Generators of ``cone(A) ∩ cone(B)``.

    The intersection is the image of ``{(l, m) >= 0 : A l = B m}`` under
    ``l -> A l``. That cone sits in the nonnegative orthant, so it is pointed
    and its extreme rays are the minimal-support nonnegative kernel vectors;
    we find them by checking every support.
    """
    A = [tuple(a) for a in A]
    B = [tuple(b) for b in B]
    if not A or not B:
        return []
    d = len(A[0])
    cols = A + [tuple(-x for x in b) for b in B]
    nvar = len(cols)
    M = [[cols[j][i] for j in range(nvar)] for i in range(d)]
    rays = []
    for k in range(1, nvar + 1):
        for support in itertools.combinations(range(nvar), k):
            sub = [[row[j] for j in support] for row in M]
            ker = nullspace(sub, k)
            if len(ker) != 1:
                continue
            z = ker[0]
            if all(x < 0 for x in z):
                z = [-x for x in z]
            if not all(x > 0 for x in z):
                continue
            full = dict(zip(support, z))
            point = tuple(sum(full.get(j, 0) * A[j][i] for j in range(len(A))) for i in range(d))
            if any(point):
                rays.append(point)
    return rays
