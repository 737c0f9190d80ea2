import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import cross_ratio
from tropmod.boundary import enumerate_complex
from tropmod.errors import (
    AmbiguousSplit,
    IdenticallyZeroCoordinate,
    InvalidFamily,
    MalformedMonomial,
    ParseError,
)
from tropmod.fan import trop_embed
from tropmod.graphs import complete_graph, enumerate_stability_graphs, is_complete_multipartite, multipartite_witness
from tropmod.pluecker import (
    INF,
    CrossRatioUnit,
    Poly,
    brute_force_units,
    cross_ratio_valuation,
    cross_ratio_value,
    degeneration_family,
    find_separating_unit,
    format_family,
    gamma_open_check,
    local_partitions,
    make_family,
    parse_family,
    parse_monomial,
    parse_poly,
    pluecker,
    stratum_factor_graphs,
    trop_family,
    units_monomial_decompose,
)
from tropmod.trees import metric_tree_from_family, validate_family
from tropmod.valuation import pi_gamma

t = Poly.t()


def test_poly_arithmetic():
    p = parse_poly("1 + 2t - t^2/3")
    assert p.coeffs == {0: 1, 1: 2, 2: Fraction(-1, 3)}
    assert (p - p).is_zero()
    assert (t * t + 1) * (t - 1) == parse_poly("t^3 - t^2 + t - 1")
    assert parse_poly("3(t+1)^2").at(1) == 12
    assert parse_poly("t^2 + t^3").ord() == 2
    assert str(parse_poly("2 - t + t^2")) == "2 - t + t^2"
    with pytest.raises(IdenticallyZeroCoordinate):
        Poly().ord()


@pytest.mark.parametrize("bad", ["t/t", "2**t", "x + 1", "(1 +", "t/0"])
def test_poly_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_poly(bad)


def test_family_dsl():
    text = "n = 5\np2 = 0\np3 = 1\np4 = 5 + t  # comment\np5 = (5 : 1)\n"
    Pf = parse_family(text)
    assert Pf.n == 5
    assert Pf.point(1) == (Poly.const(1), Poly.const(0))
    assert Pf.point(4) == (5 + t, Poly.const(1))
    assert parse_family(format_family(Pf)) == Pf
    assert parse_family("p2 = 7", 4).point(3) == (Poly.const(300), Poly.const(1))
    with pytest.raises(InvalidFamily):
        parse_family("p2 = 0\np2 = 1", 4)
    with pytest.raises(InvalidFamily):
        parse_family("p2 = (0 : 0)", 4)
    with pytest.raises(InvalidFamily):
        parse_family("p2 = 300", 4)
    with pytest.raises(InvalidFamily):
        parse_family("n = 5", 6)
    with pytest.raises(ParseError):
        parse_family("q2 = 1", 4)


def test_minor_example():
    Pf = make_family(5, {2: 0, 3: 1, 4: 5 + t, 5: 5})
    Pv = pluecker(Pf)
    assert Pv[4, 5] == t and Pv[5, 4] == -t
    assert Pv[1, 4] == Poly.const(1)
    assert Pv[2, 3] == Poly.const(-1)


def test_normalization_by_common_power():
    Pf = make_family(4, {2: (t, t * t), 3: (1, 1), 4: (3, 1)})
    assert Pf.normalized().point(2) == (Poly.const(1), t)
    assert Pf.special_fiber()[1] == (1, 0)


polys = st.dictionaries(st.integers(0, 3), st.integers(-3, 3), max_size=3).map(Poly)


@given(st.integers(4, 6), st.lists(st.tuples(polys, polys), min_size=6, max_size=6))
@settings(max_examples=80, deadline=None)
def test_relations_hold_on_random_families(n, perturb):
    # distinct constant terms keep the points apart at t = 0
    pts = {i: (i + t * dx, 1 + t * dy) for i, (dx, dy) in enumerate(perturb[:n], 1)}
    Pv = pluecker(make_family(n, pts))
    assert Pv.relations_hold()
    for i, j in itertools.combinations(range(1, n + 1), 2):
        assert Pv[i, j] == -Pv[j, i]
        assert Pv[i, j].at(0) == i - j


def test_gamma_open_examples(gamma_tilde, k4):
    Pv = pluecker(make_family(5, {2: 0, 3: 1, 4: 2, 5: 3}))
    assert gamma_open_check(Pv, gamma_tilde) and gamma_open_check(Pv, k4)
    # p4 and p5 collide at t = 0: allowed exactly when 45 is not an edge
    Pv = pluecker(make_family(5, {2: 0, 3: 1, 4: 5 + t, 5: 5}))
    assert gamma_open_check(Pv, gamma_tilde)
    assert not gamma_open_check(Pv, k4)
    assert gamma_open_check(Pv, k4, fiber="generic")
    with pytest.raises(ValueError):
        gamma_open_check(Pv, k4, fiber="middle")


def test_trop_family_examples(gamma_tilde, k22):
    Pv = pluecker(make_family(5, {2: 0, 3: 1, 4: 5 + t, 5: 5}))
    assert trop_family(Pv, gamma_tilde) == (0, 0, 0)
    assert trop_family(Pv, k22) == (0, 0, 1)
    Pv = pluecker(make_family(5, {2: 0, 3: 1, 4: 1 + t, 5: 1 + 2 * t}))
    assert trop_family(Pv, gamma_tilde) == pi_gamma({3, 4, 5}, gamma_tilde) == (0, 0, 1)
    Pv = pluecker(make_family(5, {2: 0, 3: t, 4: 7, 5: 9}))
    assert trop_family(Pv, gamma_tilde) == pi_gamma({2, 3}, gamma_tilde)


def test_trop_family_is_gauge_invariant(gamma_tilde):
    base = {2: 0, 3: 1, 4: 1 + t, 5: 1 + 2 * t}
    scaled = {i: (p * t ** i, t ** i) for i, p in base.items()}
    a = trop_family(pluecker(make_family(5, base)), gamma_tilde)
    assert trop_family(pluecker(make_family(5, scaled)), gamma_tilde) == a
    # moving marking 1 off infinity changes every x_1k the same way
    moved = make_family(5, {1: (1, t), **base})
    assert trop_family(pluecker(moved), gamma_tilde) == a


def test_identically_zero_coordinate(gamma_tilde):
    Pv = pluecker(make_family(5, {2: 0, 3: 1, 4: 2, 5: 3}))
    Pv.minors[(3, 4)] = Poly()
    with pytest.raises(IdenticallyZeroCoordinate):
        trop_family(Pv, gamma_tilde)


@pytest.mark.parametrize("n", [5, 6])
def test_degeneration_oracle_matches_trop_embed(n):
    rng = random.Random(n)
    families = {}
    for F in enumerate_complex(complete_graph(n)).all_cells():
        lengths = {s: rng.randint(1, 3) for s in F.sets}
        families[F] = (lengths, pluecker(degeneration_family(F, lengths)))
    for G in enumerate_stability_graphs(n):
        for F in enumerate_complex(G).all_cells():
            lengths, Pv = families[F]
            assert trop_family(Pv, G) == trop_embed(metric_tree_from_family(F, lengths), G)


def test_degeneration_family_orders():
    F = validate_family(6, [{3, 4}, {3, 4, 5}])
    Pv = pluecker(degeneration_family(F, {frozenset({3, 4}): 2, frozenset({3, 4, 5}): 3}))
    assert Pv[3, 4].ord() == 5 and Pv[3, 5].ord() == 3 and Pv[4, 5].ord() == 3
    assert Pv[2, 3].ord() == 0 and Pv[5, 6].ord() == 0
    with pytest.raises(InvalidFamily):
        degeneration_family(F, {frozenset({3, 4}): 0})


def test_cross_ratio_valuation_cases():
    u = CrossRatioUnit(3, 4, 5)
    assert cross_ratio_valuation(u, {3, 4}) == 1
    assert cross_ratio_valuation(u, {2, 3, 4}) == 1
    assert cross_ratio_valuation(u, {2, 3}) == 0
    assert cross_ratio_valuation(u, {3, 4, 5}) == 0
    with pytest.raises(AmbiguousSplit):
        cross_ratio_valuation(u, {3, 5})
    with pytest.raises(ValueError):
        cross_ratio_valuation(u, {1, 3})
    with pytest.raises(ValueError):
        CrossRatioUnit(3, 3, 5)


def test_separating_unit_examples(gamma_tilde, k22):
    S = validate_family(5, [{3, 4}])
    u = find_separating_unit(S, {3, 4}, gamma_tilde)
    assert u is not None and u.is_admissible(gamma_tilde)
    assert cross_ratio_valuation(u, {3, 4}) == 1
    # two colliding-in-stages markings with no edge to the third
    S = validate_family(5, [{3, 4}, {3, 4, 5}])
    assert find_separating_unit(S, {3, 4, 5}, gamma_tilde) is None
    assert brute_force_units(S, {3, 4, 5}, gamma_tilde) == []
    S = validate_family(5, [{4, 5}, {3, 4, 5}])
    assert find_separating_unit(S, {3, 4, 5}, k22) is not None
    with pytest.raises(ValueError):
        find_separating_unit(S, {2, 3}, k22)


def test_local_partitions():
    S = validate_family(6, [{3, 4}, {3, 4, 5}])
    lam_I, lam_c = local_partitions(S, frozenset({3, 4, 5}))
    assert lam_I == [frozenset({3, 4}), frozenset({5})]
    assert lam_c == [frozenset({1}), frozenset({2}), frozenset({6})]


@pytest.mark.parametrize("n", [5, 6])
def test_constructive_units_agree_with_brute_force(n):
    for G in enumerate_stability_graphs(n):
        for S in enumerate_complex(G).all_cells():
            for I in S.sets:
                u = find_separating_unit(S, I, G)
                found = brute_force_units(S, I, G)
                assert (u is None) == (not found)
                if u is not None:
                    assert u in found and u.is_admissible(G)


def test_staged_collision_has_no_unit_off_multipartite():
    for G in enumerate_stability_graphs(5):
        w = multipartite_witness(G)
        if w is None:
            continue
        i, j, k = w
        S = validate_family(5, [{i, j}, {i, j, k}])
        assert find_separating_unit(S, {i, j, k}, G) is None


def test_monomial_parse():
    assert parse_monomial("x4^2*(x4-1)^-1*(x4-x5)") == [
        (("x", 4), 2), (("x-1", 4), -1), (("x-x", 4, 5), 1)
    ]
    for bad in ["", "y4", "x4-x4", "x4^a"]:
        with pytest.raises(MalformedMonomial):
            parse_monomial(bad)


def test_cross_ratio_at_infinity_is_a_limit():
    values = {"x4": Fraction(7, 3), "x5": Fraction(-2, 5)}
    big = Fraction(10) ** 40
    for pts in [("x4", 0, INF, 1), ("x4", 1, INF, 0), ("x4", "x5", 0, INF), (INF, "x4", 1, 0)]:
        exact = cross_ratio_value(pts, values)
        concrete = [big if p == INF else (values[p] if isinstance(p, str) else p) for p in pts]
        assert abs(cross_ratio(*concrete) - exact) < Fraction(1, 10 ** 30)


@given(
    st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=7), min_size=3, max_size=3, unique=True),
    st.sampled_from(["x4", "x4-1", "x4-x5", "x4^2*(x4-1)^-1*(x4-x5)", "(x5-1)^3*x6^-2", "(x6-x4)^-1*(x4-1)^2"]),
)
@settings(max_examples=150, deadline=None)
def test_monomial_decomposition_is_exact(vals, monomial):
    values = dict(zip(["x4", "x5", "x6"], vals))
    assume(all(v not in (0, 1) for v in vals))
    dec = units_monomial_decompose(monomial)
    expected = Fraction(1)
    for (kind, i, *rest), e in parse_monomial(monomial):
        x = values[f"x{i}"]
        expected *= (x if kind == "x" else x - 1 if kind == "x-1" else x - values[f"x{rest[0]}"]) ** e
    assert dec.evaluate(values) == expected
    for f in dec.factors:
        assert len(set(f.markings())) == 4


def test_x_minus_one_constant():
    assert units_monomial_decompose("x4-1").constant == -1
    assert units_monomial_decompose("(x4-1)^2").constant == 1


@pytest.mark.parametrize("n", [5, 6])
def test_factor_graphs_inherit_multipartite(n):
    for G in enumerate_stability_graphs(n):
        if is_complete_multipartite(G) is None:
            continue
        for S in enumerate_complex(G).all_cells():
            factors = stratum_factor_graphs(S, G)
            assert len(factors) == len(S) + 1
            assert all(fg.multipartite for fg in factors)


def test_factor_graph_example(gamma_tilde):
    S = validate_family(5, [{3, 4}, {3, 4, 5}])
    factors = {fg.labels: fg for fg in stratum_factor_graphs(S, gamma_tilde)}
    leaf = next(fg for labels, fg in factors.items() if set(labels) == {3, 4})
    assert leaf.edges == {(3, 4)}
    middle = next(fg for labels, fg in factors.items() if 5 in labels)
    assert len(middle.labels) == 2 and middle.multipartite
    full = stratum_factor_graphs(validate_family(5, []), complete_graph(5))
    assert len(full) == 1 and full[0].multipartite
