import functools
import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import subtree_sides
from tropmod.boundary import enumerate_complex
from tropmod.errors import InvalidFamily, InvalidTree, ParseError
from tropmod.graphs import complete_graph, enumerate_stability_graphs
from tropmod.trees import (
    MetricTree,
    NestedFamily,
    contract_tail,
    distance_vector,
    extremal_assignment,
    format_family,
    in_phi_image,
    is_gamma_stable_family,
    is_gamma_stable_tree,
    make_tree,
    metric_tree_from_family,
    nested_family_from_tree,
    parse_family,
    stabilize,
    stabilize_family,
    tree_from_json,
    tree_from_nested_family,
    tree_to_json,
    validate_family,
)


def fam(n, *sets):
    return validate_family(n, [set(s) for s in sets])


def test_empty_family_is_one_vertex():
    T = tree_from_nested_family(fam(5))
    assert len(T.vertices) == 1 and not T.edges
    assert sorted(T.legs) == [1, 2, 3, 4, 5]
    assert nested_family_from_tree(T) == fam(5)


def test_caterpillar_example():
    T = tree_from_nested_family(fam(5, {3, 4}, {3, 4, 5}))
    root = T.root
    assert sorted(T.legs_at(root)) == [1, 2]
    mid = next(iter(T.adjacency()[root]))
    assert T.legs_at(mid) == [5]
    tail = next(v for v in T.adjacency()[mid] if v != root)
    assert sorted(T.legs_at(tail)) == [3, 4]
    assert nested_family_from_tree(T) == fam(5, {3, 4}, {3, 4, 5})


def test_single_divisor_tree():
    T = tree_from_nested_family(fam(5, {2, 5}))
    assert len(T.vertices) == 2
    tail = next(v for v in T.vertices if v != T.root)
    assert sorted(T.legs_at(tail)) == [2, 5]


def test_two_vertex_tree_shape():
    T = make_tree(4, [(0, 1)], {1: 0, 2: 0, 3: 1, 4: 1})
    assert nested_family_from_tree(T) == fam(4, {3, 4})


def test_gamma_stability_examples(gamma_tilde, k22):
    assert is_gamma_stable_tree(tree_from_nested_family(fam(5, {3, 4}, {3, 4, 5})), gamma_tilde)
    assert not is_gamma_stable_tree(tree_from_nested_family(fam(5, {4, 5})), gamma_tilde)
    assert is_gamma_stable_tree(tree_from_nested_family(fam(5)), gamma_tilde)


def test_extremal_assignment_examples(gamma_tilde):
    T = tree_from_nested_family(fam(5, {4, 5}))
    assert extremal_assignment(T, gamma_tilde) == {frozenset({4, 5})}
    assert extremal_assignment(tree_from_nested_family(fam(5, {3, 4})), gamma_tilde) == set()
    T = tree_from_nested_family(fam(5, {4, 5}, {3, 4, 5}))
    assert extremal_assignment(T, gamma_tilde) == {frozenset({4, 5})}


def test_stabilize_examples(gamma_tilde, k22):
    S = stabilize(tree_from_nested_family(fam(5, {4, 5})), gamma_tilde)
    assert len(S.vertices) == 1 and len(S.legs) == 5
    T = tree_from_nested_family(fam(5, {3, 4}, {3, 4, 5}))
    assert stabilize(T, gamma_tilde) == T
    out = stabilize(T, k22)
    assert nested_family_from_tree(out) == fam(5, {3, 4, 5})


def test_contract_tail_reattaches_legs():
    T = tree_from_nested_family(fam(6, {3, 4}, {3, 4, 5}))
    inner = next(e for e in T.edges if T.side_markings(e) == {3, 4})
    C = contract_tail(T, inner)
    assert nested_family_from_tree(C) == fam(6, {3, 4, 5})
    assert sorted(C.legs_at(C.legs[3])) == [3, 4, 5]


def test_distance_vector_examples():
    M = metric_tree_from_family(fam(5, {3, 4}), {frozenset({3, 4}): Fraction(7, 2)})
    d = distance_vector(M)
    assert d[1, 3] == Fraction(7, 2)
    assert d[1, 2] == 0 and d[3, 4] == 0
    assert d[2, 4] == Fraction(7, 2)
    single = distance_vector(MetricTree(tree_from_nested_family(fam(5)), {}))
    assert all(v == 0 for v in single.entries.values())


def test_invalid_families():
    with pytest.raises(InvalidFamily):
        fam(5, {3, 4}, {4, 5})
    with pytest.raises(InvalidFamily):
        fam(5, {1, 2})
    with pytest.raises(InvalidFamily):
        fam(5, {2, 3, 4, 5})
    with pytest.raises(InvalidFamily):
        fam(6, {2, 3}, {4, 5}, {2, 3, 4, 5}, {2, 3, 4})


def test_invalid_trees():
    make_tree(5, [(0, 1)], {1: 0, 2: 0, 3: 1, 4: 1, 5: 1})
    with pytest.raises(InvalidTree):
        make_tree(5, [(0, 1)], {1: 0, 2: 1, 3: 1, 4: 1, 5: 1})
    with pytest.raises(InvalidTree):
        make_tree(5, [(0, 1), (1, 2), (2, 0)], {1: 0, 2: 0, 3: 1, 4: 1, 5: 2})
    with pytest.raises(InvalidTree):
        MetricTree(tree_from_nested_family(fam(5, {3, 4})), {(0, 1): 0})


def test_family_text_round_trip():
    F = fam(6, {3, 4}, {3, 4, 5})
    assert format_family(F) == "{3,4};{3,4,5}"
    assert parse_family("{3,4,5}; {3,4}", 6) == F
    assert parse_family("", 6) == fam(6)
    with pytest.raises(ParseError):
        parse_family("{3,4", 6)


def test_tree_json_round_trip():
    F = fam(6, {3, 4}, {3, 4, 5})
    M = metric_tree_from_family(F, {frozenset({3, 4}): Fraction(1, 3), frozenset({3, 4, 5}): 2})
    back = tree_from_json(tree_to_json(M))
    assert back.lengths == M.lengths and back.tree == M.tree
    assert tree_from_json(tree_to_json(M.tree)) == M.tree
    with pytest.raises(ParseError):
        tree_from_json("{}")


@functools.lru_cache(maxsize=None)
def _all_full_cells(n):
    return enumerate_complex(complete_graph(n)).all_cells()


@functools.lru_cache(maxsize=None)
def _all_full_trees(n):
    return [(F, tree_from_nested_family(F)) for F in _all_full_cells(n)]


@pytest.mark.parametrize("n", [4, 5, 6])
def test_tree_family_bijection(n):
    seen = set()
    for F in _all_full_cells(n):
        T = tree_from_nested_family(F)
        assert nested_family_from_tree(T) == F
        assert len(T.edges) == len(F)
        assert all(T.valence(v) >= 3 for v in T.vertices)
        key = tree_to_json(T)
        assert key not in seen
        seen.add(key)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_stabilization_properties(n):
    rng = random.Random(n)
    for G in enumerate_stability_graphs(n):
        for F, T in _all_full_trees(n):
            S = stabilize(T, G)
            assert stabilize(S, G) == S
            assert nested_family_from_tree(S) == stabilize_family(F, G)
            assert nested_family_from_tree(S) == NestedFamily(n, tuple(s for s in F.sets if G.spans_edge(s)))
            shuffled = stabilize(T, G, order=lambda cands: rng.choice(cands))
            assert shuffled.same_type(S)
            assert is_gamma_stable_tree(S, G)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_extremal_assignment_matches_tail_scan(n):
    scans = [(T, list(subtree_sides(T).values())) for _, T in _all_full_trees(n)]
    for G in enumerate_stability_graphs(n):
        for T, sides in scans:
            edge_free = {s for s in sides if not any(G.has_edge(a, b) for a, b in itertools.combinations(s, 2))}
            assert extremal_assignment(T, G) == edge_free


@pytest.mark.parametrize("n", [5, 6])
def test_family_stability_criteria_agree(n):
    for G in enumerate_stability_graphs(n):
        for F, T in _all_full_trees(n):
            every = all(G.spans_edge(s) for s in F.sets)
            assert is_gamma_stable_family(F, G) == every == is_gamma_stable_tree(T, G)


def test_maximal_cells_have_n_minus_3_members():
    for n in (4, 5, 6):
        cx = enumerate_complex(complete_graph(n))
        assert {len(F) for F in cx.maximal_cells()} == {n - 3}


@st.composite
def metric_trees(draw):
    n = draw(st.integers(4, 7))
    cells = _all_full_cells(n)
    F = cells[draw(st.integers(0, len(cells) - 1))]
    lengths = {s: Fraction(draw(st.integers(1, 20)), draw(st.integers(1, 5))) for s in F.sets}
    return metric_tree_from_family(F, lengths)


@given(metric_trees(), st.fractions(min_value=Fraction(1, 7), max_value=9))
@settings(max_examples=60, deadline=None)
def test_distance_vector_properties(M, c):
    d = distance_vector(M)
    assert d.satisfies_four_point()
    assert d.equivalent(d)
    scaled = MetricTree(M.tree, {e: c * ell for e, ell in M.lengths.items()})
    assert distance_vector(scaled).entries == d.scaled(c).entries


@given(metric_trees(), st.lists(st.fractions(min_value=-5, max_value=5), min_size=7, max_size=7))
@settings(max_examples=60, deadline=None)
def test_equivalence_modulo_phi(M, shift):
    d = distance_vector(M)
    moved = {(i, j): v + shift[i - 1] + shift[j - 1] for (i, j), v in d.entries.items()}
    other = type(d)(d.n, moved)
    assert d.equivalent(other) and other.equivalent(d)
    assert in_phi_image(d.n, {k: moved[k] - d.entries[k] for k in moved})
    bumped = dict(moved)
    bumped[(1, 2)] += 1
    assert not d.equivalent(type(d)(d.n, bumped))
