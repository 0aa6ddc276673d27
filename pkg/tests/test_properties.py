from functools import lru_cache

from hypothesis import given, settings
from hypothesis import strategies as st

from foldmatch.folded import build_G_ab, f_C_formula, g_C_formula, orbit_expansion
from foldmatch.geometry import (
    PolygonConfig,
    all_orbits,
    enumerate_theta_triangulations,
    enumerate_triangulations,
    rotated_restrict_vector,
)
from foldmatch.polynomial import coefficient_sum, top_monomials
from foldmatch.snake import (
    brute_force_matchings,
    build_snake_graph,
    contributing_tiles,
    diagonal_expansion,
    diagonal_laurent,
    enclosed_tiles,
    perfect_matchings,
)


@lru_cache(maxsize=None)
def plain_triangulations(n: int):
    return tuple(enumerate_triangulations(PolygonConfig(n, "plain")))


@lru_cache(maxsize=None)
def theta_triangulations(n: int):
    return tuple(enumerate_theta_triangulations(n))


@st.composite
def diagonal_case(draw):
    n = draw(st.integers(min_value=2, max_value=4))
    T = draw(st.sampled_from(plain_triangulations(n)))
    outside = [d for d in T.polygon.all_diagonals() if d not in T]
    return T, draw(st.sampled_from(outside))


@st.composite
def orbit_case(draw):
    n = draw(st.integers(min_value=2, max_value=3))
    T = draw(st.sampled_from(theta_triangulations(n)))
    outside = [o for o in all_orbits(T.polygon) if not all(d in T for d in o.diagonals)]
    return T, draw(st.sampled_from(outside))


@given(diagonal_case())
@settings(max_examples=60, deadline=None)
def test_fast_matchings_agree_with_brute_force(case):
    T, gamma = case
    G = build_snake_graph(gamma, T)
    assert set(perfect_matchings(G.graph)) == set(brute_force_matchings(G.graph))


@given(diagonal_case())
@settings(max_examples=60, deadline=None)
def test_f_polynomial_invariants(case):
    T, gamma = case
    G = build_snake_graph(gamma, T)
    F, _ = diagonal_expansion(gamma, T)
    assert F.get((0,) * T.m) == 1
    assert all(c > 0 for c in F.values())
    assert coefficient_sum(F) == len(perfect_matchings(G.graph))
    assert top_monomials(F) == [tuple(G.crossings.count(i) for i in range(1, T.m + 1))]

    boundary = {frozenset((u, v)) for u, v, tiles in G.graph.edges(data="tiles") if len(tiles) == 1}
    outer = [P for P in perfect_matchings(G.graph) if P <= boundary]
    assert len(outer) == 2
    assert G.minimal in outer


@given(diagonal_case())
@settings(max_examples=60, deadline=None)
def test_contributing_tiles_are_the_enclosed_ones(case):
    T, gamma = case
    G = build_snake_graph(gamma, T)
    for P in perfect_matchings(G.graph):
        assert contributing_tiles(G, P) == enclosed_tiles(G, P)


@given(diagonal_case())
@settings(max_examples=40, deadline=None)
def test_laurent_expansion_specializes_to_f(case):
    T, gamma = case
    F, _ = diagonal_expansion(gamma, T)
    assert diagonal_laurent(gamma, T).specialize_x() == F


@given(orbit_case())
@settings(max_examples=40, deadline=None)
def test_type_c_graph_agrees_with_formulas(case):
    T, o = case
    F, g = orbit_expansion(o, T, "C")
    assert F == f_C_formula(o, T)
    assert g == g_C_formula(o, T)
    G = build_G_ab(o, T, "C")
    assert set(perfect_matchings(G.graph)) == set(brute_force_matchings(G.graph))


@given(st.lists(st.integers(min_value=0, max_value=5), min_size=1, max_size=4), st.integers(min_value=0, max_value=5))
def test_halving_a_symmetric_vector(head, middle):
    vector = tuple(head) + (2 * middle,) + tuple(reversed(head))
    assert rotated_restrict_vector(vector) == tuple(head) + (middle,)
