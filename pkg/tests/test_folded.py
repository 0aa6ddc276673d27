import pytest

from conftest import FIX_B_F, FIX_C_F
from foldmatch.exceptions import UnsupportedTriangulationForB
from foldmatch.folded import (
    b_corners,
    build_G_ab_B,
    build_G_ab_C,
    build_hat_B,
    build_hat_C,
    diameter_apex,
    f_B_formula,
    f_C_formula,
    f_polynomial_modified,
    g_C_formula,
    g_vector_modified,
    orbit_expansion,
)
from foldmatch.geometry import Diagonal, all_orbits, enumerate_theta_triangulations, orbit_of
from foldmatch.oracle import explore
from foldmatch.polynomial import canonical_string, coefficient_sum, from_terms, top_monomials
from foldmatch.snake import brute_force_matchings, perfect_matchings


def test_b_hypothesis(fix_b, fix_c):
    assert b_corners(fix_b) == (4, 1, 0)
    with pytest.raises(UnsupportedTriangulationForB):
        b_corners(fix_c)


def test_diameter_apex(fix_b, fix_c):
    assert diameter_apex(fix_b) == 1
    assert diameter_apex(fix_c) == 2


def test_hat_b_hexagon_and_copied_labels(fix_b):
    G = build_hat_B(Diagonal.of(2, 5), fix_b)
    assert G.crossings == (2, 3)
    shapes = {t.label: t.shape for t in G.tiles}
    assert shapes == {2: "hexagon", 3: "square"}
    last = next(t for t in G.tiles if t.label == 3)
    assert any(len(G.labels(e)) >= 2 for e in last.edges)
    assert len(perfect_matchings(G.graph)) == coefficient_sum(f_polynomial_modified(G))


def test_hat_b_single_diameter_tile(fix_b):
    G = build_hat_B(Diagonal.of(1, 5), fix_b)
    assert G.crossings == (3,)
    assert G.tiles[0].shape == "square"


def test_hat_c_copies_every_label(fix_c):
    G = build_hat_C(Diagonal.of(3, 5), fix_c)
    assert G.crossings == (2, 3)
    last = next(t for t in G.tiles if t.label == 3)
    exterior = [e for e in last.edges if len(G.graph.edges[tuple(e)]["tiles"]) == 1]
    assert all(len(G.labels(e)) >= 2 for e in exterior)


def test_fix_b_glued_graph(fix_b, orbit_b):
    G = build_G_ab_B(orbit_b, fix_b)
    assert sorted(G.crossings) == [1, 2, 2, 3, 3]
    assert sum(t.shape == "hexagon" for t in G.tiles) == 2
    assert G.arc is not None
    assert len(perfect_matchings(G.graph)) == 11
    assert canonical_string(f_polynomial_modified(G)) == FIX_B_F
    assert g_vector_modified(G) == (1, 0, -2)


def test_fix_c_glued_graph(fix_c, orbit_c):
    G = build_G_ab_C(orbit_c, fix_c)
    assert sorted(G.crossings) == [1, 2, 3]
    assert G.arc is None
    assert len(perfect_matchings(G.graph)) == 4
    assert set(perfect_matchings(G.graph)) == set(brute_force_matchings(G.graph))
    assert canonical_string(f_polynomial_modified(G)) == FIX_C_F
    assert g_vector_modified(G) == (-1, 0, 0)


def test_singleton_restriction_is_a_hat_graph(fix_b):
    o = orbit_of(Diagonal.of(1, 3), fix_b.polygon)
    G = build_G_ab_B(o, fix_b)
    assert G.crossings == (1,)
    assert canonical_string(f_polynomial_modified(G)) == "1 + y1"


def test_orbits_of_the_triangulation(fix_b):
    F, g = orbit_expansion(orbit_of(Diagonal.of(1, 4), fix_b.polygon), fix_b, "B")
    assert (canonical_string(F), g) == ("1", (0, 1, 0))
    F, g = orbit_expansion(orbit_of(Diagonal.of(0, 4), fix_b.polygon), fix_b, "C")
    assert (canonical_string(F), g) == ("1", (0, 0, 1))


def test_closed_formulas_on_the_worked_examples(fix_b, orbit_b, fix_c, orbit_c):
    assert canonical_string(f_B_formula(orbit_b, fix_b)) == FIX_B_F
    assert canonical_string(f_C_formula(orbit_c, fix_c)) == FIX_C_F
    assert g_C_formula(orbit_c, fix_c) == (-1, 0, 0)


@pytest.mark.parametrize(
    "kind, fixture", [("B", "fix_b"), ("B", "fix_b_mirror"), ("C", "fix_c"), ("C", "fix_b"), ("C", "fix_b_mirror")]
)
def test_graph_values_match_formulas(kind, fixture, request):
    T = request.getfixturevalue(fixture)
    for o in all_orbits(T.polygon):
        F, g = orbit_expansion(o, T, kind)
        if kind == "B":
            assert F == f_B_formula(o, T), str(o)
        else:
            assert F == f_C_formula(o, T), str(o)
            assert g == g_C_formula(o, T), str(o)


@pytest.mark.parametrize("kind, fixture", [("B", "fix_b"), ("C", "fix_c")])
def test_modified_f_shape(kind, fixture, request):
    T = request.getfixturevalue(fixture)
    for o in all_orbits(T.polygon):
        F, _ = orbit_expansion(o, T, kind)
        assert F.get((0, 0, 0)) == 1
        assert all(c > 0 for c in F.values())
        assert len(top_monomials(F)) == 1


def test_mirrored_fix_b_glued_graph(fix_b_mirror, orbit_b_mirror):
    G = build_G_ab_B(orbit_b_mirror, fix_b_mirror)
    assert sorted(G.crossings) == [1, 2, 2, 3, 3]
    assert sum(t.shape == "hexagon" for t in G.tiles) == 2
    assert G.arc is not None
    assert len(perfect_matchings(G.graph)) == 11

    F = f_polynomial_modified(G)
    # FIX-B's polynomial read from its top monomial y1*y2^2*y3^2 downwards
    expected = from_terms(3, [
        ((0, 0, 0), 1), ((1, 0, 0), 1), ((0, 1, 0), 1), ((1, 1, 0), 2),
        ((1, 2, 0), 1), ((1, 1, 1), 2), ((1, 2, 1), 2), ((1, 2, 2), 1),
    ])
    assert F == expected
    assert F == f_B_formula(orbit_b_mirror, fix_b_mirror)
    assert (F, g_vector_modified(G)) == explore(fix_b_mirror, "B").value(orbit_b_mirror)


@pytest.mark.parametrize("n", [2, 3])
def test_type_b_graphs_match_formula_on_every_triangulation(n):
    checked = 0
    for T in enumerate_theta_triangulations(n):
        try:
            b_corners(T)
        except UnsupportedTriangulationForB:
            continue
        for o in all_orbits(T.polygon):
            F, _ = orbit_expansion(o, T, "B")
            assert F == f_B_formula(o, T), f"{T} {o}"
            assert F.get((0,) * n) == 1, f"{T} {o}"
            checked += 1
    assert checked > 0


@pytest.mark.parametrize("n", [2, 3])
def test_type_c_graphs_match_formulas_on_every_triangulation(n):
    for T in enumerate_theta_triangulations(n):
        for o in all_orbits(T.polygon):
            F, g = orbit_expansion(o, T, "C")
            assert F == f_C_formula(o, T), f"{T} {o}"
            assert g == g_C_formula(o, T), f"{T} {o}"
