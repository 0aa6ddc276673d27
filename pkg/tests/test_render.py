import pytest

from foldmatch.config import RenderSettings
from foldmatch.exceptions import InvalidOperation
from foldmatch.folded import build_G_ab_B, build_G_ab_C
from foldmatch.render import graph_context, render_graph
from foldmatch.snake import build_snake_graph


def test_dot_has_one_cluster_per_tile(fix_c, orbit_c):
    text = render_graph(build_G_ab_C(orbit_c, fix_c), "dot")
    assert text.startswith("graph snake {")
    assert text.count("subgraph cluster_tile_") == 3


def test_dot_parses(fix_b, orbit_b):
    pydot = pytest.importorskip("pydot")
    G = build_G_ab_B(orbit_b, fix_b)
    (parsed,) = pydot.graph_from_dot_data(render_graph(G, "dot"))
    assert len(parsed.get_subgraphs()) == len(G.tiles)


def test_tikz_marks_hexagons_and_the_arc(fix_b, orbit_b):
    text = render_graph(build_G_ab_B(orbit_b, fix_b), "tikz")
    assert text.count("(hexagon)") == 2
    assert "dashed" in text
    assert "\\begin{tikzpicture}" in text


def test_overlay_of_the_minimal_matching(fix_a, gamma_a):
    G = build_snake_graph(gamma_a, fix_a)
    dot = render_graph(G, "dot", matching=0)
    assert dot.count("penwidth=3") == len(G.minimal)
    tikz = render_graph(G, "tikz", matching=0, config=RenderSettings(matching_color="blue"))
    assert tikz.count("blue, very thick") == len(G.minimal)


def test_bad_matching_index(fix_a, gamma_a):
    with pytest.raises(InvalidOperation):
        render_graph(build_snake_graph(gamma_a, fix_a), "dot", matching=5)


def test_context_is_sorted_and_stable(fix_a, gamma_a):
    G = build_snake_graph(gamma_a, fix_a)
    first, second = graph_context(G), graph_context(G)
    assert first == second
    assert [n["name"] for n in first["nodes"]] == [f"v{i}" for i in range(8)]
    assert len(first["edges"]) == 10
