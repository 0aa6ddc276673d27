"""DOT and TikZ output for snake graphs."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Literal, Optional

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from foldmatch.config import RenderSettings, settings
from foldmatch.exceptions import InvalidOperation
from foldmatch.snake import PerfectMatching, SnakeGraph, enumerate_matchings

logger = logging.getLogger(__name__)

TEMPLATES = Path(__file__).parent / "templates"

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATES)),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
    trim_blocks=True,
    lstrip_blocks=True,
)


def _num(value: float) -> str:
    return f"{value:g}"


def graph_context(G: SnakeGraph, overlay: Optional[PerfectMatching] = None) -> dict:
    """Sorted plain data for the templates."""
    cfg = G.polygon
    graph = G.graph
    names = {v: f"v{i}" for i, v in enumerate(sorted(graph.nodes, key=lambda v: (graph.nodes[v]["pos"], v)))}
    overlay = overlay or frozenset()

    nodes = []
    for v, name in sorted(names.items(), key=lambda item: item[1]):
        x, y = graph.nodes[v]["pos"]
        corner = graph.nodes[v]["corner"]
        nodes.append(
            {
                "name": name,
                "x": _num(x),
                "y": _num(y),
                "corner": cfg.vertex_name(corner) if corner is not None else "",
            }
        )

    edges = []
    for key in G.edge_keys():
        u, v = sorted((names[w] for w in key), key=lambda n: int(n[1:]))
        data = graph.edges[tuple(key)]
        (x1, y1), (x2, y2) = (graph.nodes[w]["pos"] for w in key)
        edges.append(
            {
                "u": u,
                "v": v,
                "label": ", ".join(lab.render(cfg) for lab in data["labels"]),
                "arc": data["kind"] == "arc",
                "matched": key in overlay,
                "coords": ((_num(x1), _num(y1)), (_num(x2), _num(y2))),
            }
        )
    edges.sort(key=lambda e: (int(e["u"][1:]), int(e["v"][1:])))

    tiles = []
    for t in G.tiles:
        cx, cy = t.center
        tiles.append(
            {
                "key": t.key,
                "label": t.label,
                "shape": t.shape,
                "x": _num(cx),
                "y": _num(cy),
                "corners": sorted((names[n] for n in set(t.corners.values())), key=lambda n: int(n[1:])),
            }
        )
    return {"nodes": nodes, "edges": edges, "tiles": tiles, "source": ", ".join(d.render(cfg) for d in G.source)}


def render_graph(
    G: SnakeGraph,
    fmt: Optional[Literal["dot", "tikz"]] = None,
    matching: Optional[int] = None,
    config: Optional[RenderSettings] = None,
) -> str:
    """Render G; `matching` overlays that entry of enumerate_matchings (0 is P-)."""
    config = config or settings.render
    fmt = fmt or config.format
    overlay = None
    if matching is not None:
        matchings = enumerate_matchings(G)
        if not 0 <= matching < len(matchings):
            raise InvalidOperation(f"matching index {matching} outside 0..{len(matchings) - 1}")
        overlay = matchings[matching]
    template = _env.get_template(f"graph.{fmt}.j2")
    logger.debug(f"rendering {fmt}", extra={"tiles": len(G.tiles), "matching": matching})
    return template.render(graph=graph_context(G, overlay), color=config.matching_color, scale=_num(config.scale))
