"""
Snake graphs of diagonals in a triangulated polygon.

Tiles are unit squares at integer coordinates, growing east or north. Graphs
are assembled through GraphBuilder, which the folded module reuses to
subdivide edges, copy labels and glue two snakes together.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from foldmatch.exceptions import (
    BoundarySegment,
    ConventionError,
    DiagonalInTriangulation,
    NotCrossing,
)
from foldmatch.geometry import (
    Diagonal,
    PolygonConfig,
    Triangulation,
    Vertex,
    apex,
    crosses,
    crossing_vector,
    quadrilateral,
)
from foldmatch.polynomial import (
    GVector,
    LaurentPolynomial,
    Polynomial,
    from_terms,
    one,
    unit,
    xy_ring,
    y_monomial,
    zero_vector,
)

logger = logging.getLogger(__name__)

Node = int
EdgeKey = frozenset
Point = tuple[float, float]
PerfectMatching = frozenset

_SQUARE = ((0, 0), (1, 0), (1, 1), (0, 1))
_GROWTH = ((1, 0), (0, 1))


@dataclass(frozen=True)
class Label:
    """A side of a tile: a diagonal tau_index of the triangulation or a boundary segment."""
    side: Diagonal
    index: Optional[int] = None

    def render(self, cfg: Optional[PolygonConfig] = None) -> str:
        if self.index is not None:
            return str(self.index)
        return self.side.render(cfg)


@dataclass(frozen=True, eq=False)
class Tile:
    key: int
    ordinal: int
    label: int
    rel_orientation: int
    anchor: Point
    corners: Mapping[Vertex, Node]
    sides: Mapping[str, tuple[EdgeKey, ...]]
    edges: frozenset
    shape: str = "square"
    origin: Optional[Diagonal] = None

    @property
    def center(self) -> Point:
        return (self.anchor[0] + 0.5, self.anchor[1] + 0.5)


@dataclass(frozen=True, eq=False)
class SnakeGraph:
    graph: nx.Graph
    tiles: tuple[Tile, ...]
    minimal: PerfectMatching
    variables: int
    polygon: PolygonConfig
    source: tuple[Diagonal, ...]

    @property
    def crossings(self) -> tuple[int, ...]:
        return tuple(t.label for t in self.tiles)

    def labels(self, edge: EdgeKey) -> tuple[Label, ...]:
        u, v = tuple(edge)
        return self.graph.edges[u, v]["labels"]

    def edge_keys(self) -> list[EdgeKey]:
        return sorted((frozenset(e) for e in self.graph.edges), key=_edge_sort_key(self.graph))


# -- builder ---------------------------------------------------------------


@dataclass
class _TileDraft:
    key: int
    ordinal: int
    label: int
    rel: int
    anchor: Point
    cycle: list[Vertex]
    corners: dict[Vertex, Node]
    sides: dict[str, list[int]]
    shape: str = "square"
    origin: Optional[Diagonal] = None


@dataclass
class _EdgeDraft:
    u: Node
    v: Node
    labels: list[Label]
    tiles: set[int] = field(default_factory=set)
    kind: str = "tile"


class GraphBuilder:
    """Mutable assembly of a tiled plane graph; `freeze` yields the immutable graph."""

    def __init__(self) -> None:
        self.nodes: dict[Node, dict] = {}
        self.edges: dict[int, _EdgeDraft] = {}
        self.tiles: list[_TileDraft] = []
        self._parent: dict[Node, Node] = {}
        self._next_node = 0
        self._next_edge = 0

    def add_node(self, pos: Point, corner: Optional[Vertex] = None) -> Node:
        node = self._next_node
        self._next_node += 1
        self.nodes[node] = {"pos": (float(pos[0]), float(pos[1])), "corner": corner}
        self._parent[node] = node
        return node

    def add_edge(self, u: Node, v: Node, labels: Iterable[Label] = (), tiles: Iterable[int] = (), kind: str = "tile") -> int:
        edge_id = self._next_edge
        self._next_edge += 1
        self.edges[edge_id] = _EdgeDraft(u, v, list(labels), set(tiles), kind)
        return edge_id

    def edge_between(self, u: Node, v: Node) -> Optional[int]:
        ends = {self.find(u), self.find(v)}
        for edge_id, edge in self.edges.items():
            if {self.find(edge.u), self.find(edge.v)} == ends:
                return edge_id
        return None

    def tile_edge_ids(self, key: int) -> list[int]:
        return [i for i, e in self.edges.items() if key in e.tiles]

    def subdivide(self, edge_id: int, labels: Sequence[Sequence[Label]], outward: Point) -> tuple[list[Node], list[int]]:
        """Replace an edge by a path of len(labels) edges; new vertices are pushed along `outward`."""
        edge = self.edges.pop(edge_id)
        start, stop = self.nodes[edge.u]["pos"], self.nodes[edge.v]["pos"]
        count = len(labels)
        inner = []
        for k in range(1, count):
            frac = k / count
            pos = (
                start[0] + frac * (stop[0] - start[0]) + outward[0],
                start[1] + frac * (stop[1] - start[1]) + outward[1],
            )
            inner.append(self.add_node(pos))
        path = [edge.u, *inner, edge.v]
        new_edges = [
            self.add_edge(path[k], path[k + 1], labels[k], edge.tiles)
            for k in range(count)
        ]
        for t in self.tiles:
            for side, ids in t.sides.items():
                if edge_id in ids:
                    at = ids.index(edge_id)
                    t.sides[side] = ids[:at] + new_edges + ids[at + 1:]
        return inner, new_edges

    def absorb(self, other: "GraphBuilder", transform=None) -> tuple[dict[Node, Node], dict[int, int], dict[int, int]]:
        """Copy another builder's nodes, edges and tiles into this one."""
        transform = transform or (lambda p: p)
        node_map = {n: self.add_node(transform(data["pos"]), data["corner"]) for n, data in other.nodes.items()}
        for n, root in other._parent.items():
            self._parent[node_map[n]] = node_map[other.find(root)]
        offset = max((t.key for t in self.tiles), default=-1) + 1
        tile_map = {t.key: t.key + offset for t in other.tiles}
        edge_map = {}
        for edge_id, e in other.edges.items():
            edge_map[edge_id] = self.add_edge(
                node_map[e.u], node_map[e.v], e.labels, {tile_map[k] for k in e.tiles}, e.kind
            )
        for t in other.tiles:
            self.tiles.append(
                _TileDraft(
                    key=tile_map[t.key],
                    ordinal=t.ordinal,
                    label=t.label,
                    rel=t.rel,
                    anchor=transform(t.anchor),
                    cycle=list(t.cycle),
                    corners={v: node_map[n] for v, n in t.corners.items()},
                    sides={s: [edge_map[i] for i in ids] for s, ids in t.sides.items()},
                    shape=t.shape,
                    origin=t.origin,
                )
            )
        return node_map, edge_map, tile_map

    def find(self, node: Node) -> Node:
        while self._parent[node] != node:
            self._parent[node] = self._parent[self._parent[node]]
            node = self._parent[node]
        return node

    def identify(self, keep: Node, drop: Node) -> None:
        self._parent[self.find(drop)] = self.find(keep)

    def key_of(self, edge_id: int) -> EdgeKey:
        e = self.edges[edge_id]
        return frozenset((self.find(e.u), self.find(e.v)))

    def freeze(self) -> tuple[nx.Graph, tuple[Tile, ...]]:
        graph = nx.Graph()
        for node, data in self.nodes.items():
            if self.find(node) == node:
                graph.add_node(node, pos=data["pos"], corner=data["corner"])
        for edge_id in sorted(self.edges):
            e = self.edges[edge_id]
            u, v = self.find(e.u), self.find(e.v)
            if graph.has_edge(u, v):
                attrs = graph.edges[u, v]
                merged = list(attrs["labels"]) + [lab for lab in e.labels if lab not in attrs["labels"]]
                attrs["labels"] = tuple(merged)
                attrs["tiles"] = tuple(sorted(set(attrs["tiles"]) | e.tiles))
                continue
            graph.add_edge(u, v, labels=tuple(e.labels), tiles=tuple(sorted(e.tiles)), kind=e.kind)

        tiles = []
        for t in self.tiles:
            keys = frozenset(self.key_of(i) for i in self.tile_edge_ids(t.key))
            tiles.append(
                Tile(
                    key=t.key,
                    ordinal=t.ordinal,
                    label=t.label,
                    rel_orientation=t.rel,
                    anchor=t.anchor,
                    corners={v: self.find(n) for v, n in t.corners.items()},
                    sides={s: tuple(self.key_of(i) for i in ids) for s, ids in t.sides.items()},
                    edges=keys,
                    shape=t.shape,
                    origin=t.origin,
                )
            )
        return nx.freeze(graph), tuple(tiles)


# -- type A construction ---------------------------------------------------


def _near_side(tau: Diagonal, s: Vertex, cfg: PolygonConfig) -> set[Vertex]:
    forward = cfg.between_ccw(tau.a, tau.b)
    return set(forward) if s in forward else set(cfg.between_ccw(tau.b, tau.a))


def crossing_sequence(gamma: Diagonal, tbar: Triangulation) -> list[int]:
    """Indices of the diagonals crossed by gamma, in order along gamma from its lower endpoint."""
    cfg = tbar.polygon
    if cfg.is_boundary(gamma.a, gamma.b):
        raise BoundarySegment(f"{gamma.render(cfg)} is a boundary segment")
    if gamma in tbar:
        raise DiagonalInTriangulation(f"{gamma.render(cfg)} is tau{tbar.index_of(gamma)}")
    s = gamma.a
    crossed = [i for i, tau in enumerate(tbar.diagonals, start=1) if crosses(gamma, tau)]
    return sorted(crossed, key=lambda i: len(_near_side(tbar.tau(i), s, cfg)))


def _quad_cycle(tbar: Triangulation, i: int, s: Vertex) -> list[Vertex]:
    """Corners around tau_i: endpoint, near apex, endpoint, far apex."""
    tau = tbar.tau(i)
    t1, t2 = quadrilateral(tbar, i)
    u1, u2 = apex(t1, tau), apex(t2, tau)
    near, far = (u1, u2) if u1 in _near_side(tau, s, tbar.polygon) else (u2, u1)
    return [tau.a, near, tau.b, far]


def _glued_side(cycle: list[Vertex], tau: Diagonal, following: Diagonal) -> Diagonal:
    far = cycle[3]
    (side,) = [d for d in (Diagonal.of(tau.a, far), Diagonal.of(tau.b, far)) if d != following]
    return side


def _place(cycles, glues, start: int, step: int) -> Optional[list[tuple[Point, dict[Vertex, Point]]]]:
    anchor = (0, 0)
    coords = {v: _SQUARE[(start + step * k) % 4] for k, v in enumerate(cycles[0])}
    placed = [(anchor, coords)]
    for j, side in enumerate(glues):
        a, b = side.endpoints
        pa, pb = coords[a], coords[b]
        normal = (pa[0] + pb[0] - 2 * anchor[0] - 1, pa[1] + pb[1] - 2 * anchor[1] - 1)
        if normal not in _GROWTH:
            return None
        nxt = cycles[j + 1]
        new = {a: pa, b: pb}
        for k, v in enumerate(nxt):
            if v in (a, b):
                continue
            base = nxt[k - 1] if nxt[k - 1] in (a, b) else nxt[(k + 1) % 4]
            new[v] = (new[base][0] + normal[0], new[base][1] + normal[1])
        anchor = (anchor[0] + normal[0], anchor[1] + normal[1])
        coords = new
        placed.append((anchor, coords))
    return placed


def _embed(cycles, glues):
    for start in range(4):
        for step in (1, -1):
            placed = _place(cycles, glues, start, step)
            if placed is not None:
                return placed
    raise ConventionError("no east/north embedding of the snake")


def _side_name(p: Point, q: Point, anchor: Point) -> str:
    if p[1] == q[1]:
        return "S" if p[1] == anchor[1] else "N"
    return "W" if p[0] == anchor[0] else "E"


def _relative_orientation(coords: dict[Vertex, Point], anchor: Point) -> int:
    by_pos = {pos: v for v, pos in coords.items()}
    seq = [by_pos[(anchor[0] + dx, anchor[1] + dy)] for dx, dy in _SQUARE]
    at = seq.index(min(seq))
    return 1 if seq[at:] + seq[:at] == sorted(seq) else -1


@dataclass
class SnakeDraft:
    """A type A snake graph still open for modification."""
    builder: GraphBuilder
    minimal: set[int]
    sequence: list[int]
    gamma: Diagonal
    triangulation: Triangulation


def _boundary_cycle(builder: GraphBuilder, start: Node) -> list[int]:
    H = nx.Graph()
    for edge_id, e in builder.edges.items():
        if e.kind == "tile" and len(e.tiles) == 1:
            H.add_edge(builder.find(e.u), builder.find(e.v), id=edge_id)
    cycle = nx.find_cycle(H, source=builder.find(start))
    if len(cycle) != H.number_of_edges():
        raise ConventionError("boundary of the snake graph is not a single cycle")
    return [H.edges[u, v]["id"] for u, v in cycle]


def snake_draft(gamma: Diagonal, tbar: Triangulation) -> SnakeDraft:
    cfg = tbar.polygon
    sequence = crossing_sequence(gamma, tbar)
    s = gamma.a
    cycles = [_quad_cycle(tbar, i, s) for i in sequence]
    glues = [
        _glued_side(cycles[j], tbar.tau(sequence[j]), tbar.tau(sequence[j + 1]))
        for j in range(len(sequence) - 1)
    ]
    placed = _embed(cycles, glues)

    builder = GraphBuilder()
    at: dict[Point, Node] = {}
    for ordinal, ((anchor, coords), i, cycle) in enumerate(zip(placed, sequence, cycles), start=1):
        corners = {}
        for v in cycle:
            pos = coords[v]
            if pos not in at:
                at[pos] = builder.add_node(pos, v)
            elif builder.nodes[at[pos]]["corner"] != v:
                raise ConventionError(f"two polygon vertices meet at {pos}")
            corners[v] = at[pos]
        key = ordinal - 1
        draft = _TileDraft(
            key=key,
            ordinal=ordinal,
            label=i,
            rel=_relative_orientation(coords, anchor),
            anchor=anchor,
            cycle=cycle,
            corners=corners,
            sides={},
            origin=gamma,
        )
        builder.tiles.append(draft)
        for k, a in enumerate(cycle):
            b = cycle[(k + 1) % 4]
            edge_id = builder.edge_between(corners[a], corners[b])
            side = Diagonal.of(a, b)
            if edge_id is None:
                edge_id = builder.add_edge(corners[a], corners[b], [Label(side, tbar.index_of(side))])
            builder.edges[edge_id].tiles.add(key)
            draft.sides.setdefault(_side_name(coords[a], coords[b], anchor), []).append(edge_id)

    # P- holds the first tile's edge from s to its counterclockwise successor in the first triangle
    first = builder.tiles[0]
    if first.cycle[1] != s:
        raise ConventionError(f"first tile of {gamma} does not contain its start {s}")
    u = min((first.cycle[0], first.cycle[2]), key=lambda v: (v - s) % cfg.vertex_count)
    start_edge = builder.edge_between(first.corners[s], first.corners[u])
    cycle = _boundary_cycle(builder, first.corners[s])
    parity = cycle.index(start_edge) % 2
    minimal = {edge_id for k, edge_id in enumerate(cycle) if k % 2 == parity}
    logger.debug(f"snake of {gamma.render(cfg)}: crossings {sequence}")
    return SnakeDraft(builder, minimal, sequence, gamma, tbar)


def freeze_draft(draft: SnakeDraft) -> SnakeGraph:
    graph, tiles = draft.builder.freeze()
    minimal = frozenset(draft.builder.key_of(i) for i in draft.minimal)
    G = SnakeGraph(graph, tiles, minimal, draft.triangulation.m, draft.triangulation.polygon, (draft.gamma,))
    check_perfect_matching(G, minimal)
    return G


@lru_cache(maxsize=4096)
def build_snake_graph(gamma: Diagonal, tbar: Triangulation) -> SnakeGraph:
    return freeze_draft(snake_draft(gamma, tbar))


def check_perfect_matching(G: SnakeGraph, P: PerfectMatching) -> None:
    covered = Counter(v for e in P for v in e)
    if set(covered) != set(G.graph.nodes) or any(c != 1 for c in covered.values()):
        raise ConventionError("minimal edge set is not a perfect matching")


# -- matchings -------------------------------------------------------------


def _edge_sort_key(graph: nx.Graph):
    def key(e: EdgeKey):
        return tuple(sorted((graph.nodes[v]["pos"], v) for v in e))
    return key


def perfect_matchings(graph: nx.Graph) -> list[PerfectMatching]:
    """All perfect matchings by backtracking over vertices in coordinate order."""
    nodes = sorted(graph.nodes, key=lambda v: (graph.nodes[v]["pos"], v))
    adjacency = {v: sorted(graph.neighbors(v), key=lambda w: (graph.nodes[w]["pos"], w)) for v in nodes}
    found: list[PerfectMatching] = []
    matched: set[Node] = set()
    chosen: list[EdgeKey] = []

    def extend() -> None:
        free = next((v for v in nodes if v not in matched), None)
        if free is None:
            found.append(frozenset(chosen))
            return
        matched.add(free)
        for w in adjacency[free]:
            if w in matched:
                continue
            matched.add(w)
            chosen.append(frozenset((free, w)))
            extend()
            chosen.pop()
            matched.discard(w)
        matched.discard(free)

    extend()
    return found


def brute_force_matchings(graph: nx.Graph) -> list[PerfectMatching]:
    nodes = set(graph.nodes)
    if len(nodes) % 2:
        return []
    edges = [frozenset(e) for e in graph.edges]
    found = []
    for subset in itertools.combinations(edges, len(nodes) // 2):
        covered = set().union(*subset) if subset else set()
        if covered == nodes:
            found.append(frozenset(subset))
    return found


def contributing_tiles(G: SnakeGraph, P: PerfectMatching) -> frozenset[int]:
    """
    Tile instances counted by the height monomial of P.

    A tile carrying an edge of P- counts iff P- and P share none of its edges.
    A tile without P- edges (the middle of a straight run) takes the status of
    a decided neighbour, flipped when their common edge lies in P- (+) P.
    """
    shared = G.minimal & P
    difference = G.minimal ^ P
    decided = {t.key: not (shared & t.edges) for t in G.tiles if G.minimal & t.edges}
    pending = [t for t in G.tiles if t.key not in decided]
    while pending:
        progress = []
        for tile in pending:
            for other in G.tiles:
                common = tile.edges & other.edges
                if other.key in decided and common:
                    decided[tile.key] = decided[other.key] ^ bool(common & difference)
                    progress.append(tile)
                    break
        if not progress:
            raise ConventionError("tile without minimal edges has no decided neighbour")
        pending = [t for t in pending if t not in progress]
    return frozenset(key for key, inside in decided.items() if inside)


def height_exponents(G: SnakeGraph, P: PerfectMatching) -> tuple[int, ...]:
    counted = contributing_tiles(G, P)
    exponents = [0] * G.variables
    for tile in G.tiles:
        if tile.key in counted:
            exponents[tile.label - 1] += 1
    return tuple(exponents)


def height_monomial(G: SnakeGraph, P: PerfectMatching) -> Polynomial:
    return y_monomial(height_exponents(G, P))


def enumerate_matchings(G: SnakeGraph) -> list[PerfectMatching]:
    """Perfect matchings ordered by height degree; index 0 is the minimal matching."""
    edge_key = _edge_sort_key(G.graph)
    return sorted(
        perfect_matchings(G.graph),
        key=lambda P: (sum(height_exponents(G, P)), sorted(edge_key(e) for e in P)),
    )


def minimal_matching(G: SnakeGraph) -> PerfectMatching:
    return G.minimal


def maximal_matching(G: SnakeGraph) -> PerfectMatching:
    top = len(G.tiles)
    (P,) = [P for P in perfect_matchings(G.graph) if sum(height_exponents(G, P)) == top]
    return P


def f_polynomial(G: SnakeGraph) -> Polynomial:
    return from_terms(G.variables, ((height_exponents(G, P), 1) for P in perfect_matchings(G.graph)))


def label_incidences(G: SnakeGraph, P: PerfectMatching) -> tuple[int, ...]:
    counts = [0] * G.variables
    for e in P:
        for label in G.labels(e):
            if label.index is not None:
                counts[label.index - 1] += 1
    return tuple(counts)


def g_vector(G: SnakeGraph) -> GVector:
    counts = list(label_incidences(G, G.minimal))
    for label in G.crossings:
        counts[label - 1] -= 1
    return tuple(counts)


@lru_cache(maxsize=8192)
def diagonal_expansion(gamma: Diagonal, tbar: Triangulation) -> tuple[Polynomial, GVector]:
    """F and g of any vertex pair: tau_i gives (1, e_i) and a boundary segment (1, 0)."""
    m = tbar.m
    if tbar.polygon.is_boundary(gamma.a, gamma.b):
        return one(m), zero_vector(m)
    if gamma in tbar:
        return one(m), unit(tbar.index_of(gamma), m)
    G = build_snake_graph(gamma, tbar)
    return f_polynomial(G), g_vector(G)


def skein_check(gamma1: Diagonal, gamma2: Diagonal, tbar: Triangulation) -> bool:
    if not crosses(gamma1, gamma2):
        raise NotCrossing(f"{gamma1} and {gamma2} do not cross")
    a, b = gamma1.endpoints
    c, d = gamma2.endpoints

    def F(u: Vertex, v: Vertex) -> Polynomial:
        return diagonal_expansion(Diagonal.of(u, v), tbar)[0]

    ac, bd = Diagonal.of(a, c), Diagonal.of(b, d)
    ad, bc = Diagonal.of(a, d), Diagonal.of(b, c)
    left = F(a, b) * F(c, d)
    right = (
        y_monomial(crossing_vector(ac, bd, tbar)) * F(a, d) * F(b, c)
        + y_monomial(crossing_vector(ad, bc, tbar)) * F(a, c) * F(b, d)
    )
    return left == right


def enclosed_tiles(G: SnakeGraph, P: PerfectMatching) -> frozenset[int]:
    """Tiles inside the cycles of P- (+) P, by counting vertical cycle edges right of each centre."""
    pos = G.graph.nodes
    difference = G.minimal ^ P
    vertical = []
    for e in difference:
        (x1, y1), (x2, y2) = (pos[v]["pos"] for v in e)
        if x1 == x2:
            vertical.append((x1, min(y1, y2), max(y1, y2)))
    enclosed = set()
    for tile in G.tiles:
        cx, cy = tile.center
        hits = sum(1 for x, lo, hi in vertical if x > cx and lo < cy < hi)
        if hits % 2:
            enclosed.add(tile.key)
    return frozenset(enclosed)


def laurent_expansion(G: SnakeGraph) -> LaurentPolynomial:
    """Sum over matchings of x(P) y(P), divided by the product of the crossed x's."""
    m = G.variables
    counts: Counter = Counter()
    for P in perfect_matchings(G.graph):
        counts[label_incidences(G, P) + height_exponents(G, P)] += 1
    shift = [0] * m
    for label in G.crossings:
        shift[label - 1] += 1
    return LaurentPolynomial.make(xy_ring(m).from_dict(dict(counts)), tuple(shift))


def diagonal_laurent(gamma: Diagonal, tbar: Triangulation) -> LaurentPolynomial:
    m = tbar.m
    if tbar.polygon.is_boundary(gamma.a, gamma.b):
        return LaurentPolynomial.make(xy_ring(m).one, (0,) * m)
    if gamma in tbar:
        return LaurentPolynomial.variable(tbar.index_of(gamma), m)
    return laurent_expansion(build_snake_graph(gamma, tbar))
