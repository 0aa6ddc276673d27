"""
Modified snake graphs of theta-orbits for types B and C, and the closed
formulas they are cross-checked against.

Everything is computed on the restricted polygon of the triangulation: the
left vertices keep their order, the tail of the diameter is n+1, the head is
0 and every vertex right of the diameter is the single vertex '*'.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Literal, Optional

import networkx as nx

from foldmatch.exceptions import (
    ConventionError,
    NoCommonExteriorEdge,
    UnsupportedTriangulationForB,
)
from foldmatch.geometry import (
    Chirality,
    Diagonal,
    ThetaOrbit,
    Triangulation,
    Vertex,
    chirality,
    crosses,
    crossing_vector,
    diameter_corner,
    mirror,
    mirror_orbit,
    order_pair,
    restrict,
    restrict_orbit,
    rotated_restrict_orbit,
    rotated_restrict_vector,
)
from foldmatch.polynomial import (
    GVector,
    Polynomial,
    add_vectors,
    one,
    sub_vectors,
    unit,
    y_monomial,
)
from foldmatch.snake import (
    EdgeKey,
    GraphBuilder,
    Label,
    Node,
    SnakeDraft,
    SnakeGraph,
    check_perfect_matching,
    diagonal_expansion,
    f_polynomial,
    g_vector,
    height_exponents,
    perfect_matchings,
    snake_draft,
)

logger = logging.getLogger(__name__)

Kind = Literal["B", "C"]

_DIHEDRAL = (
    lambda x, y: (x, y),
    lambda x, y: (-y, x),
    lambda x, y: (-x, -y),
    lambda x, y: (y, -x),
    lambda x, y: (x, -y),
    lambda x, y: (y, x),
    lambda x, y: (-x, y),
    lambda x, y: (-y, -x),
)


@dataclass(frozen=True, eq=False)
class ModifiedSnakeGraph(SnakeGraph):
    kind: Kind = "B"
    arc: Optional[EdgeKey] = None
    glued: tuple[EdgeKey, ...] = ()


@dataclass
class HatDraft:
    draft: SnakeDraft
    middle: Optional[int] = None
    hexagon: Optional[tuple[Node, Node]] = None

    @property
    def builder(self) -> GraphBuilder:
        return self.draft.builder


# -- shared helpers --------------------------------------------------------


def orbit_index(o: ThetaOrbit, T: Triangulation) -> Optional[int]:
    """Index 1..n of an orbit lying in T, else None."""
    if not all(d in T for d in o.diagonals):
        return None
    i = T.index_of(o.representative)
    return min(i, 2 * T.rank - i)


def diameter_apex(T: Triangulation) -> Vertex:
    """Third vertex of the restricted diameter's left triangle."""
    R = restrict(T)
    ends = {R.head, R.tail}
    for tri in R.triangulation.triangles:
        if ends <= set(tri) and R.star not in tri:
            (x,) = set(tri) - ends
            return x
    raise ConventionError("restricted diameter has no left triangle")


def b_corners(T: Triangulation) -> tuple[Vertex, Vertex, Vertex]:
    """
    (A, C1, C0): A is the endpoint of the restricted diameter on tau_{n-1},
    C1 the other end of tau_{n-1} and C0 the other end of the diameter.
    """
    R = restrict(T)
    tbar = R.triangulation
    n = T.rank
    corner = diameter_corner(T)
    c1 = tbar.tau(n - 1).other(corner)
    c0 = tbar.tau(n).other(corner)
    if not R.polygon.is_boundary(c1, c0):
        raise UnsupportedTriangulationForB(
            f"tau{n - 1} and the diameter bound a triangle with a diagonal third side "
            f"{Diagonal.of(c1, c0).render(R.polygon)}"
        )
    return corner, c1, c0


def _tile_with_label(builder: GraphBuilder, label: int):
    return next((t for t in builder.tiles if t.label == label), None)


def _opposite_sides(builder: GraphBuilder, tile) -> list[tuple[int, int]]:
    sides = []
    for k in range(4):
        a, b = tile.cycle[k], tile.cycle[(k + 1) % 4]
        sides.append(builder.edge_between(tile.corners[a], tile.corners[b]))
    return [
        (sides[k], sides[(k + 2) % 4])
        for k in range(4)
        if sides[k] is not None and sides[(k + 2) % 4] is not None
    ]


def _outward(builder: GraphBuilder, tile, edge_id: int) -> tuple[float, float]:
    e = builder.edges[edge_id]
    (x1, y1), (x2, y2) = builder.nodes[e.u]["pos"], builder.nodes[e.v]["pos"]
    cx, cy = tile.anchor[0] + 0.5, tile.anchor[1] + 0.5
    return ((x1 + x2) / 2 - cx, (y1 + y2) / 2 - cy)


def _glued_minimal(first: set[int], second: set[int], e1: int, e2: int) -> set[int]:
    """P- of a glued graph: the shared edge stays only when both parts use it."""
    in_first, in_second = e1 in first, e2 in second
    if not (in_first or in_second):
        raise ConventionError("glued edge lies in neither minimal matching")
    merged = first | second
    if in_first and in_second:
        return merged - {e2}
    return merged - {e1, e2}


def _placement(target: GraphBuilder, ends: tuple[Node, Node], other: GraphBuilder, other_ends: tuple[Node, Node]):
    """A rigid motion putting `other` across the glued edge, away from `target`."""

    def centroid(builder: GraphBuilder) -> tuple[float, float]:
        points = [data["pos"] for data in builder.nodes.values()]
        return (sum(p[0] for p in points) / len(points), sum(p[1] for p in points) / len(points))

    P, Q = (target.nodes[n]["pos"] for n in ends)
    p, q = (other.nodes[n]["pos"] for n in other_ends)
    mid = ((P[0] + Q[0]) / 2, (P[1] + Q[1]) / 2)
    mid_other = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
    c1, c2 = centroid(target), centroid(other)
    away = (mid[0] - c1[0], mid[1] - c1[1])
    direction = (Q[0] - P[0], Q[1] - P[1])
    for R in _DIHEDRAL:
        dx, dy = R(q[0] - p[0], q[1] - p[1])
        if abs(dx * direction[1] - dy * direction[0]) > 1e-9 or dx * direction[0] + dy * direction[1] <= 0:
            continue
        ox, oy = R(c2[0] - mid_other[0], c2[1] - mid_other[1])
        if ox * away[0] + oy * away[1] < 0:
            continue
        rx, ry = R(*mid_other)
        shift = (mid[0] - rx, mid[1] - ry)
        return lambda pos, R=R, shift=shift: (R(*pos)[0] + shift[0], R(*pos)[1] + shift[1])
    width = max(data["pos"][0] for data in target.nodes.values()) + 2
    return lambda pos: (pos[0] + width, pos[1])


def _freeze(builder: GraphBuilder, minimal: set[int], T: Triangulation, kind: Kind, source, arc=None, glued=()) -> ModifiedSnakeGraph:
    R = restrict(T)
    graph, tiles = builder.freeze()
    G = ModifiedSnakeGraph(
        graph=graph,
        tiles=tiles,
        minimal=frozenset(builder.key_of(i) for i in minimal),
        variables=T.rank,
        polygon=R.polygon,
        source=tuple(source),
        kind=kind,
        arc=builder.key_of(arc) if arc is not None else None,
        glued=tuple(builder.key_of(i) for i in glued),
    )
    check_perfect_matching(G, G.minimal)
    return G


_TRANSPOSED = {"N": "E", "E": "N", "S": "W", "W": "S"}


def _top_matching(G: SnakeGraph):
    heights = {P: sum(height_exponents(G, P)) for P in perfect_matchings(G.graph)}
    best = max(heights.values())
    top = [P for P, h in heights.items() if h == best]
    if len(top) != 1:
        raise ConventionError(f"{len(top)} matchings reach the top height")
    return top[0]


def _reflected(G: ModifiedSnakeGraph, T: Triangulation) -> ModifiedSnakeGraph:
    """
    A graph built on the mirror of T, read back in T. Positions are transposed,
    restricted vertex k is renamed n+1-k and the top matching becomes P-.
    """
    star = restrict(T).star

    def name(v: Vertex) -> Vertex:
        return v if v == star else T.rank + 1 - v

    def side(d: Diagonal) -> Diagonal:
        return Diagonal.of(name(d.a), name(d.b))

    graph = nx.Graph()
    for node, data in G.graph.nodes(data=True):
        x, y = data["pos"]
        corner = data["corner"]
        graph.add_node(node, pos=(y, x), corner=None if corner is None else name(corner))
    for u, v, data in G.graph.edges(data=True):
        labels = tuple(Label(side(lab.side), lab.index) for lab in data["labels"])
        graph.add_edge(u, v, labels=labels, tiles=data["tiles"], kind=data["kind"])

    tiles = tuple(
        replace(
            t,
            anchor=(t.anchor[1], t.anchor[0]),
            corners={name(v): node for v, node in t.corners.items()},
            sides={_TRANSPOSED[s]: ids for s, ids in t.sides.items()},
            origin=None if t.origin is None else side(t.origin),
        )
        for t in G.tiles
    )
    H = ModifiedSnakeGraph(
        graph=nx.freeze(graph),
        tiles=tiles,
        minimal=_top_matching(G),
        variables=G.variables,
        polygon=G.polygon,
        source=tuple(side(d) for d in G.source),
        kind=G.kind,
        arc=G.arc,
        glued=G.glued,
    )
    check_perfect_matching(H, H.minimal)
    return H


# -- type B ----------------------------------------------------------------


def hat_B_draft(gamma: Diagonal, T: Triangulation) -> HatDraft:
    R = restrict(T)
    tbar = R.triangulation
    n = T.rank
    corner, c1, c0 = b_corners(T)
    hat = HatDraft(snake_draft(gamma, tbar))
    b = hat.builder

    hexagon = _tile_with_label(b, n - 1)
    if hexagon is not None:
        edge_id = b.edge_between(hexagon.corners[corner], hexagon.corners[c0])
        if edge_id is None:
            raise ConventionError(f"tile {n - 1} has no edge labeled {n}")
        starts_at_corner = b.edges[edge_id].u == hexagon.corners[corner]
        diameter = [Label(tbar.tau(n), n)]
        inner, (first, middle, last) = b.subdivide(
            edge_id, [diameter, [Label(Diagonal.of(c1, c0))], diameter], _outward(b, hexagon, edge_id)
        )
        hexagon.shape = "hexagon"
        if edge_id in hat.draft.minimal:
            hat.draft.minimal -= {edge_id}
            hat.draft.minimal |= {first, last}
        else:
            hat.draft.minimal.add(middle)
        hat.middle = middle
        hat.hexagon = tuple(inner) if starts_at_corner else tuple(reversed(inner))

    last_tile = _tile_with_label(b, n)
    if last_tile is not None:
        for edge_id, opposite in _opposite_sides(b, last_tile):
            if len(b.edges[edge_id].tiles) == 2:
                labels = b.edges[opposite].labels
                labels.extend(lab for lab in b.edges[edge_id].labels if lab not in labels)
    return hat


def build_hat_B(gamma: Diagonal, T: Triangulation) -> ModifiedSnakeGraph:
    hat = hat_B_draft(gamma, T)
    return _freeze(hat.builder, hat.draft.minimal, T, "B", (gamma,))


def build_G_ab_B(o: ThetaOrbit, T: Triangulation) -> ModifiedSnakeGraph:
    corner, c1, c0 = b_corners(T)
    res = restrict_orbit(o, T)
    if len(res) == 1:
        return build_hat_B(res[0], T)
    if chirality(T) is Chirality.CCW:
        # the gluing below assumes tau_{n-1} ends at the tail
        logger.debug(f"glued B graph of {o} built on the mirror", extra={"orbit": str(o)})
        return _reflected(build_G_ab_B(mirror_orbit(o, T), mirror(T)), T)

    R = restrict(T)
    n = T.rank
    gamma1, gamma2 = order_pair(res, T)
    first, second = hat_B_draft(gamma1, T), hat_B_draft(gamma2, T)
    if first.middle is None:
        raise ConventionError(f"{gamma1.render(R.polygon)} does not cross tau{n - 1}")
    b = first.builder
    h_corner, h_far = first.hexagon
    anchor = _tile_with_label(b, n - 1).corners[c1]

    other = second.builder
    tile_n = _tile_with_label(other, n)
    if second.hexagon is not None:
        ends = (tile_n.corners[R.star], tile_n.corners[corner])
        arc_to = second.hexagon[1]
    else:
        ends = (tile_n.corners[c1], tile_n.corners[c0])
        arc_to = None
    e2 = other.edge_between(*ends)
    if e2 is None:
        raise ConventionError(f"{gamma2.render(R.polygon)} has no free edge on tile {n}")

    node_map, edge_map, _ = b.absorb(other, _placement(b, (h_corner, h_far), other, ends))
    b.identify(h_corner, node_map[ends[0]])
    b.identify(h_far, node_map[ends[1]])
    minimal = _glued_minimal(first.draft.minimal, {edge_map[i] for i in second.draft.minimal}, first.middle, edge_map[e2])
    arc = b.add_edge(anchor, node_map[arc_to], kind="arc") if arc_to is not None else None
    logger.debug(
        f"glued B graph of {o}",
        extra={"orbit": str(o), "parts": [gamma1.render(R.polygon), gamma2.render(R.polygon)], "arc": arc is not None},
    )
    return _freeze(b, minimal, T, "B", (gamma1, gamma2), arc=arc, glued=(first.middle,))


# -- type C ----------------------------------------------------------------


def hat_C_draft(gamma: Diagonal, T: Triangulation) -> HatDraft:
    R = restrict(T)
    hat = HatDraft(snake_draft(gamma, R.triangulation))
    b = hat.builder
    last_tile = _tile_with_label(b, T.rank)
    if last_tile is not None:
        own = {i: list(b.edges[i].labels) for i in b.tile_edge_ids(last_tile.key)}
        for edge_id, opposite in _opposite_sides(b, last_tile):
            labels = b.edges[opposite].labels
            labels.extend(lab for lab in own[edge_id] if lab not in labels)
    return hat


def build_hat_C(gamma: Diagonal, T: Triangulation) -> ModifiedSnakeGraph:
    hat = hat_C_draft(gamma, T)
    return _freeze(hat.builder, hat.draft.minimal, T, "C", (gamma,))


def _gluing_side(builder: GraphBuilder, tile, ell: Diagonal) -> tuple[int, tuple[Node, Node], tuple[Vertex, Vertex]]:
    """
    Exterior edge of the last tile carrying ell, a copied label preferred.
    Returns the edge, its two nodes and the polygon names they stand for.
    """
    found = []
    for k in range(4):
        a, b = tile.cycle[k], tile.cycle[(k + 1) % 4]
        edge_id = builder.edge_between(tile.corners[a], tile.corners[b])
        if edge_id is None or len(builder.edges[edge_id].tiles) != 1:
            continue
        labels = builder.edges[edge_id].labels
        if not any(lab.side == ell for lab in labels):
            continue
        if Diagonal.of(a, b) == ell:
            found.append((1, edge_id, (tile.corners[a], tile.corners[b]), (a, b)))
        else:
            # a copied side stands for the opposite side of the tile, mirrored across it
            c, d = tile.cycle[(k + 2) % 4], tile.cycle[(k + 3) % 4]
            found.append((0, edge_id, (tile.corners[b], tile.corners[a]), (c, d)))
    if not found:
        raise NoCommonExteriorEdge(f"no exterior edge of tile {tile.label} carries {ell}")
    _, edge_id, nodes, names = min(found)
    return edge_id, nodes, names


def _diameter_end(gamma: Diagonal, R) -> Vertex:
    for v in gamma.endpoints:
        if v in (R.head, R.tail):
            return v
    raise NoCommonExteriorEdge(f"{gamma.render(R.polygon)} does not end on the diameter")


def build_G_ab_C(o: ThetaOrbit, T: Triangulation) -> ModifiedSnakeGraph:
    rotated = rotated_restrict_orbit(o, T)
    if len(rotated) == 1:
        return build_hat_C(rotated[0], T)

    R = restrict(T)
    n = T.rank
    gamma1, gamma2 = rotated
    e = _diameter_end(gamma2, R)
    ell = Diagonal.of(e, diameter_apex(T))

    first, second = hat_C_draft(gamma1, T), hat_C_draft(gamma2, T)
    b = first.builder
    tile_n = _tile_with_label(b, n)
    if tile_n is None:
        raise NoCommonExteriorEdge(f"{gamma1.render(R.polygon)} does not cross the diameter")
    e1, nodes, names = _gluing_side(b, tile_n, ell)

    other = second.builder
    e2 = None
    for tile in other.tiles:
        if set(ell.endpoints) <= set(tile.corners):
            candidate = other.edge_between(tile.corners[ell.a], tile.corners[ell.b])
            if candidate is not None and len(other.edges[candidate].tiles) == 1:
                e2, corners = candidate, tile.corners
                break
    if e2 is None:
        raise NoCommonExteriorEdge(f"{gamma2.render(R.polygon)} has no exterior edge {ell.render(R.polygon)}")

    ends = (corners[names[0]], corners[names[1]])
    node_map, edge_map, _ = b.absorb(other, _placement(b, nodes, other, ends))
    b.identify(nodes[0], node_map[ends[0]])
    b.identify(nodes[1], node_map[ends[1]])
    minimal = _glued_minimal(first.draft.minimal, {edge_map[i] for i in second.draft.minimal}, e1, edge_map[e2])
    logger.debug(f"glued C graph of {o} along {ell.render(R.polygon)}", extra={"orbit": str(o)})
    return _freeze(b, minimal, T, "C", (gamma1, gamma2), glued=(e1,))


def build_G_ab(o: ThetaOrbit, T: Triangulation, kind: Kind) -> ModifiedSnakeGraph:
    return build_G_ab_B(o, T) if kind == "B" else build_G_ab_C(o, T)


# -- values ----------------------------------------------------------------


def f_polynomial_modified(G: ModifiedSnakeGraph) -> Polynomial:
    return f_polynomial(G)


def g_vector_modified(G: ModifiedSnakeGraph) -> GVector:
    return g_vector(G)


def orbit_expansion(o: ThetaOrbit, T: Triangulation, kind: Kind) -> tuple[Polynomial, GVector]:
    """F and g read off the modified snake graph; orbits of T give (1, e_i)."""
    n = T.rank
    i = orbit_index(o, T)
    if i is not None:
        return one(n), unit(i, n)
    G = build_G_ab(o, T, kind)
    return f_polynomial_modified(G), g_vector_modified(G)


def _F(gamma: Diagonal, T: Triangulation) -> Polynomial:
    return diagonal_expansion(gamma, restrict(T).triangulation)[0]


def _g(gamma: Diagonal, T: Triangulation) -> GVector:
    return diagonal_expansion(gamma, restrict(T).triangulation)[1]


def f_B_formula(o: ThetaOrbit, T: Triangulation) -> Polynomial:
    n = T.rank
    if orbit_index(o, T) is not None:
        return one(n)
    R = restrict(T)
    res = restrict_orbit(o, T)
    if len(res) == 1:
        return _F(res[0], T)
    gamma1, gamma2 = order_pair(res, T)
    p, q = gamma1.other(R.star), gamma2.other(R.star)
    exponent = crossing_vector(gamma1, gamma2, R.triangulation)
    return _F(gamma1, T) * _F(gamma2, T) - y_monomial(exponent) * _F(Diagonal.of(p, q), T)


def _diameter_correction(T: Triangulation) -> Optional[int]:
    """Index i when (x, tail) is a diagonal tau_i of the restriction, x the diameter's apex."""
    R = restrict(T)
    return R.triangulation.index_of(Diagonal.of(diameter_apex(T), R.tail))


def f_C_formula(o: ThetaOrbit, T: Triangulation) -> Polynomial:
    n = T.rank
    if orbit_index(o, T) is not None:
        return one(n)
    rotated = rotated_restrict_orbit(o, T)
    if len(rotated) == 1:
        return _F(rotated[0], T)

    R = restrict(T)
    tbar = R.triangulation
    star = R.star
    gamma1, gamma2 = rotated
    p = gamma1.other(star)
    e = _diameter_end(gamma2, R)
    q = gamma2.other(e)
    far = R.head if e == R.tail else R.tail
    x = diameter_apex(T)
    summed = add_vectors(
        crossing_vector(Diagonal.of(q, star), Diagonal.of(x, e), tbar),
        crossing_vector(Diagonal.of(p, e), Diagonal.of(far, star), tbar),
    )
    exponent = rotated_restrict_vector(summed, n)
    second = one(n) if q == x else _F(Diagonal.of(q, x), T)
    return _F(gamma1, T) * _F(gamma2, T) - y_monomial(exponent) * _F(Diagonal.of(p, far), T) * second


def g_C_formula(o: ThetaOrbit, T: Triangulation) -> GVector:
    n = T.rank
    i = orbit_index(o, T)
    if i is not None:
        return unit(i, n)
    R = restrict(T)
    correction = _diameter_correction(T)
    rotated = rotated_restrict_orbit(o, T)
    if len(rotated) == 1:
        (gamma,) = rotated
        g = _g(gamma, T)
        if correction is not None and crosses(gamma, R.triangulation.tau(n)):
            g = add_vectors(g, unit(correction, n))
        return g

    gamma1, gamma2 = rotated
    g = add_vectors(_g(gamma1, T), _g(gamma2, T))
    if correction is None:
        return g
    e = _diameter_end(gamma2, R)
    side = Diagonal.of(e, diameter_apex(T))
    return add_vectors(g, sub_vectors(unit(correction, n), _g(side, T)))
