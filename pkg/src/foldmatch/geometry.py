from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Iterable, Literal, Optional, Sequence

from foldmatch.exceptions import (
    BoundarySegment,
    CompanionOrbitNotFound,
    CrossingDiagonals,
    DiameterNotAtIndexN,
    InvalidOperation,
    NoCommonTriangle,
    NotMaximal,
    NotThetaInvariant,
    OddDiameterCoordinate,
    OrbitInTriangulation,
)

logger = logging.getLogger(__name__)

Vertex = int
Triangle = tuple[int, int, int]


class Chirality(str, Enum):
    CW = "cw"
    CCW = "ccw"


@dataclass(frozen=True)
class PolygonConfig:
    """
    A convex polygon with vertices 0..vertex_count-1 in counterclockwise order.

    full        the (2n+2)-gon carrying the half-turn theta
    restricted  the (n+3)-gon obtained by collapsing the right of the diameter;
                its last vertex is the collapsed vertex '*'
    plain       an (n+3)-gon with no extra structure (type A)
    """
    rank: int
    kind: Literal["full", "restricted", "plain"] = "plain"

    def __post_init__(self) -> None:
        if self.rank < 1 or self.vertex_count < 4:
            raise InvalidOperation(f"polygon of rank {self.rank} has fewer than 4 vertices")

    @property
    def vertex_count(self) -> int:
        if self.kind == "full":
            return 2 * self.rank + 2
        return self.rank + 3

    @property
    def star(self) -> Optional[int]:
        return self.vertex_count - 1 if self.kind == "restricted" else None

    def vertex_name(self, v: Vertex) -> str:
        return "*" if v == self.star else str(v)

    def is_boundary(self, a: Vertex, b: Vertex) -> bool:
        return (a - b) % self.vertex_count in (1, self.vertex_count - 1)

    def boundary_segments(self) -> list[BoundaryEdge]:
        count = self.vertex_count
        return sorted(Diagonal.of(v, (v + 1) % count) for v in range(count))

    def all_diagonals(self) -> list[Diagonal]:
        count = self.vertex_count
        return [
            Diagonal(a, b)
            for a, b in itertools.combinations(range(count), 2)
            if not self.is_boundary(a, b)
        ]

    def between_ccw(self, start: Vertex, stop: Vertex) -> list[Vertex]:
        """Vertices strictly after `start` and strictly before `stop`, counterclockwise."""
        count = self.vertex_count
        steps = (stop - start) % count
        return [(start + k) % count for k in range(1, steps)]


@dataclass(frozen=True, order=True)
class Diagonal:
    """An unordered vertex pair stored with a < b. Boundary segments share this shape."""
    a: Vertex
    b: Vertex

    @classmethod
    def of(cls, u: Vertex, v: Vertex) -> "Diagonal":
        if u == v:
            raise InvalidOperation(f"degenerate diagonal ({u},{v})")
        return cls(min(u, v), max(u, v))

    @property
    def endpoints(self) -> tuple[Vertex, Vertex]:
        return (self.a, self.b)

    def other(self, v: Vertex) -> Vertex:
        if v == self.a:
            return self.b
        if v == self.b:
            return self.a
        raise InvalidOperation(f"{v} is not an endpoint of {self}")

    def render(self, cfg: Optional[PolygonConfig] = None) -> str:
        if cfg is None:
            return f"({self.a},{self.b})"
        return f"({cfg.vertex_name(self.a)},{cfg.vertex_name(self.b)})"

    def __str__(self) -> str:
        return self.render()


BoundaryEdge = Diagonal


def crosses(d1: Diagonal, d2: Diagonal) -> bool:
    """Strict interior crossing: the endpoints interleave on the circle."""
    a, b = d1.a, d1.b
    inside = [a < v < b for v in d2.endpoints if v not in (a, b)]
    return len(inside) == 2 and inside[0] != inside[1]


def theta(v: Vertex, cfg: PolygonConfig) -> Vertex:
    if cfg.kind != "full":
        raise InvalidOperation("theta is only defined on the full polygon")
    return (v + cfg.rank + 1) % cfg.vertex_count


def theta_diagonal(d: Diagonal, cfg: PolygonConfig) -> Diagonal:
    return Diagonal.of(theta(d.a, cfg), theta(d.b, cfg))


def is_diameter(d: Diagonal, cfg: PolygonConfig) -> bool:
    return cfg.kind == "full" and theta(d.a, cfg) == d.b


@dataclass(frozen=True)
class ThetaOrbit:
    diagonals: frozenset[Diagonal]

    @property
    def is_diameter(self) -> bool:
        return len(self.diagonals) == 1

    @property
    def representative(self) -> Diagonal:
        return min(self.diagonals)

    def __str__(self) -> str:
        return "{" + ",".join(str(d) for d in sorted(self.diagonals)) + "}"


def orbit_of(gamma: Diagonal, cfg: PolygonConfig) -> ThetaOrbit:
    return ThetaOrbit(frozenset({gamma, theta_diagonal(gamma, cfg)}))


@dataclass(frozen=True)
class Triangulation:
    """
    Indexed diagonals tau_1..tau_m of a polygon.
    For a full polygon, `orientation` is the (tail, head) of the diameter tau_n.
    """
    polygon: PolygonConfig
    diagonals: tuple[Diagonal, ...]
    orientation: Optional[tuple[Vertex, Vertex]] = None

    @classmethod
    def from_pairs(
        cls,
        polygon: PolygonConfig,
        pairs: Iterable[Sequence[int]],
        orientation: Optional[tuple[Vertex, Vertex]] = None,
    ) -> "Triangulation":
        pairs = [tuple(p) for p in pairs]
        if polygon.kind == "full" and orientation is None and len(pairs) >= polygon.rank:
            orientation = pairs[polygon.rank - 1]
            orientation = (orientation[0], orientation[1])
        return cls(polygon, tuple(Diagonal.of(u, v) for u, v in pairs), orientation)

    @property
    def m(self) -> int:
        return len(self.diagonals)

    @property
    def rank(self) -> int:
        return self.polygon.rank

    def tau(self, i: int) -> Diagonal:
        return self.diagonals[i - 1]

    def index_of(self, d: Diagonal) -> Optional[int]:
        return self._index.get(d)

    def __contains__(self, d: object) -> bool:
        return d in self._index

    @cached_property
    def _index(self) -> dict[Diagonal, int]:
        return {d: i for i, d in enumerate(self.diagonals, start=1)}

    @property
    def tail(self) -> Vertex:
        return self._oriented()[0]

    @property
    def head(self) -> Vertex:
        return self._oriented()[1]

    def _oriented(self) -> tuple[Vertex, Vertex]:
        if self.polygon.kind != "full":
            raise InvalidOperation("only full triangulations carry an oriented diameter")
        if self.orientation is not None:
            return self.orientation
        d = self.tau(self.rank)
        return (d.b, d.a)

    @cached_property
    def triangles(self) -> list[Triangle]:
        return validate(self)

    def crossing_set(self, gamma: Diagonal) -> frozenset[int]:
        return frozenset(i for i, t in enumerate(self.diagonals, start=1) if crosses(gamma, t))

    def key(self) -> frozenset[Diagonal]:
        return frozenset(self.diagonals)

    def __str__(self) -> str:
        cfg = self.polygon
        return "[" + ", ".join(f"tau{i}={d.render(cfg)}" for i, d in enumerate(self.diagonals, start=1)) + "]"


def _triangle_sides(tri: Triangle) -> list[Diagonal]:
    a, b, c = tri
    return [Diagonal.of(a, b), Diagonal.of(b, c), Diagonal.of(c, a)]


def validate(T: Triangulation) -> list[Triangle]:
    """
    Check that T is a triangulation and return its triangles as counterclockwise triples.
    Full triangulations are also checked for the theta-symmetric indexing.
    """
    cfg = T.polygon
    count = cfg.vertex_count
    for d in T.diagonals:
        if not (0 <= d.a < count and 0 <= d.b < count):
            raise InvalidOperation(f"{d} has a vertex outside 0..{count - 1}")
        if cfg.is_boundary(d.a, d.b):
            raise BoundarySegment(f"{d} is a boundary segment")
    if len(set(T.diagonals)) != len(T.diagonals):
        raise NotMaximal("triangulation lists a diagonal twice")
    if len(T.diagonals) != count - 3:
        raise NotMaximal(f"expected {count - 3} diagonals, got {len(T.diagonals)}")
    for d1, d2 in itertools.combinations(T.diagonals, 2):
        if crosses(d1, d2):
            raise CrossingDiagonals(f"{d1} crosses {d2}")

    if cfg.kind == "full":
        n = cfg.rank
        d = T.tau(n)
        if not is_diameter(d, cfg):
            raise DiameterNotAtIndexN(f"tau{n}={d} is not a diameter")
        for i in range(1, n):
            if T.tau(2 * n - i) != theta_diagonal(T.tau(i), cfg):
                raise NotThetaInvariant(f"tau{2 * n - i} is not the half-turn of tau{i}")
        if T.orientation is not None and Diagonal.of(*T.orientation) != d:
            raise InvalidOperation(f"orientation {T.orientation} is not the diameter {d}")

    triangles = _faces(cfg, frozenset(T.diagonals))
    if len(triangles) != count - 2:
        raise NotMaximal(f"found {len(triangles)} triangles, expected {count - 2}")
    return list(triangles)


@lru_cache(maxsize=4096)
def _faces(cfg: PolygonConfig, diagonals: frozenset[Diagonal]) -> tuple[Triangle, ...]:
    edges = diagonals | set(cfg.boundary_segments())
    return tuple(
        tri
        for tri in itertools.combinations(range(cfg.vertex_count), 3)
        if all(side in edges for side in _triangle_sides(tri))
    )


def quadrilateral(T: Triangulation, i: int) -> tuple[Triangle, Triangle]:
    """The two triangles of T on either side of tau_i."""
    d = T.tau(i)
    found = tuple(tri for tri in _faces(T.polygon, frozenset(T.diagonals)) if d in _triangle_sides(tri))
    if len(found) != 2:
        raise InvalidOperation(f"tau{i} does not bound two triangles")
    return found


def apex(tri: Triangle, side: Diagonal) -> Vertex:
    (v,) = set(tri) - set(side.endpoints)
    return v


def flip(T: Triangulation, i: int) -> Triangulation:
    """Replace tau_i by the other diagonal of its quadrilateral."""
    t1, t2 = quadrilateral(T, i)
    d = T.tau(i)
    new = Diagonal.of(apex(t1, d), apex(t2, d))
    diagonals = list(T.diagonals)
    diagonals[i - 1] = new
    return Triangulation(T.polygon, tuple(diagonals), T.orientation)


def flip_orbit(T: Triangulation, k: int) -> Triangulation:
    """Flip the orbit with index k of a theta-invariant triangulation."""
    n = T.rank
    if k == n:
        flipped = flip(T, n)
        new = flipped.tau(n)
        tail, head = T._oriented()
        orientation = (new.b, new.a) if tail > head else (new.a, new.b)
        return Triangulation(T.polygon, flipped.diagonals, orientation)
    flipped = flip(flip(T, k), 2 * n - k)
    return Triangulation(T.polygon, flipped.diagonals, T._oriented())


# -- restriction -----------------------------------------------------------


@dataclass(frozen=True)
class Restriction:
    """The restricted (n+3)-gon of a theta-invariant triangulation."""
    source: Triangulation
    polygon: PolygonConfig
    triangulation: Triangulation
    vertex_map: dict[Vertex, Vertex]

    def __hash__(self) -> int:
        return hash((self.source, self.triangulation))

    @property
    def star(self) -> Vertex:
        return self.polygon.star

    @property
    def tail(self) -> Vertex:
        return self.source.rank + 1

    @property
    def head(self) -> Vertex:
        return 0

    def image(self, d: Diagonal) -> Optional[Diagonal]:
        u, v = self.vertex_map[d.a], self.vertex_map[d.b]
        if u == v or self.polygon.is_boundary(u, v):
            return None
        return Diagonal.of(u, v)


def restrict(T: Triangulation) -> Restriction:
    if T.polygon.kind != "full":
        raise InvalidOperation("restriction needs a full theta-invariant triangulation")
    return _restrict(T)


@lru_cache(maxsize=1024)
def _restrict(T: Triangulation) -> Restriction:
    validate(T)
    n = T.rank
    cfg = T.polygon
    tail, head = T._oriented()
    left = cfg.between_ccw(head, tail)
    vertex_map = {v: n + 2 for v in range(cfg.vertex_count)}
    vertex_map[head] = 0
    vertex_map[tail] = n + 1
    for offset, v in enumerate(left, start=1):
        vertex_map[v] = offset

    closed_left = set(left) | {head, tail}
    images = []
    for i in range(1, n + 1):
        tau = T.tau(i)
        if not set(tau.endpoints) <= closed_left:
            raise InvalidOperation(f"tau{i}={tau} does not lie left of the diameter")
        images.append(Diagonal.of(vertex_map[tau.a], vertex_map[tau.b]))

    polygon = PolygonConfig(n, "restricted")
    tbar = Triangulation(polygon, tuple(images))
    validate(tbar)
    logger.debug(f"restricted {T} to {tbar}")
    return Restriction(T, polygon, tbar, vertex_map)


def _orbit_check(o: ThetaOrbit, T: Triangulation) -> None:
    if all(d in T for d in o.diagonals):
        raise OrbitInTriangulation(f"orbit {o} is contained in the triangulation")


def restrict_orbit(o: ThetaOrbit, T: Triangulation) -> tuple[Diagonal, ...]:
    _orbit_check(o, T)
    R = restrict(T)
    images = {R.image(d) for d in o.diagonals} - {None}
    return tuple(sorted(images))


def chirality(T: Triangulation) -> Chirality:
    n = T.rank
    if n < 2:
        raise NoCommonTriangle(f"rank {n} has no tau{n - 1} beside the diameter")
    R = restrict(T)
    tbar = R.triangulation
    before, d = tbar.tau(n - 1), tbar.tau(n)
    if not any(
        before in _triangle_sides(tri) and d in _triangle_sides(tri) for tri in tbar.triangles
    ):
        raise NoCommonTriangle(f"tau{n - 1} and tau{n} do not bound a common triangle")
    return Chirality.CW if R.tail in before.endpoints else Chirality.CCW


def diameter_corner(T: Triangulation) -> Vertex:
    """Endpoint of the restricted diameter shared with tau_{n-1}."""
    R = restrict(T)
    return R.tail if chirality(T) is Chirality.CW else R.head


def order_pair(pair: Sequence[Diagonal], T: Triangulation) -> tuple[Diagonal, Diagonal]:
    """
    Order two restricted diagonals (p,*), (q,*) as (gamma1, gamma2): gamma1 has its
    left endpoint closer to the corner of the diameter shared with tau_{n-1}.
    """
    R = restrict(T)
    corner = diameter_corner(T)

    def distance(d: Diagonal) -> int:
        p = d.other(R.star)
        return abs(corner - p)

    first, second = sorted(pair, key=distance)
    return first, second


def mirror_vertex(v: Vertex, T: Triangulation) -> Vertex:
    """Reflection of the full polygon across the diameter's axis; it commutes with theta."""
    return (T.head + T.tail + T.rank + 1 - v) % T.polygon.vertex_count


def mirror(T: Triangulation) -> Triangulation:
    """
    Mirror image of a theta-invariant triangulation: tau_i goes to the reflection
    of tau_i and the diameter is reoriented, so the left side stays on the left.
    Restricted vertex k of T becomes restricted vertex n+1-k of the mirror.
    """
    diagonals = tuple(Diagonal.of(mirror_vertex(d.a, T), mirror_vertex(d.b, T)) for d in T.diagonals)
    return Triangulation(T.polygon, diagonals, (T.head, T.tail))


def mirror_orbit(o: ThetaOrbit, T: Triangulation) -> ThetaOrbit:
    d = o.representative
    return orbit_of(Diagonal.of(mirror_vertex(d.a, T), mirror_vertex(d.b, T)), T.polygon)


def companion(gamma: Diagonal, R: Restriction) -> Optional[Diagonal]:
    """The restricted diagonal crossing the same diagonals as gamma except the diameter."""
    tbar = R.triangulation
    target = tbar.crossing_set(gamma) - {R.source.rank}
    if not target:
        return None
    for candidate in R.polygon.all_diagonals():
        if candidate not in tbar and tbar.crossing_set(candidate) == target:
            return candidate
    raise CompanionOrbitNotFound(f"no diagonal crosses exactly {sorted(target)}")


def rotated_restrict_orbit(o: ThetaOrbit, T: Triangulation) -> tuple[Diagonal, ...]:
    res = restrict_orbit(o, T)
    R = restrict(T)
    n = T.rank
    if o.is_diameter:
        (gamma,) = res
        other = companion(gamma, R)
        return (gamma,) if other is None else (gamma, other)
    if len(res) == 1:
        return res
    gamma1, gamma2 = order_pair(res, T)
    if n not in R.triangulation.crossing_set(gamma2):
        raise InvalidOperation(f"{gamma2} does not cross the diameter")
    other = companion(gamma2, R)
    return (gamma1,) if other is None else (gamma1, other)


# -- laminations -----------------------------------------------------------


@dataclass(frozen=True)
class Lamination:
    """
    Elementary lamination of a diagonal on the doubled circle: vertex v sits at
    position 2v and the shifted endpoint v' at 2v-1 (mod 2*vertex_count).
    """
    ends: tuple[int, int]
    size: int

    @classmethod
    def of(cls, d: Diagonal, cfg: PolygonConfig) -> "Lamination":
        size = 2 * cfg.vertex_count
        return cls(tuple(sorted(((2 * d.a - 1) % size, (2 * d.b - 1) % size))), size)


def lamination_crosses(L: Lamination, e: Diagonal | BoundaryEdge) -> bool:
    lo, hi = L.ends
    inside = [lo < 2 * v < hi for v in e.endpoints]
    return inside[0] != inside[1]


def crossing_vector(e: Diagonal, f: Diagonal, tbar: Triangulation) -> tuple[int, ...]:
    cfg = tbar.polygon
    vector = []
    for tau in tbar.diagonals:
        L = Lamination.of(tau, cfg)
        vector.append(int(lamination_crosses(L, e) and lamination_crosses(L, f)))
    return tuple(vector)


def rotated_restrict_vector(v: Sequence[int], n: Optional[int] = None) -> tuple[int, ...]:
    """First n coordinates with the n-th halved."""
    n = n if n is not None else (len(v) + 1) // 2
    head = list(v[:n])
    if head[n - 1] % 2:
        raise OddDiameterCoordinate(f"coordinate {n} of {tuple(v)} is odd")
    head[n - 1] //= 2
    return tuple(head)


# -- enumeration -----------------------------------------------------------


@lru_cache(maxsize=None)
def _triangulations_of(vertices: tuple[int, ...]) -> tuple[frozenset[Diagonal], ...]:
    if len(vertices) < 4:
        return (frozenset(),)
    first, last = vertices[0], vertices[-1]
    found = []
    for k in range(1, len(vertices) - 1):
        extra = set()
        if k > 1:
            extra.add(Diagonal.of(first, vertices[k]))
        if k < len(vertices) - 2:
            extra.add(Diagonal.of(vertices[k], last))
        for lower in _triangulations_of(vertices[: k + 1]):
            for upper in _triangulations_of(vertices[k:]):
                found.append(frozenset(extra) | lower | upper)
    return tuple(found)


def enumerate_triangulations(polygon: PolygonConfig) -> list[Triangulation]:
    """Every triangulation of the polygon, diagonals indexed in sorted order."""
    sets = _triangulations_of(tuple(range(polygon.vertex_count)))
    return [Triangulation(polygon, tuple(sorted(s))) for s in sorted(sets, key=sorted)]


def sweep_orientation(polygon: PolygonConfig, diagonals: Iterable[Diagonal]) -> Triangulation:
    """
    Index a theta-invariant diagonal set: the diameter d=(a, a+n+1) is oriented
    from a+n+1 to a, tau_{n-1} is a diagonal side of d's left triangle (the one
    through the tail when possible) and tau_{2n-i} is the half-turn of tau_i.
    """
    n = polygon.rank
    diagonals = set(diagonals)
    (d,) = [x for x in diagonals if is_diameter(x, polygon)]
    head, tail = d.a, d.b
    left = set(polygon.between_ccw(head, tail))
    closed = left | {head, tail}
    on_left = sorted(x for x in diagonals if x != d and set(x.endpoints) <= closed)
    (x,) = [v for v in left if {Diagonal.of(v, head), Diagonal.of(v, tail)} <= diagonals | set(polygon.boundary_segments())]
    sides = [Diagonal.of(x, tail), Diagonal.of(head, x)]
    before = next(s for s in sides if s in diagonals)
    ordered = [t for t in on_left if t != before] + [before]
    taus = ordered + [d] + [theta_diagonal(t, polygon) for t in reversed(ordered)]
    T = Triangulation(polygon, tuple(taus), (tail, head))
    validate(T)
    return T


def enumerate_theta_triangulations(n: int) -> list[Triangulation]:
    polygon = PolygonConfig(n, "full")
    found = []
    for T in enumerate_triangulations(polygon):
        if all(theta_diagonal(d, polygon) in T for d in T.diagonals):
            found.append(sweep_orientation(polygon, T.diagonals))
    return found


def all_orbits(polygon: PolygonConfig) -> list[ThetaOrbit]:
    return sorted({orbit_of(d, polygon) for d in polygon.all_diagonals()}, key=lambda o: sorted(o.diagonals))


def census(n: int) -> dict[str, int]:
    polygon = PolygonConfig(n, "full")
    return {
        "triangulations": len(enumerate_theta_triangulations(n)),
        "orbits": len(all_orbits(polygon)),
    }
