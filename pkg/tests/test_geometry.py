from collections import deque
from math import comb

import pytest

from foldmatch.exceptions import (
    BoundarySegment,
    CrossingDiagonals,
    DiameterNotAtIndexN,
    InvalidOperation,
    NoCommonTriangle,
    NotMaximal,
    NotThetaInvariant,
    OddDiameterCoordinate,
    OrbitInTriangulation,
)
from foldmatch.geometry import (
    Chirality,
    Diagonal,
    PolygonConfig,
    Triangulation,
    all_orbits,
    census,
    chirality,
    companion,
    crosses,
    crossing_vector,
    enumerate_theta_triangulations,
    enumerate_triangulations,
    flip,
    flip_orbit,
    mirror,
    mirror_orbit,
    order_pair,
    orbit_of,
    restrict,
    restrict_orbit,
    rotated_restrict_orbit,
    rotated_restrict_vector,
    theta_diagonal,
    validate,
)


def test_polygon_sizes():
    assert PolygonConfig(3, "full").vertex_count == 8
    restricted = PolygonConfig(3, "restricted")
    assert restricted.vertex_count == 6
    assert restricted.star == 5
    assert restricted.vertex_name(5) == "*"
    assert PolygonConfig(3, "plain").star is None


def test_degenerate_diagonal_rejected():
    with pytest.raises(InvalidOperation):
        Diagonal.of(2, 2)


def test_crossing_is_strict():
    assert crosses(Diagonal.of(2, 7), Diagonal.of(4, 0))
    assert not crosses(Diagonal.of(1, 4), Diagonal.of(4, 0))
    assert not crosses(Diagonal.of(1, 5), Diagonal.of(2, 4))


def test_theta_pairs_fix_b_orbit(fix_b):
    assert theta_diagonal(Diagonal.of(2, 7), fix_b.polygon) == Diagonal.of(3, 6)
    assert orbit_of(Diagonal.of(4, 0), fix_b.polygon).is_diameter


def test_triangles_fix_a_and_fix_b(fix_a, fix_b):
    assert set(validate(fix_a)) == {(3, 4, 5), (0, 3, 5), (0, 2, 3), (0, 1, 2)}
    assert set(fix_b.triangles) == {(1, 2, 4), (0, 1, 4), (0, 4, 5), (0, 5, 6), (0, 6, 7), (2, 3, 4)}


@pytest.mark.parametrize(
    "polygon, pairs, error",
    [
        (PolygonConfig(3, "plain"), [(0, 3), (1, 4), (0, 2)], CrossingDiagonals),
        (PolygonConfig(3, "plain"), [(0, 3), (0, 2)], NotMaximal),
        (PolygonConfig(3, "plain"), [(0, 1), (0, 3), (0, 2)], BoundarySegment),
        (PolygonConfig(3, "full"), [(2, 4), (1, 4), (4, 0), (6, 0), (5, 0)], NotThetaInvariant),
        (PolygonConfig(3, "full"), [(2, 4), (4, 0), (1, 4), (5, 0), (6, 0)], DiameterNotAtIndexN),
    ],
)
def test_validation_errors(polygon, pairs, error):
    with pytest.raises(error):
        validate(Triangulation.from_pairs(polygon, pairs))


def test_flip_diameter(fix_b):
    flipped = flip(fix_b, 3)
    assert flipped.tau(3) == Diagonal.of(1, 5)
    assert flipped.diagonals[:2] == fix_b.diagonals[:2]
    assert flipped.diagonals[3:] == fix_b.diagonals[3:]


def test_flip_orbit_keeps_symmetry(fix_b):
    flipped = flip_orbit(fix_b, 1)
    assert flipped.tau(1) == Diagonal.of(1, 3)
    assert flipped.tau(5) == Diagonal.of(5, 7)
    validate(flipped)

    turned = flip_orbit(fix_b, 3)
    assert turned.tau(3) == Diagonal.of(1, 5)
    validate(turned)


def test_restriction_fix_b(fix_b):
    R = restrict(fix_b)
    assert R.triangulation.diagonals == (Diagonal.of(2, 4), Diagonal.of(1, 4), Diagonal.of(0, 4))
    assert (R.head, R.tail, R.star) == (0, 4, 5)


def test_restrict_orbit(fix_b, orbit_b):
    assert restrict_orbit(orbit_b, fix_b) == (Diagonal.of(2, 5), Diagonal.of(3, 5))
    collapsing = orbit_of(Diagonal.of(1, 3), fix_b.polygon)
    assert restrict_orbit(collapsing, fix_b) == (Diagonal.of(1, 3),)


def test_restrict_orbit_in_triangulation(fix_b):
    with pytest.raises(OrbitInTriangulation):
        restrict_orbit(orbit_of(Diagonal.of(2, 4), fix_b.polygon), fix_b)


def test_chirality_and_order(fix_b, fix_c, orbit_b, fix_b_mirror):
    assert chirality(fix_b) is Chirality.CW
    assert chirality(fix_c) is Chirality.CW
    assert chirality(fix_b_mirror) is Chirality.CCW
    assert order_pair(restrict_orbit(orbit_b, fix_b), fix_b) == (Diagonal.of(3, 5), Diagonal.of(2, 5))


def test_rotated_restriction_fix_c(fix_c, orbit_c):
    assert rotated_restrict_orbit(orbit_c, fix_c) == (Diagonal.of(3, 5), Diagonal.of(1, 4))
    avoiding = orbit_of(Diagonal.of(1, 3), fix_c.polygon)
    assert rotated_restrict_orbit(avoiding, fix_c) == (Diagonal.of(1, 3),)


def test_companion_drops_only_the_diameter(fix_c, tbar_c):
    R = restrict(fix_c)
    assert tbar_c.crossing_set(Diagonal.of(1, 5)) == {1, 3}
    assert companion(Diagonal.of(1, 5), R) == Diagonal.of(1, 4)
    assert tbar_c.crossing_set(Diagonal.of(1, 4)) == {1}


def test_crossing_vectors(tbar_b, tbar_c):
    assert crossing_vector(Diagonal.of(3, 5), Diagonal.of(2, 5), tbar_b) == (1, 1, 1)
    assert crossing_vector(Diagonal.of(3, 5), Diagonal.of(2, 4), tbar_c) == (0, 1, 1)
    assert crossing_vector(Diagonal.of(1, 5), Diagonal.of(2, 4), tbar_c) == (0, 0, 1)


def test_rotated_restrict_vector():
    assert rotated_restrict_vector((0, 0, 2), 3) == (0, 0, 1)
    assert rotated_restrict_vector((1, 2, 4, 2, 1)) == (1, 2, 2)
    with pytest.raises(OddDiameterCoordinate):
        rotated_restrict_vector((0, 1, 1), 3)


@pytest.mark.parametrize("n, count", [(1, 2), (2, 5), (3, 14), (4, 42)])
def test_type_a_triangulation_counts(n, count):
    assert len(enumerate_triangulations(PolygonConfig(n, "plain"))) == count


@pytest.mark.parametrize("n, triangulations, orbits", [(2, 6, 6), (3, 20, 12), (4, 70, 20)])
def test_census(n, triangulations, orbits):
    assert census(n) == {"triangulations": triangulations, "orbits": orbits}


def test_sweep_orientation_restricts_cleanly():
    for T in enumerate_theta_triangulations(3):
        R = restrict(T)
        assert R.triangulation.m == 3
        assert len(all_orbits(T.polygon)) == 12


def test_chirality_needs_two_orbits():
    square = Triangulation.from_pairs(PolygonConfig(1, "full"), [(2, 0)])
    with pytest.raises(NoCommonTriangle):
        chirality(square)


def test_mirror_swaps_chirality(fix_b, orbit_b, fix_b_mirror, orbit_b_mirror):
    assert mirror(fix_b) == fix_b_mirror
    assert mirror(fix_b_mirror) == fix_b
    assert mirror_orbit(orbit_b, fix_b) == orbit_b_mirror
    assert restrict(fix_b_mirror).triangulation.diagonals == (Diagonal.of(0, 2), Diagonal.of(0, 3), Diagonal.of(0, 4))
    assert order_pair(restrict_orbit(orbit_b_mirror, fix_b_mirror), fix_b_mirror) == (Diagonal.of(1, 5), Diagonal.of(2, 5))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_orbit_flips_connect_every_theta_triangulation(n):
    start = enumerate_theta_triangulations(n)[0]
    seen = {start.key()}
    queue = deque([start])
    while queue:
        T = queue.popleft()
        for k in range(1, n + 1):
            flipped = flip_orbit(T, k)
            assert flip_orbit(flipped, k).key() == T.key()
            if flipped.key() not in seen:
                seen.add(flipped.key())
                queue.append(flipped)
    assert len(seen) == comb(2 * n, n)
    assert seen == {T.key() for T in enumerate_theta_triangulations(n)}
