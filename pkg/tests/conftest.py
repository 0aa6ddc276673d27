from pathlib import Path

import pytest

from foldmatch.geometry import Diagonal, PolygonConfig, Triangulation, orbit_of, restrict

BASE = Path(__file__).resolve().parents[1]
INSTANCES = BASE / "instances"

FIX_B_F = "1 + 2*y3 + y3^2 + 2*y2*y3 + 2*y2*y3^2 + y1*y2*y3^2 + y2^2*y3^2 + y1*y2^2*y3^2"
FIX_C_F = "1 + y1 + y1*y3 + y1*y2*y3"


@pytest.fixture
def fix_a() -> Triangulation:
    """Triangulated hexagon with the diagonal (1,4) crossing all three diagonals."""
    return Triangulation.from_pairs(PolygonConfig(3, "plain"), [(3, 5), (0, 3), (0, 2)])


@pytest.fixture
def gamma_a() -> Diagonal:
    return Diagonal.of(1, 4)


@pytest.fixture
def fix_b() -> Triangulation:
    """Octagon, diameter oriented 4 -> 0, fan at 4 on the left."""
    return Triangulation.from_pairs(PolygonConfig(3, "full"), [(2, 4), (1, 4), (4, 0), (5, 0), (6, 0)])


@pytest.fixture
def orbit_b(fix_b):
    return orbit_of(Diagonal.of(2, 7), fix_b.polygon)


@pytest.fixture
def fix_b_mirror() -> Triangulation:
    """Reflection of fix_b across the diameter's axis; tau_{n-1} ends at the head."""
    return Triangulation.from_pairs(PolygonConfig(3, "full"), [(6, 4), (7, 4), (0, 4), (3, 0), (2, 0)])


@pytest.fixture
def orbit_b_mirror(fix_b_mirror):
    return orbit_of(Diagonal.of(6, 1), fix_b_mirror.polygon)


@pytest.fixture
def fix_c() -> Triangulation:
    """Octagon, diameter oriented 4 -> 0, left triangle (0,2,4)."""
    return Triangulation.from_pairs(PolygonConfig(3, "full"), [(0, 2), (2, 4), (4, 0), (6, 0), (4, 6)])


@pytest.fixture
def orbit_c(fix_c):
    return orbit_of(Diagonal.of(3, 5), fix_c.polygon)


@pytest.fixture
def tbar_b(fix_b) -> Triangulation:
    return restrict(fix_b).triangulation


@pytest.fixture
def tbar_c(fix_c) -> Triangulation:
    return restrict(fix_c).triangulation


@pytest.fixture
def instance_path():
    def path(name: str) -> Path:
        return INSTANCES / f"{name}.json"
    return path
