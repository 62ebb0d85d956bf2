from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from flatlab.exact_scalar import NumberField
from flatlab.surface import build_mcmullen_surface, build_polygon_surface, l_shaped_surface, regular_octagon, square_torus

settings.register_profile(
    "flatlab", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("flatlab")


def two_cylinder_surface():
    """Horizontal cylinders of moduli 1 and sqrt(3) glued along a unit segment."""
    K = NumberField.quadratic(3)
    z, o = K.zero(), K.one()
    h = 2 * K.gen
    A = [(z, z), (o, z), (o, o), (z, o)]
    B = [(z, z), (o, z), (2 * o, z), (2 * o, h), (o, h), (z, h)]
    gl = [((0, 2), (1, 0)), ((0, 0), (1, 4)), ((1, 1), (1, 3)), ((0, 1), (0, 3)), ((1, 2), (1, 5))]
    return build_polygon_surface([A, B], gl, "two cylinders")


@pytest.fixture(scope="session")
def torus():
    return square_torus()


@pytest.fixture(scope="session")
def lshape():
    return l_shaped_surface()


@pytest.fixture(scope="session")
def octagon():
    return regular_octagon()


@pytest.fixture(scope="session")
def mcmullen():
    return build_mcmullen_surface(Fraction(2))


@pytest.fixture(scope="session")
def two_cyl():
    return two_cylinder_surface()
