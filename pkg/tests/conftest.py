import numpy as np
import pytest

from vartri.mesh import IdealSurface, build_surface

TETRA = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
OCTA = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1),
        (5, 2, 1), (5, 3, 2), (5, 4, 3), (5, 1, 4)]


@pytest.fixture
def tetra():
    return build_surface(4, TETRA)


@pytest.fixture
def octa():
    return build_surface(6, OCTA)


@pytest.fixture
def pants():
    # two right-angled hexagons glued along their three seams
    return IdealSurface.from_triangles(3, [(0, 1, 2), (0, 1, 2)], mode="bordered")


@pytest.fixture
def rng():
    return np.random.default_rng(0)
