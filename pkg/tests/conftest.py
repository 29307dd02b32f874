import numpy as np
import pytest

from example_library import BOUNDARY_TETRAHEDRON, CIRCLE, validated_torus_facets
from nerve import build_nerve
from twist import twist_from_support


@pytest.fixture
def tetrahedron():
    return build_nerve(BOUNDARY_TETRAHEDRON)


@pytest.fixture
def circle():
    return build_nerve(CIRCLE)


@pytest.fixture
def torus():
    return build_nerve(validated_torus_facets())


@pytest.fixture
def hopf_twist(tetrahedron):
    return twist_from_support(tetrahedron, 1, [([0, 1, 2], [1])])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
