import os
import sys

import pytest

# tests import the sibling modules the same flat way main.py does
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from builders import build_cycle, build_grid, build_path, build_tetrahedron, build_torus_grid  # noqa: E402
from chain_core import Basis  # noqa: E402


@pytest.fixture(scope="session")
def path2():
    return build_path(2)


@pytest.fixture(scope="session")
def cycle4():
    return build_cycle(4)


@pytest.fixture(scope="session")
def grid1():
    return build_grid(1, 1)


@pytest.fixture(scope="session")
def grid2():
    return build_grid(2, 2)


@pytest.fixture(scope="session")
def grid3():
    return build_grid(3, 3)


@pytest.fixture(scope="session")
def tetra_solid():
    return build_tetrahedron(True)


@pytest.fixture(scope="session")
def tetra_hollow():
    return build_tetrahedron(False)


@pytest.fixture(scope="session")
def torus2():
    return build_torus_grid(2)


@pytest.fixture
def abc():
    return Basis("abc", ("a", "b", "c"))


def square_cycle(complex_, i, j):
    """Counter-clockwise boundary of the square q{i}_{j} of a grid."""
    return complex_.chain(1, {f"h{i}_{j}": 1, f"u{i + 1}_{j}": 1, f"h{i}_{j + 1}": -1, f"u{i}_{j}": -1})
