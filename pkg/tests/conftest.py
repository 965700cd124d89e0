from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from wigprop import make_grid


def bundled_config(name):
    """Filesystem path of a config shipped inside the package."""
    return Path(str(resources.files("wigprop").joinpath("configs", name)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def small_grid():
    """16 x 8 grid, cheap enough for brute-force DFT comparisons."""
    return make_grid(16, 8, 4.0, 2.0, 1.0)


@pytest.fixture
def unit_grid():
    """256 x 256 box of half-width 8 with binary-exact spacing;
    contains x = 0, 2 and p = 0 exactly."""
    return make_grid(256, 256, 8.0, 8.0, 1.0)


def random_field_data(rng, grid):
    return (
        rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    )
