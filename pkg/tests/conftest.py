import numpy as np
import pytest

from subspacepdf.distributions import SampleGrid


@pytest.fixture
def rayleigh_grid():
    """15 equal bins over [0, 4]."""
    return SampleGrid.from_edges(np.linspace(0.0, 4.0, 16))


@pytest.fixture
def isolated_config(tmp_path):
    """Path to a config file that does not exist, so only defaults apply."""
    return str(tmp_path / "absent.json")
