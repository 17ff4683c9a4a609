import numpy as np
import pytest

import heatgrid as hg
from heatgrid.cli import default_building_path, default_weather_path


@pytest.fixture(scope="session")
def canonical_paths():
    return default_building_path(), default_weather_path()


@pytest.fixture(scope="session")
def canonical(canonical_paths):
    """Loaded bundled two-zone building: (grid, mats, config). Read-only."""
    return hg.load_building_file(canonical_paths[0])


@pytest.fixture(scope="session")
def canonical_weather(canonical_paths):
    return hg.load_weather_file(canonical_paths[1])


@pytest.fixture
def rng():
    return np.random.default_rng(20210621)


def constant_weather(t_air=295.0, t_gnd=None, t_sky=None, ghi=0.0, dni=0.0, dhi=0.0):
    """Single-record weather series (held forever) for steady boundary tests."""
    t_gnd = t_air if t_gnd is None else t_gnd
    sky = "" if t_sky is None else t_sky
    text = (
        "timestamp,t_air,t_gnd,t_sky,ghi,dni,dhi\n"
        "-,K,K,K,W/m2,W/m2,W/m2\n"
        f"2021-06-21T00:00:00Z,{t_air},{t_gnd},{sky},{ghi},{dni},{dhi}\n"
    )
    return hg.load_weather(text)
