import numpy as np
import pytest

from playclone.sim.scene import SceneConfig
from playclone.sim.simulator import Simulator, sample_rest_state


@pytest.fixture
def scene() -> SceneConfig:
    return SceneConfig()


@pytest.fixture
def sim(scene) -> Simulator:
    return Simulator(scene)


@pytest.fixture
def rest_state(scene):
    return sample_rest_state(scene, np.random.default_rng(0))
