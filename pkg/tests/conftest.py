import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from mollow import LindbladModel, Operator, SpaceLayout, destroy, embed


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def pumped_2ls_model(pump: float, gamma: float = 1.0) -> LindbladModel:
    """Two-level emitter with incoherent pump and decay, no drive."""
    layout = SpaceLayout([("2LS", 2)])
    sm = embed(destroy(2), layout, "2LS")
    H = Operator(layout, np.zeros((2, 2), dtype=complex))
    return LindbladModel(layout, H, ((gamma, sm), (pump, sm.dag())), sm)


def thermal_mode_model(pump: float, dim: int = 8, gamma: float = 1.0) -> LindbladModel:
    """Single bosonic mode with incoherent pump below threshold (thermal)."""
    layout = SpaceLayout([("mode", dim)])
    a = embed(destroy(dim), layout, "mode")
    H = Operator(layout, np.zeros((dim, dim), dtype=complex))
    return LindbladModel(layout, H, ((gamma, a), (pump, a.dag())), a)
