import hypothesis
import numpy as np
import pytest

from src.firefly.core import Bounds, Objective, Sense
from src.firefly.engine import FaParams

hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=500, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False)
hypothesis.settings.load_profile("fast")


@pytest.fixture
def sphere_objective() -> Objective:
    return Objective(
        func=lambda x: float(np.sum(x**2)),
        bounds=Bounds.cube(-5.0, 5.0, 2),
        sense=Sense.MINIMIZE,
        name="sphere",
    )


@pytest.fixture
def small_params() -> FaParams:
    return FaParams(population=8, max_iterations=5, alpha=0.2, gamma=1.0, seed=7)
