"""
Test-function registry. Use ``get_function(name, dimension)`` to obtain a
configured ``TestFunction`` instance. Registry names double as the CLI's
``--function`` vocabulary.
"""

from __future__ import annotations

from ..errors import UnknownTargetError
from .ackley import Ackley, ackley
from .base import Realization, RealizationPolicy, TestFunction
from .forest import Forest, forest
from .four_peak import FourPeak, four_peak
from .sphere import Sphere, sphere
from .standing_wave import StandingWave, standing_wave
from .stochastic_grid import StochasticGrid, stochastic_grid
from .stochastic_powers import StochasticPowers, stochastic_powers

_REGISTRY: dict[str, type[TestFunction]] = {
    "ackley": Ackley,
    "four_peak": FourPeak,
    "standing_wave": StandingWave,
    "forest": Forest,
    "stochastic_grid": StochasticGrid,
    "stochastic_powers": StochasticPowers,
    "sphere": Sphere,
}

VALID_FUNCTIONS: list[str] = list(_REGISTRY.keys())


def get_function(name: str, dimension: int) -> TestFunction:
    """Factory: returns an *instance* of the named function in *dimension* d.

    Raises ``UnknownTargetError`` for unknown names and ``ConfigurationError``
    when the function does not exist in that dimension.
    """
    key = name.lower().strip()
    cls = _REGISTRY.get(key)
    if cls is None:
        raise UnknownTargetError(
            f"Unknown function '{name}'. Valid options: {', '.join(VALID_FUNCTIONS)}"
        )
    return cls(dimension)


__all__ = [
    "VALID_FUNCTIONS",
    "Realization",
    "RealizationPolicy",
    "TestFunction",
    "get_function",
    "ackley",
    "forest",
    "four_peak",
    "sphere",
    "standing_wave",
    "stochastic_grid",
    "stochastic_powers",
]
