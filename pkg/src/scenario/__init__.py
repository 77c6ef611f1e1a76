"""
Scenario description and validated configuration models.
"""

from .models import (
    ArrayConfig,
    MultiLayerConfig,
    SingleLayerConfig,
    ScenarioConfig,
    OptimizerSettings,
    ExperimentSettings,
)
from .scenario import (
    SPEED_OF_LIGHT,
    Scenario,
    Variant,
    build_scenario,
    db,
    dbw_to_watts,
    wavelength_for,
)

__all__ = [
    'ArrayConfig', 'MultiLayerConfig', 'SingleLayerConfig', 'ScenarioConfig',
    'OptimizerSettings', 'ExperimentSettings', 'SPEED_OF_LIGHT', 'Scenario',
    'Variant', 'build_scenario', 'db', 'dbw_to_watts', 'wavelength_for',
]
