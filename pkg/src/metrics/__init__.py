"""
Evaluation metrics: power distributions, EAR, radiation patterns, SINR.
"""

from .power import EarResult, PHASE_PROFILES, PowerDistribution, ear, layer_power, phase_profile
from .pattern import (
    RadiationPattern,
    angle_grid,
    array_factor,
    column_phasors,
    mainlobe_to_sidelobe_db,
    normalize_patterns,
    radiation_pattern,
)
from .sinr import SinrResult, UserLink, sinr_eval

__all__ = [
    'EarResult', 'PHASE_PROFILES', 'PowerDistribution', 'ear', 'layer_power',
    'phase_profile', 'RadiationPattern', 'angle_grid', 'array_factor',
    'column_phasors', 'mainlobe_to_sidelobe_db', 'normalize_patterns',
    'radiation_pattern', 'SinrResult', 'UserLink', 'sinr_eval',
]
