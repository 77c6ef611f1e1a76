"""
Cascaded signal model and the alternating beamformer optimizer.
"""

from .state import BeamformerState, OptimizerConfig, RunTrace
from .cascade import CascadeCache, check_dimensions, effective_scalar, snr
from .updates import update_theta, update_v, update_w
from .optimizer import initial_state, optimize, optimize_best, sweep
from .baseline import no_ris_baseline, no_ris_beamformer, reflective_variant

__all__ = [
    'BeamformerState', 'OptimizerConfig', 'RunTrace', 'CascadeCache',
    'check_dimensions', 'effective_scalar', 'snr', 'update_theta', 'update_v',
    'update_w', 'initial_state', 'optimize', 'optimize_best', 'sweep',
    'no_ris_baseline', 'no_ris_beamformer', 'reflective_variant',
]
