"""
US-RIS uplink simulator: multi-layer user-side surfaces, channel synthesis,
alternating beamformer optimization and the evaluation experiments.
"""

from .utils.config import Config

__version__ = "1.0.0"
__all__ = ['Config', '__version__']
