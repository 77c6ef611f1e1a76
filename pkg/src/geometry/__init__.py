"""
Array and surface geometry.
"""

from .arrays import (
    Position3D,
    UlaSpec,
    UpaLayerSpec,
    ElementGrid,
    element_centers,
    ula_positions,
)
from .quaternions import quaternion_partition

__all__ = [
    'Position3D', 'UlaSpec', 'UpaLayerSpec', 'ElementGrid',
    'element_centers', 'ula_positions', 'quaternion_partition',
]
