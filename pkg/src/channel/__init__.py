"""
Channel synthesis: near-field element model, Friis far field, assembly and I/O.
"""

from .quadrature import QuadratureResult, integrate_2d, integrate_2d_reference, integrate_rectangle
from .near_field import (
    GainDensityParams,
    ElementGainCache,
    gain_density,
    element_gain,
    centred_square,
    near_field_channel,
)
from .far_field import friis_coefficient, friis_matrix
from .assembly import ChannelSet, assemble_channels, direct_channel
from .io import (
    save_complex_matrix,
    load_complex_matrix,
    save_channel_set,
    load_channel_set,
    save_state,
    load_state,
    save_trace,
)

__all__ = [
    'QuadratureResult', 'integrate_2d', 'integrate_2d_reference', 'integrate_rectangle',
    'GainDensityParams', 'ElementGainCache', 'gain_density', 'element_gain',
    'centred_square', 'near_field_channel', 'friis_coefficient', 'friis_matrix',
    'ChannelSet', 'assemble_channels', 'direct_channel',
    'save_complex_matrix', 'load_complex_matrix', 'save_channel_set',
    'load_channel_set', 'save_state', 'load_state', 'save_trace',
]
