"""
Closed-form block updates of the alternating optimizer.

Each update maximizes the SNR over one variable with the others held fixed:
the combiner and transmit vectors are matched filters and each phase layer
co-phases its per-element contributions.
"""

from typing import Optional
import logging

import numpy as np

from .cascade import CascadeCache
from .state import BeamformerState
from ..channel import ChannelSet
from ..errors import ZeroEffectiveChannel

logger = logging.getLogger(__name__)


def _cache(state, ch, kappa, cache: Optional[CascadeCache]) -> CascadeCache:
    return cache if cache is not None else CascadeCache(state, ch, kappa)


def update_v(state: BeamformerState, ch: ChannelSet, kappa: float,
             cache: Optional[CascadeCache] = None) -> np.ndarray:
    """
    Unit-norm combiner a/||a|| with a = g^H x_L.

    a/||a|| is the dominant eigenvector of the rank-1 matrix a a^H, so no
    eigensolver is needed.

    Raises:
        ZeroEffectiveChannel: if a vanishes.
    """
    c = _cache(state, ch, kappa, cache)
    a = ch.g.conj().T @ c.prefix(ch.num_layers)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        raise ZeroEffectiveChannel("g^H x_L is zero; the combiner is undefined")
    return a / norm


def update_theta(state: BeamformerState, ch: ChannelSet, kappa: float, l: int,
                 cache: Optional[CascadeCache] = None) -> np.ndarray:
    """
    Phase diagonal of layer ``l`` (1-based) aligning every element's summand.

    Entry n is exp(j arg(conj(u_n) b_n)) with u = f_l x_{l-1} and b the
    backward vector at layer l. Elements whose summand is exactly zero keep
    phase 0.

    Raises:
        LayerOutOfRange: if ``l`` is not in 1..L.
    """
    c = _cache(state, ch, kappa, cache)
    u = c.incident(l)
    b = c.suffix(l)
    return np.exp(1j * np.angle(u.conj() * b))


def update_w(state: BeamformerState, ch: ChannelSet, kappa: float, p_max: float,
             cache: Optional[CascadeCache] = None) -> np.ndarray:
    """
    Transmit vector sqrt(p_max) b_0/||b_0|| with b_0 the backward vector at the user.

    Raises:
        ZeroEffectiveChannel: if b_0 vanishes.
    """
    c = _cache(state, ch, kappa, cache)
    b = c.suffix(0)
    norm = np.linalg.norm(b)
    if norm == 0.0:
        raise ZeroEffectiveChannel("backward channel at the user is zero; w is undefined")
    return np.sqrt(p_max) * b / norm
