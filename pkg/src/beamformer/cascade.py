"""
Cascaded signal model.

With x_0 = w and x_l = kappa * theta_l * (f_l x_{l-1}) the BS sees
v^H g^H x_L. The backward vectors b_L = g v and
b_{l-1} = kappa * f_l^H (conj(theta_l) * b_l) give the same scalar as
b_l^H x_l at every depth, so each closed-form update needs one forward and
one backward pass.
"""

from typing import List
import logging

import numpy as np

from .state import BeamformerState
from ..channel import ChannelSet
from ..errors import DimensionMismatch, LayerOutOfRange

logger = logging.getLogger(__name__)


def check_dimensions(state: BeamformerState, ch: ChannelSet) -> None:
    """
    Raises:
        DimensionMismatch: if the state does not chain with the channels.
    """
    if state.num_layers != ch.num_layers:
        raise DimensionMismatch(f"state has {state.num_layers} phase layers, channels have {ch.num_layers}")
    if state.w.shape != (ch.user_antennas,):
        raise DimensionMismatch(f"w must have length {ch.user_antennas}, got {state.w.shape}")
    if state.v.shape != (ch.bs_antennas,):
        raise DimensionMismatch(f"v must have length {ch.bs_antennas}, got {state.v.shape}")
    for l, t in enumerate(state.theta, start=1):
        if t.shape != (ch.elements,):
            raise DimensionMismatch(f"theta_{l} must have length {ch.elements}, got {t.shape}")


class CascadeCache:
    """Forward (prefix) and backward (suffix) products for one state."""

    def __init__(self, state: BeamformerState, ch: ChannelSet, kappa: float):
        check_dimensions(state, ch)
        self.kappa = kappa
        self.num_layers = ch.num_layers
        self._incident: List[np.ndarray] = []
        self._prefix: List[np.ndarray] = [state.w]
        x = state.w
        for f, theta in zip(ch.f, state.theta):
            u = f @ x
            self._incident.append(u)
            x = kappa * theta * u
            self._prefix.append(x)

        b = ch.g @ state.v
        suffix = [b]
        for f, theta in zip(reversed(ch.f), reversed(state.theta)):
            b = kappa * (f.conj().T @ (theta.conj() * b))
            suffix.append(b)
        self._suffix = suffix[::-1]

    def _layer(self, l: int) -> int:
        if not 1 <= l <= self.num_layers:
            raise LayerOutOfRange(f"layer {l} outside 1..{self.num_layers}")
        return l

    def prefix(self, l: int) -> np.ndarray:
        """x_l for l = 0..L (x_0 = w)."""
        return self._prefix[l]

    def suffix(self, l: int) -> np.ndarray:
        """b_l for l = 0..L (b_L = g v)."""
        return self._suffix[l]

    def incident(self, l: int) -> np.ndarray:
        """f_l x_{l-1}: the field arriving at layer l before its phase shifts."""
        return self._incident[self._layer(l) - 1]

    def emission(self, l: int) -> np.ndarray:
        """x_l: the field leaving layer l."""
        return self._prefix[self._layer(l)]

    @property
    def effective_scalar(self) -> complex:
        return complex(np.vdot(self._suffix[-1], self._prefix[-1]))


def effective_scalar(state: BeamformerState, ch: ChannelSet, kappa: float) -> complex:
    """v^H g^H (prod_l kappa Theta_l f_l) w, layer 1 applied first."""
    return CascadeCache(state, ch, kappa).effective_scalar


def snr(state: BeamformerState, ch: ChannelSet, kappa: float, noise_power: float) -> float:
    """Detection SNR |v^H g^H ... w|^2 / (||v||^2 sigma^2)."""
    if not noise_power > 0:
        raise ValueError(f"noise power must be positive, got {noise_power}")
    eff = effective_scalar(state, ch, kappa)
    v_norm2 = float(np.vdot(state.v, state.v).real)
    if v_norm2 == 0.0:
        return 0.0
    return abs(eff) ** 2 / (v_norm2 * noise_power)
