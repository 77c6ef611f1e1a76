"""
Reference configurations: the direct link without a surface, and the
loss-free reflective counterpart of a single-layer surface.
"""

from dataclasses import replace
from typing import Tuple
import logging

import numpy as np

from ..errors import InvalidForMultiLayer, ZeroEffectiveChannel
from ..scenario.scenario import Scenario, Variant

logger = logging.getLogger(__name__)

POWER_ITERATION_RTOL = 1e-12
POWER_ITERATION_MAX = 10_000


def _dominant_right_vector(h: np.ndarray) -> Tuple[np.ndarray, float]:
    """Power iteration on h^H h; returns the unit vector and sigma_max^2."""
    gram = h.conj().T @ h
    # start from the conjugate of the strongest row
    x = h[np.argmax(np.linalg.norm(h, axis=1))].conj()
    x = x / np.linalg.norm(x)
    eig = float(np.vdot(x, gram @ x).real)
    for _ in range(POWER_ITERATION_MAX):
        y = gram @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            break
        x = y / norm
        new_eig = float(np.vdot(x, gram @ x).real)
        if abs(new_eig - eig) <= POWER_ITERATION_RTOL * new_eig:
            eig = new_eig
            break
        eig = new_eig
    else:
        logger.warning(f"Power iteration did not settle within {POWER_ITERATION_MAX} steps")
    return x, eig


def no_ris_beamformer(direct, noise_power: float, p_max: float) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Matched transmit/receive pair for the direct M x K channel.

    Returns:
        (w, v, snr) with ||w||^2 = p_max, ||v|| = 1 and
        snr = p_max * sigma_max^2 / noise_power.

    Raises:
        ZeroEffectiveChannel: if the channel is identically zero.
    """
    h = np.atleast_2d(np.asarray(direct, dtype=complex))
    if not np.any(h):
        raise ZeroEffectiveChannel("direct channel is zero")
    x, sigma2 = _dominant_right_vector(h)
    w = np.sqrt(p_max) * x
    hx = h @ x
    v = hx / np.linalg.norm(hx)
    return w, v, p_max * sigma2 / noise_power


def no_ris_baseline(direct, noise_power: float, p_max: float) -> float:
    """Optimal SNR of the direct link."""
    return no_ris_beamformer(direct, noise_power, p_max)[2]


def reflective_variant(scenario: Scenario) -> Scenario:
    """
    Loss-free reflective counterpart of a single-layer scenario (kappa = 1).

    Raises:
        InvalidForMultiLayer: unless the scenario has exactly one layer.
    """
    if scenario.num_layers != 1:
        raise InvalidForMultiLayer(
            f"a reflective surface has one layer, scenario has {scenario.num_layers}")
    return replace(scenario, kappa=1.0, variant=Variant.SINGLE_LAYER_BSS, reflective=True)
