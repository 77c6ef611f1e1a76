"""
Small channel sets and states shared by the test cases.
"""

import numpy as np

from src.beamformer import BeamformerState
from src.channel import ChannelSet

WAVELENGTH = 0.12


def crandn(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def scalar_channels(f=1.0, g=1.0, layers: int = 1) -> ChannelSet:
    """L layers of 1x1 channels."""
    return ChannelSet(tuple(np.array([[f]], dtype=complex) for _ in range(layers)),
                      np.array([[g]], dtype=complex), WAVELENGTH)


def passive(m: np.ndarray) -> np.ndarray:
    """Rescale so the largest coefficient has magnitude 1."""
    return m / np.abs(m).max()


def random_channels(rng: np.random.Generator, layers: int, n: int, k: int, m: int) -> ChannelSet:
    f = [crandn(rng, n, k)] + [crandn(rng, n, n) for _ in range(layers - 1)]
    return ChannelSet(tuple(passive(x) for x in f), passive(crandn(rng, n, m)), WAVELENGTH)


def random_state(rng: np.random.Generator, ch: ChannelSet, p_max: float = 1.0) -> BeamformerState:
    w = crandn(rng, ch.user_antennas)
    w *= np.sqrt(p_max) / np.linalg.norm(w)
    theta = tuple(np.exp(1j * rng.uniform(-np.pi, np.pi, ch.elements)) for _ in range(ch.num_layers))
    v = crandn(rng, ch.bs_antennas)
    return BeamformerState(w=w, theta=theta, v=v / np.linalg.norm(v))


def random_unit_vectors(rng: np.random.Generator, count: int, size: int) -> np.ndarray:
    x = crandn(rng, count, size)
    return x / np.linalg.norm(x, axis=1, keepdims=True)
