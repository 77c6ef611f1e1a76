"""
Per-layer power distributions and the element activation ratio (EAR).
"""

from dataclasses import dataclass
import logging

import numpy as np

from ..beamformer import BeamformerState, CascadeCache
from ..channel import ChannelSet
from ..errors import EmptyDistribution
from ..geometry import ElementGrid

logger = logging.getLogger(__name__)

PHASE_PROFILES = ('none', 'random', 'gradual')


@dataclass(frozen=True, eq=False)
class PowerDistribution:
    layer: int
    per_element_power: np.ndarray

    @property
    def mean_power(self) -> float:
        return float(np.mean(self.per_element_power))

    @property
    def total_power(self) -> float:
        return float(np.sum(self.per_element_power))

    def as_grid(self, cols: int, rows: int) -> np.ndarray:
        """rows x cols array, row-major with x fastest."""
        return self.per_element_power.reshape(rows, cols)


@dataclass(frozen=True)
class EarResult:
    epsilon: float
    activated_count: int
    total_count: int

    @property
    def ratio(self) -> float:
        return self.activated_count / self.total_count


def layer_power(state: BeamformerState, ch: ChannelSet, kappa: float, l: int) -> PowerDistribution:
    """
    Incident power |[f_l x_{l-1}]_n|^2 on every element of layer ``l``.

    x_{l-1} already carries the penetration losses of layers 1..l-1, so the
    powers include them once; layer l's own shifts and loss are excluded.

    Raises:
        LayerOutOfRange: if ``l`` is not in 1..L.
    """
    u = CascadeCache(state, ch, kappa).incident(l)
    return PowerDistribution(layer=l, per_element_power=np.abs(u) ** 2)


def ear(dist: PowerDistribution, epsilon: float) -> EarResult:
    """
    Fraction of elements whose power strictly exceeds ``epsilon`` times the mean.

    Raises:
        EmptyDistribution: for no elements or zero total power.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    powers = dist.per_element_power
    if powers.size == 0:
        raise EmptyDistribution("power distribution has no elements")
    mean = float(np.mean(powers))
    if mean <= 0.0:
        raise EmptyDistribution(f"layer {dist.layer} carries no power")
    return EarResult(epsilon=epsilon, activated_count=int(np.count_nonzero(powers > epsilon * mean)),
                     total_count=int(powers.size))


def phase_profile(kind: str, grid: ElementGrid, seed: int = 0) -> np.ndarray:
    """
    First-layer phase vector used to show how layer 1 steers the power
    arriving at layer 2.

    ``none`` is all ones, ``random`` draws uniform phases, ``gradual`` ramps
    one radian per element pitch along x and half a radian along z.
    """
    if kind == 'none':
        return np.ones(grid.count, dtype=complex)
    if kind == 'random':
        rng = np.random.default_rng(seed)
        return np.exp(1j * rng.uniform(-np.pi, np.pi, grid.count))
    if kind == 'gradual':
        pitch = grid.element_size
        x = (grid.centers[:, 0] - grid.centroid[0]) / pitch
        z = (grid.centers[:, 1] - grid.centroid[1]) / pitch
        return np.exp(1j * (x + 0.5 * z))
    raise ValueError(f"unknown phase profile {kind!r}, expected one of {PHASE_PROFILES}")
