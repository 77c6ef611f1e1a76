"""
Channel synthesis for a full scenario.

User-to-layer-1 and layer-to-layer hops use the near-field element model;
the last layer reaches the BS over a far-field Friis channel.
"""

from dataclasses import dataclass
from typing import Iterator, Tuple
import logging
import time

import numpy as np

from .far_field import friis_matrix
from .near_field import ElementGainCache, near_field_channel
from ..errors import ChannelNotPassive, ConfigError, DimensionMismatch
from ..geometry import ula_positions
from ..scenario import Scenario

logger = logging.getLogger(__name__)

# rounding allowance on the unit-magnitude bound
PASSIVE_SLACK = 1e-12


def _named(f, g) -> Iterator[Tuple[str, np.ndarray]]:
    for idx, m in enumerate(f, start=1):
        yield f"f{idx}", m
    yield "g", g


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """
    Cascade channels: ``f[0]`` is N x K (user to layer 1), ``f[l]`` for l >= 1
    is N x N (layer l to layer l+1), ``g`` is N x M (last layer to BS).

    Raises:
        DimensionMismatch: if the matrices do not chain or hold non-finite values.
        ChannelNotPassive: if any coefficient has magnitude above 1.
    """
    f: Tuple[np.ndarray, ...]
    g: np.ndarray
    wavelength: float

    def __post_init__(self):
        if not self.f:
            raise DimensionMismatch("a ChannelSet needs at least one layer")
        f = tuple(np.asarray(m, dtype=complex) for m in self.f)
        object.__setattr__(self, 'f', f)
        object.__setattr__(self, 'g', np.asarray(self.g, dtype=complex))
        n = f[0].shape[0]
        for idx, m in enumerate(f[1:], start=2):
            if m.shape != (n, n):
                raise DimensionMismatch(f"f{idx} must be {n}x{n}, got {m.shape[0]}x{m.shape[1]}")
        if self.g.ndim != 2 or self.g.shape[0] != n:
            raise DimensionMismatch(f"g must have {n} rows, got shape {self.g.shape}")
        for m in (*f, self.g):
            if not np.all(np.isfinite(m)):
                raise DimensionMismatch("channel entries must be finite")
        for name, m in _named(f, self.g):
            peak = float(np.max(np.abs(m), initial=0.0))
            if peak > 1.0 + PASSIVE_SLACK:
                raise ChannelNotPassive(f"{name} has a coefficient of magnitude {peak:.6g} > 1")

    @property
    def num_layers(self) -> int:
        return len(self.f)

    @property
    def elements(self) -> int:
        return self.f[0].shape[0]

    @property
    def user_antennas(self) -> int:
        return self.f[0].shape[1]

    @property
    def bs_antennas(self) -> int:
        return self.g.shape[1]



def assemble_channels(scenario: Scenario) -> ChannelSet:
    """
    Synthesize f_1..f_L and g for ``scenario``.

    Raises:
        ConfigError: for a scenario without surface layers.
    """
    if scenario.num_layers == 0:
        raise ConfigError(f"variant {scenario.variant.value} has no surface layers")
    start = time.perf_counter()
    grids = scenario.grids()
    a = scenario.layers[0].element_size
    cache = ElementGainCache(a)
    lam = scenario.wavelength

    users = ula_positions(scenario.user_array)
    f1 = np.column_stack([near_field_channel(u, grids[0], a, lam, cache) for u in users])
    layers = [f1]
    for prev, grid in zip(grids, grids[1:]):
        sources = [prev.position(m) for m in range(prev.count)]
        layers.append(np.column_stack([near_field_channel(s, grid, a, lam, cache)
                                       for s in sources]))

    bs = np.array([p.as_array() for p in ula_positions(scenario.bs_array)])
    g = friis_matrix(grids[-1].positions(), bs, lam)
    logger.info(f"Assembled {scenario.variant.value} channels: L={len(layers)}, "
                f"N={grids[0].count}, {len(cache)} distinct element integrals "
                f"({cache.hits} cache hits) in {time.perf_counter() - start:.2f} s")
    return ChannelSet(tuple(layers), g, lam)


def direct_channel(scenario: Scenario) -> np.ndarray:
    """M x K free-space channel from every user antenna to every BS antenna."""
    bs = np.array([p.as_array() for p in ula_positions(scenario.bs_array)])
    users = np.array([p.as_array() for p in ula_positions(scenario.user_array)])
    return friis_matrix(bs, users, scenario.wavelength)
