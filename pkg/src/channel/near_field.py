"""
Near-field (Type II) channel: lossless point source to a planar element.

The per-area gain of an isotropic point source at depth ``d`` in front of a
plane, measured along the plane normal, is

    rho(px, pz) = d * ((px - ox)**2 + d**2) / (4*pi * ((px - ox)**2 + (pz - oz)**2 + d**2)**2.5)

Integrating ``rho`` over an element gives its power gain; the channel
coefficient takes the square root of that gain as amplitude and the phase of
the centre-to-centre distance.
"""

from dataclasses import dataclass
from typing import Optional, Tuple
import logging
import math

import numpy as np

from .quadrature import integrate_2d
from ..errors import DegenerateGeometry
from ..geometry import ElementGrid, Position3D

logger = logging.getLogger(__name__)

ELEMENT_GAIN_RTOL = 1e-9


@dataclass(frozen=True)
class GainDensityParams:
    """Depth ``d`` along y and lateral offsets of the fixed endpoint."""
    d: float
    offset_x: float = 0.0
    offset_z: float = 0.0

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError(f"Propagation depth must be positive, got {self.d}")


def gain_density(params: GainDensityParams, px, pz):
    """Per-area power gain (1/m^2) at plane point(s) ``(px, pz)``."""
    dx2 = (np.asarray(px) - params.offset_x) ** 2
    dz2 = (np.asarray(pz) - params.offset_z) ** 2
    d = params.d
    return d * (dx2 + d * d) / (4.0 * np.pi * (dx2 + dz2 + d * d) ** 2.5)


def centred_square(element_size: float) -> Tuple[float, float, float, float]:
    half = element_size / 2.0
    return -half, half, -half, half


def element_gain(params: GainDensityParams, region: Tuple[float, float, float, float],
                 rel_tol: float = ELEMENT_GAIN_RTOL) -> float:
    """
    Power gain collected by ``region = (x0, x1, z0, z1)``.

    Raises:
        QuadratureNotConverged: if the tolerance is out of reach.
    """
    x0, x1, z0, z1 = region
    if not (x1 > x0 and z1 > z0):
        raise ValueError(f"Region must have positive area, got {region}")
    result = integrate_2d(lambda px, pz: gain_density(params, px, pz),
                          (x0, x1), (z0, z1), rel_tol=rel_tol)
    return float(result.value)


class ElementGainCache:
    """
    Memo of element gains keyed by depth and offset magnitudes.

    Over a centred square the gain is even in each offset separately, so a
    regular grid facing another regular grid needs far fewer integrals than
    it has element pairs.
    """

    def __init__(self, element_size: float, rel_tol: float = ELEMENT_GAIN_RTOL):
        self.element_size = element_size
        self.rel_tol = rel_tol
        self._gains = {}
        self.hits = 0

    def _key(self, d: float, ox: float, oz: float):
        scale = self.element_size * 1e-9
        return (round(d / scale), round(abs(ox) / scale), round(abs(oz) / scale))

    def gain(self, d: float, ox: float, oz: float) -> float:
        key = self._key(d, ox, oz)
        cached = self._gains.get(key)
        if cached is not None:
            self.hits += 1
            return cached
        value = element_gain(GainDensityParams(d, abs(ox), abs(oz)),
                             centred_square(self.element_size), rel_tol=self.rel_tol)
        self._gains[key] = value
        return value

    def __len__(self) -> int:
        return len(self._gains)


def near_field_channel(source: Position3D, target_grid: ElementGrid, element_size: float,
                       wavelength: float,
                       cache: Optional[ElementGainCache] = None) -> np.ndarray:
    """
    Channel coefficients from a point source to every element of a layer.

    Entry n has magnitude sqrt(element gain) with depth |plane_y - source.y|
    and offsets (alpha_n - source.x, beta_n - source.z), and phase
    -2*pi/lambda times the distance from the source to element n's centre.

    Raises:
        DegenerateGeometry: if the source lies in the target plane.
    """
    d = abs(target_grid.plane_y - source.y)
    if d <= element_size * 1e-9:
        raise DegenerateGeometry(
            f"Source {source} lies in the target plane y={target_grid.plane_y}"
        )
    if cache is None:
        cache = ElementGainCache(element_size)

    offsets = target_grid.centers - np.array([source.x, source.z])
    gains = np.array([cache.gain(d, ox, oz) for ox, oz in offsets])
    distances = np.linalg.norm(target_grid.positions() - source.as_array(), axis=1)
    k = 2.0 * math.pi / wavelength
    return np.sqrt(gains) * np.exp(-1j * k * distances)
