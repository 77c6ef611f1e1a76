"""
Azimuth-cut radiation pattern of a layer's emission.

Elements sharing an x-coordinate are summed coherently into one column
phasor; the array factor of the columns is evaluated along the azimuth cut
at zero elevation.
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence
import logging

import numpy as np

from ..beamformer import BeamformerState, CascadeCache
from ..channel import ChannelSet
from ..errors import ZeroEmission
from ..scenario import Scenario

logger = logging.getLogger(__name__)

FLOOR_DB = -300.0


@dataclass(frozen=True, eq=False)
class RadiationPattern:
    angles: np.ndarray
    gain_db: np.ndarray
    layer: int = 0

    @property
    def angles_deg(self) -> np.ndarray:
        return np.degrees(self.angles)

    @property
    def peak_db(self) -> float:
        return float(np.max(self.gain_db))

    @property
    def peak_angle(self) -> float:
        return float(self.angles[int(np.argmax(self.gain_db))])


def angle_grid(start_deg: float, stop_deg: float, step_deg: float) -> np.ndarray:
    """Inclusive azimuth grid in radians."""
    count = int(round((stop_deg - start_deg) / step_deg)) + 1
    return np.radians(np.linspace(start_deg, stop_deg, count))


def column_phasors(emission: np.ndarray, x_positions: np.ndarray, tol: float):
    """Coherent per-column sums; returns (column x positions, phasors)."""
    keys = np.round(x_positions / tol).astype(np.int64)
    unique, inverse = np.unique(keys, return_inverse=True)
    sums = np.zeros(unique.size, dtype=complex)
    np.add.at(sums, inverse, emission)
    xs = np.array([x_positions[inverse == i].mean() for i in range(unique.size)])
    return xs, sums


def array_factor(xs: np.ndarray, phasors: np.ndarray, wavelength: float, angles) -> np.ndarray:
    k = 2.0 * np.pi / wavelength
    steering = np.exp(1j * k * np.outer(np.sin(angles), xs))
    return steering @ phasors


def radiation_pattern(state: BeamformerState, ch: ChannelSet, kappa: float,
                      scenario: Scenario, angles, layer: Optional[int] = None,
                      normalize: bool = True) -> RadiationPattern:
    """
    20 log10 |sum_c E_c exp(j k alpha_c sin(phi))| over ``angles`` (radians).

    ``layer`` selects whose emission is used (default: the last). With
    ``normalize`` the grid maximum is 0 dB.

    Raises:
        ZeroEmission: if the selected layer emits nothing.
        LayerOutOfRange: if ``layer`` is not in 1..L.
    """
    angles = np.asarray(angles, dtype=float)
    if angles.ndim != 1 or angles.size == 0 or np.any(np.diff(angles) <= 0):
        raise ValueError("angle grid must be a non-empty, strictly increasing vector")
    l = ch.num_layers if layer is None else layer
    emission = CascadeCache(state, ch, kappa).emission(l)
    if not np.any(emission):
        raise ZeroEmission(f"layer {l} emission is identically zero")

    grid = scenario.grids()[l - 1]
    xs, phasors = column_phasors(emission, grid.centers[:, 0], grid.element_size * 1e-6)
    magnitude = np.abs(array_factor(xs, phasors, scenario.wavelength, angles))
    if not np.any(magnitude):
        raise ZeroEmission(f"layer {l} columns cancel at every angle")
    with np.errstate(divide='ignore'):
        gain_db = 20.0 * np.log10(magnitude)
    gain_db = np.maximum(gain_db, np.max(gain_db) + FLOOR_DB)
    if normalize:
        gain_db = gain_db - np.max(gain_db)
    return RadiationPattern(angles=angles, gain_db=gain_db, layer=l)


def normalize_patterns(patterns: Sequence[RadiationPattern]) -> List[RadiationPattern]:
    """Shift every pattern by the common maximum so the best one peaks at 0 dB."""
    if not patterns:
        return []
    peak = max(p.peak_db for p in patterns)
    return [replace(p, gain_db=p.gain_db - peak) for p in patterns]


def _local_maxima(gain: np.ndarray) -> np.ndarray:
    left = np.r_[-np.inf, gain[:-1]]
    right = np.r_[gain[1:], -np.inf]
    mask = (gain > left) & (gain >= right)
    return np.flatnonzero(mask)


def mainlobe_to_sidelobe_db(pattern: RadiationPattern) -> float:
    """
    Peak level minus the highest local maximum outside the main lobe.

    The main lobe spans from the peak to the first local minimum on either
    side. Returns ``inf`` when there is no sidelobe.
    """
    g = pattern.gain_db
    peak = int(np.argmax(g))
    lo = peak
    while lo > 0 and g[lo - 1] <= g[lo]:
        lo -= 1
    hi = peak
    while hi < g.size - 1 and g[hi + 1] <= g[hi]:
        hi += 1
    maxima = [i for i in _local_maxima(g) if i < lo or i > hi]
    if not maxima:
        return float('inf')
    return float(g[peak] - max(g[i] for i in maxima))
