"""
Amplitude range of one second-layer element fed through a first layer.

A single-antenna source at the origin illuminates a b x b first layer at
depth d1; every point of that layer re-radiates towards element ``n`` of a
second layer at depth d1 + d2. The contribution of first-layer element j is

    c_j = integral over element j of sqrt(rho_1 rho_2) exp(-j k (|p - s| + |r - p|)) dp

and the element output is y_n = theta_2n * sum_j theta_1j c_j. The
Cauchy-Schwarz bound on |y_n| is

    zeta_n^2 = integral over the whole first layer of rho_1 rho_2 dp,

with sum_j |c_j| <= sqrt(panel area) * zeta_n, hence sum_j |c_j| <= zeta_n
whenever the panel is at most 1 m^2.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional
import logging
import math

import numpy as np

from ..channel import GainDensityParams, gain_density, integrate_2d, integrate_rectangle
from ..errors import BoundViolated, ConfigError, NonUnitPhase
from ..geometry import ElementGrid, Position3D, UpaLayerSpec, element_centers

logger = logging.getLogger(__name__)

INTEGRAL_RTOL = 1e-8
BOUND_SLACK = 1e-6
UNIT_PHASE_TOL = 1e-9


@dataclass(frozen=True)
class AmplitudeBoundScenario:
    """Two b x b layers of ``a``-sized elements in front of a point source."""
    b: int
    a: float
    d1: float
    d2: float
    wavelength: float
    target_index: int = 0

    def __post_init__(self):
        if self.b < 2 or self.b % 2:
            raise ConfigError(f"grid side b must be a positive even integer, got {self.b}")
        for name in ('a', 'd1', 'd2', 'wavelength'):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0 <= self.target_index < self.b * self.b:
            raise ConfigError(f"target index {self.target_index} outside 0..{self.b * self.b - 1}")

    @property
    def elements(self) -> int:
        return self.b * self.b

    @property
    def panel_side(self) -> float:
        return self.a * self.b

    def first_layer(self) -> ElementGrid:
        return element_centers(UpaLayerSpec(self.b, self.b, self.a, self.d1))

    def second_layer(self) -> ElementGrid:
        return element_centers(UpaLayerSpec(self.b, self.b, self.a, self.d1 + self.d2))

    def target(self) -> Position3D:
        return self.second_layer().position(self.target_index)


@dataclass(frozen=True)
class ElementIntegral:
    index: int
    value: complex

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    @property
    def phase(self) -> float:
        return math.atan2(self.value.imag, self.value.real)


@dataclass(frozen=True)
class BoundReport:
    zeta: float
    aligned_max: float
    max_sampled: float
    trials: int
    violations: int

    @property
    def ratio(self) -> float:
        """sum |c_j| / zeta_n; below 1 for piecewise-constant phases."""
        return self.aligned_max / self.zeta


def _densities(scn: AmplitudeBoundScenario):
    target = scn.target()
    rho1 = GainDensityParams(scn.d1)
    rho2 = GainDensityParams(scn.d2, target.x, target.z)
    return rho1, rho2, target


def power_integrand(scn: AmplitudeBoundScenario):
    """rho_1 * rho_2 on the first layer."""
    rho1, rho2, _ = _densities(scn)
    return lambda px, pz: gain_density(rho1, px, pz) * gain_density(rho2, px, pz)


def coupling_integrand(scn: AmplitudeBoundScenario):
    """Complex source-to-target kernel through a first-layer point."""
    rho1, rho2, target = _densities(scn)
    k = 2.0 * math.pi / scn.wavelength
    y1 = scn.d1

    def kernel(px, pz):
        amplitude = np.sqrt(gain_density(rho1, px, pz) * gain_density(rho2, px, pz))
        path = (np.sqrt(px ** 2 + y1 ** 2 + pz ** 2)
                + np.sqrt((target.x - px) ** 2 + (target.y - y1) ** 2 + (target.z - pz) ** 2))
        return amplitude * np.exp(-1j * k * path)

    return kernel


@lru_cache(maxsize=32)
def _integral_values(scn: AmplitudeBoundScenario) -> np.ndarray:
    grid = scn.first_layer()
    kernel = coupling_integrand(scn)
    values = np.array([integrate_rectangle(kernel, grid.region(j), rel_tol=INTEGRAL_RTOL).value
                       for j in range(grid.count)], dtype=complex)
    values.setflags(write=False)
    logger.debug(f"Computed {grid.count} element integrals for target {scn.target_index}")
    return values


def element_integrals(scn: AmplitudeBoundScenario) -> List[ElementIntegral]:
    """
    c_j for every first-layer element, in element-index order.

    Raises:
        QuadratureNotConverged: if an integral misses its tolerance.
    """
    return [ElementIntegral(j, complex(c)) for j, c in enumerate(_integral_values(scn))]


def _check_unit(values, name: str) -> None:
    dev = float(np.max(np.abs(np.abs(values) - 1.0)))
    if dev > UNIT_PHASE_TOL:
        raise NonUnitPhase(f"{name} deviates from unit modulus by {dev:.3e}")


def y_n(scn: AmplitudeBoundScenario, theta1, theta2n: complex = 1.0) -> complex:
    """
    theta_2n * sum_j theta_1j c_j.

    Raises:
        NonUnitPhase: if any phase is off the unit circle.
    """
    theta1 = np.asarray(theta1, dtype=complex)
    if theta1.shape != (scn.elements,):
        raise ValueError(f"theta1 must have {scn.elements} entries, got {theta1.shape}")
    _check_unit(theta1, 'theta1')
    _check_unit(np.atleast_1d(theta2n), 'theta2n')
    return complex(theta2n * np.sum(theta1 * _integral_values(scn)))


def zeta_n(scn: AmplitudeBoundScenario) -> float:
    """Square root of the panel-wide integral of rho_1 rho_2."""
    half = scn.panel_side / 2.0
    result = integrate_2d(power_integrand(scn), (-half, half), (-half, half), rel_tol=INTEGRAL_RTOL)
    return math.sqrt(result.value)


def zeta_n_partitioned(scn: AmplitudeBoundScenario) -> float:
    """The same bound as a sum over first-layer elements."""
    grid = scn.first_layer()
    integrand = power_integrand(scn)
    parts = [integrate_rectangle(integrand, grid.region(j), rel_tol=INTEGRAL_RTOL).value
             for j in range(grid.count)]
    return math.sqrt(math.fsum(parts))


def verify_bound(scn: AmplitudeBoundScenario, trials: int, seed: Optional[int] = 0) -> BoundReport:
    """
    Sample random first-layer phases and check every |y_n| against zeta_n.

    Raises:
        BoundViolated: if a sample or the phase-aligned maximum exceeds
            zeta_n by more than the numerical slack.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    c = _integral_values(scn)
    zeta = zeta_n(scn)
    rng = np.random.default_rng(seed)
    phases = np.exp(1j * rng.uniform(-np.pi, np.pi, (trials, c.size)))
    samples = np.abs(phases @ c)
    aligned = float(np.sum(np.abs(c)))
    limit = zeta * (1.0 + BOUND_SLACK)
    violations = int(np.count_nonzero(samples > limit))
    report = BoundReport(zeta=zeta, aligned_max=aligned, max_sampled=float(samples.max()),
                         trials=trials, violations=violations)
    logger.info(f"Amplitude bound: zeta={zeta:.6e}, sum|c|={aligned:.6e}, "
                f"max sampled={report.max_sampled:.6e}, ratio={report.ratio:.4f}")
    if violations or aligned > limit:
        raise BoundViolated(
            f"{violations} of {trials} samples exceed zeta={zeta:.6e} "
            f"(aligned maximum {aligned:.6e})"
        )
    return report
