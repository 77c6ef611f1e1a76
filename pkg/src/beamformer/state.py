"""
Beamformer state, optimizer configuration and run traces.
"""

from dataclasses import dataclass, field, replace
from typing import List, Tuple

import numpy as np

from ..errors import NonUnitPhase


@dataclass(frozen=True, eq=False)
class BeamformerState:
    """UL-TBF vector ``w`` (K), per-layer phase diagonals ``theta`` (L x N) and combiner ``v`` (M)."""
    w: np.ndarray
    theta: Tuple[np.ndarray, ...]
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'w', np.asarray(self.w, dtype=complex))
        object.__setattr__(self, 'theta', tuple(np.asarray(t, dtype=complex) for t in self.theta))
        object.__setattr__(self, 'v', np.asarray(self.v, dtype=complex))

    @property
    def num_layers(self) -> int:
        return len(self.theta)

    @property
    def transmit_power(self) -> float:
        return float(np.vdot(self.w, self.w).real)

    def with_theta(self, l: int, theta_l: np.ndarray) -> 'BeamformerState':
        """Copy with layer ``l`` (1-based) replaced."""
        thetas = list(self.theta)
        thetas[l - 1] = theta_l
        return replace(self, theta=tuple(thetas))

    def with_w(self, w: np.ndarray) -> 'BeamformerState':
        return replace(self, w=w)

    def with_v(self, v: np.ndarray) -> 'BeamformerState':
        return replace(self, v=v)

    def check_unit_phases(self, tol: float = 1e-9) -> None:
        for l, t in enumerate(self.theta, start=1):
            dev = np.max(np.abs(np.abs(t) - 1.0)) if t.size else 0.0
            if dev > tol:
                raise NonUnitPhase(f"theta_{l} deviates from unit modulus by {dev:.3e}")


@dataclass(frozen=True)
class OptimizerConfig:
    tolerance: float = 1e-6
    max_iters: int = 100
    seed: int = 0
    restarts: int = 1
    workers: int = 1

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iters < 1 or self.restarts < 1 or self.workers < 1:
            raise ValueError("max_iters, restarts and workers must be at least 1")

    @classmethod
    def from_settings(cls, settings) -> 'OptimizerConfig':
        return cls(tolerance=settings.tolerance, max_iters=settings.max_iters,
                   seed=settings.seed, restarts=settings.restarts, workers=settings.workers)


@dataclass
class RunTrace:
    """SNR history of one optimizer run; entry i is the SNR after sweep i+1."""
    initial_snr: float
    tolerance: float
    snr_per_iteration: List[float] = field(default_factory=list)
    converged: bool = False
    restart: int = 0

    @property
    def iterations(self) -> int:
        return len(self.snr_per_iteration)

    @property
    def final_snr(self) -> float:
        return self.snr_per_iteration[-1] if self.snr_per_iteration else self.initial_snr

    def is_monotone(self, slack: float = 1e-9) -> bool:
        values = [self.initial_snr, *self.snr_per_iteration]
        return all(b >= a - slack * abs(a) for a, b in zip(values, values[1:]))
