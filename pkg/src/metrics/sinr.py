"""
Multi-user evaluation: per-user SINR at the BS and the resulting sum rate.

Each user brings its own transmit vector, phase layers and cascade channels;
the users share the BS array and are separated only by the combiner.
"""

from dataclasses import dataclass
from typing import List, Sequence, Union
import logging
import math

import numpy as np

from ..beamformer import BeamformerState, CascadeCache
from ..channel import ChannelSet
from ..errors import DimensionMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class UserLink:
    w: np.ndarray
    theta: Sequence[np.ndarray]
    channels: ChannelSet

    def effective_power(self, v: np.ndarray, kappa: float) -> float:
        """|v^H g^H (prod kappa Theta f) w|^2 for this user at combiner ``v``."""
        state = BeamformerState(w=self.w, theta=tuple(self.theta), v=v)
        return abs(CascadeCache(state, self.channels, kappa).effective_scalar) ** 2


@dataclass(frozen=True)
class SinrResult:
    sinr: List[float]

    @property
    def rates(self) -> List[float]:
        return [math.log2(1.0 + s) for s in self.sinr]

    @property
    def sum_rate(self) -> float:
        return float(sum(self.rates))

    @property
    def sinr_db(self) -> List[float]:
        return [10.0 * math.log10(s) if s > 0 else float('-inf') for s in self.sinr]


def sinr_eval(users: Sequence[UserLink], v: Union[np.ndarray, Sequence[np.ndarray]],
              kappa: float, noise_power: float) -> SinrResult:
    """
    SINR_u = P_u(v_u) / (sum_{i != u} P_i(v_u) + ||v_u||^2 sigma^2).

    ``v`` is either one combiner shared by all users or one combiner per user.

    Raises:
        DimensionMismatch: if the users do not share the BS array or the
            combiner count does not match the user count.
    """
    if not users:
        return SinrResult(sinr=[])
    bs = {u.channels.bs_antennas for u in users}
    if len(bs) != 1:
        raise DimensionMismatch(f"users disagree on the BS antenna count: {sorted(bs)}")
    if isinstance(v, np.ndarray) and v.ndim == 1:
        combiners = [v] * len(users)
    else:
        combiners = [np.asarray(c, dtype=complex) for c in v]
        if len(combiners) != len(users):
            raise DimensionMismatch(f"{len(combiners)} combiners for {len(users)} users")

    sinr = []
    for idx, vu in enumerate(combiners):
        powers = [other.effective_power(vu, kappa) for other in users]
        interference = sum(p for i, p in enumerate(powers) if i != idx)
        noise = float(np.vdot(vu, vu).real) * noise_power
        sinr.append(powers[idx] / (interference + noise))
    logger.debug(f"SINR per user: {sinr}")
    return SinrResult(sinr=sinr)
