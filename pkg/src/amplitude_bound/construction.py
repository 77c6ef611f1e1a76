"""
Phase construction driving one second-layer element to zero output.

The first layer is split into mirror-image quaternions. Within each
quaternion the four contributions are steered into a closed quadrilateral:
one pair is rotated onto a resultant t along the positive real axis and the
other pair onto -t.
"""

from typing import List, Sequence, Tuple
import cmath
import logging
import math

import numpy as np

from .bound import AmplitudeBoundScenario, _integral_values
from ..errors import PolygonInfeasible
from ..geometry import quaternion_partition

logger = logging.getLogger(__name__)

PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
CLOSURE_TOL = 1e-12


def _steer_pair(ca: complex, cb: complex, t: float) -> Tuple[complex, complex]:
    """Unit phases with theta_a ca + theta_b cb = t (t > 0)."""
    r1, r2 = abs(ca), abs(cb)
    if r2 == 0.0:
        phi2 = 0.0
    else:
        cos_phi2 = (t * t + r2 * r2 - r1 * r1) / (2.0 * t * r2)
        phi2 = math.acos(min(1.0, max(-1.0, cos_phi2)))
    vb = r2 * cmath.exp(1j * phi2)
    ua = t - vb
    theta_b = cmath.exp(1j * (phi2 - cmath.phase(cb))) if r2 else 1.0
    theta_a = cmath.exp(1j * (cmath.phase(ua) - cmath.phase(ca))) if r1 else 1.0
    return theta_a, theta_b


def _cancel(ca: complex, cb: complex) -> complex:
    """Phase for cb that cancels ca exactly (equal magnitudes)."""
    if ca == 0 or cb == 0:
        return 1.0 + 0j
    return -(ca / abs(ca)) / (cb / abs(cb))


def close_quadrilateral(c: Sequence[complex]) -> Tuple[complex, complex, complex, complex]:
    """
    Unit-modulus phases with sum theta_j c_j = 0 for four contributions.

    Pairings (1,2)/(3,4), (1,3)/(2,4) and (1,4)/(2,3) are tried in turn;
    the resultant t is the midpoint of the interval both pairs can reach.

    Raises:
        PolygonInfeasible: if no pairing has a common resultant, i.e. one
            magnitude exceeds the sum of the other three.
    """
    c = [complex(v) for v in c]
    mags = [abs(v) for v in c]
    slack = CLOSURE_TOL * sum(mags)
    for (i, j), (k, m) in PAIRINGS:
        lo = max(abs(mags[i] - mags[j]), abs(mags[k] - mags[m]))
        hi = min(mags[i] + mags[j], mags[k] + mags[m])
        if lo > hi + slack:
            continue
        t = 0.5 * (lo + max(lo, hi))
        theta = [1.0 + 0j] * 4
        if t <= 0.0:
            theta[j] = _cancel(c[i], c[j])
            theta[m] = _cancel(c[k], c[m])
            return tuple(theta)
        theta[i], theta[j] = _steer_pair(c[i], c[j], t)
        tk, tm = _steer_pair(c[k], c[m], t)
        theta[k], theta[m] = -tk, -tm
        return tuple(theta)
    raise PolygonInfeasible(
        f"magnitudes {['%.6g' % v for v in mags]} cannot close a quadrilateral",
        magnitudes=mags,
    )


def construct_zero(scn: AmplitudeBoundScenario) -> Tuple[np.ndarray, float]:
    """
    First-layer phases that cancel the target element's output.

    Returns:
        (theta1, residual |y_n|) with theta_2n = 1.

    Raises:
        PolygonInfeasible: naming the first quaternion that cannot close.
        GridHasAxisElements, GridNotSymmetric: from the partition.
    """
    c = _integral_values(scn)
    theta1 = np.ones(scn.elements, dtype=complex)
    quaternions: List[Tuple[int, int, int, int]] = quaternion_partition(scn.first_layer())
    for quad in quaternions:
        try:
            phases = close_quadrilateral([c[q] for q in quad])
        except PolygonInfeasible as exc:
            raise PolygonInfeasible(
                f"quaternion {quad}: {exc}", indices=quad, magnitudes=exc.magnitudes
            ) from exc
        theta1[list(quad)] = phases
    residual = abs(np.sum(theta1 * c))
    logger.info(f"Zero construction over {len(quaternions)} quaternions: residual {residual:.3e}")
    return theta1, float(residual)
