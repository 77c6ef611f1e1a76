"""
Two-dimensional quadrature over axis-aligned rectangles.

``integrate_2d`` is a globally adaptive tensor-product Gauss-Legendre rule:
every active panel carries its own value and the value of its four children,
and the panel with the largest disagreement is split next. Integrands must be
vectorised ``f(px, pz) -> array`` and may be real or complex.

``integrate_2d_reference`` wraps ``scipy.integrate.dblquad`` (nested
Gauss-Kronrod) and is the independent rule used to cross-check results.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple, Union
import heapq
import itertools
import logging
import math

import numpy as np
from scipy import integrate

from ..errors import QuadratureNotConverged

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]
Rectangle = Tuple[float, float, float, float]

DEFAULT_ORDER = 8
DEFAULT_MAX_PANELS = 1_000_000


@dataclass(frozen=True)
class QuadratureResult:
    value: Union[float, complex]
    error: float
    panels: int
    evaluations: int


@lru_cache(maxsize=16)
def _tensor_rule(order: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    xi, zi = np.meshgrid(nodes, nodes, indexing='ij')
    wi = np.outer(weights, weights)
    return xi.ravel(), zi.ravel(), wi.ravel()


def _split(rect: Rectangle) -> Tuple[Rectangle, ...]:
    x0, x1, z0, z1 = rect
    xm, zm = 0.5 * (x0 + x1), 0.5 * (z0 + z1)
    return (x0, xm, z0, zm), (xm, x1, z0, zm), (x0, xm, zm, z1), (xm, x1, zm, z1)


class _PanelRule:
    """Evaluates the tensor rule on batches of rectangles."""

    def __init__(self, func: Integrand, order: int):
        self.func = func
        self.xi, self.zi, self.wi = _tensor_rule(order)
        self.evaluations = 0

    def values(self, rects) -> np.ndarray:
        r = np.asarray(rects, dtype=float)
        hx = 0.5 * (r[:, 1] - r[:, 0])
        hz = 0.5 * (r[:, 3] - r[:, 2])
        px = (0.5 * (r[:, 0] + r[:, 1]))[:, None] + hx[:, None] * self.xi[None, :]
        pz = (0.5 * (r[:, 2] + r[:, 3]))[:, None] + hz[:, None] * self.zi[None, :]
        f = np.asarray(self.func(px, pz))
        self.evaluations += px.size
        return hx * hz * (f @ self.wi)


def _fsum(values) -> Union[float, complex]:
    values = list(values)
    if any(isinstance(v, complex) or np.iscomplexobj(v) for v in values):
        return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))
    return math.fsum(float(v) for v in values)


def integrate_2d(func: Integrand, x_range: Tuple[float, float], z_range: Tuple[float, float],
                 rel_tol: float = 1e-9, abs_tol: float = 0.0, order: int = DEFAULT_ORDER,
                 max_panels: int = DEFAULT_MAX_PANELS) -> QuadratureResult:
    """
    Integrate ``func`` over ``x_range`` x ``z_range`` to ``rel_tol``.

    Raises:
        QuadratureNotConverged: if ``max_panels`` active panels are not enough.
    """
    rule = _PanelRule(func, order)
    counter = itertools.count()
    root: Rectangle = (float(x_range[0]), float(x_range[1]), float(z_range[0]), float(z_range[1]))
    if root[1] <= root[0] or root[3] <= root[2]:
        raise ValueError(f"Integration region must have positive area, got {root}")

    heap = []

    def push(rect: Rectangle, coarse) -> Tuple[object, float]:
        fine = rule.values(_split(rect))
        refined = fine.sum()
        err = float(abs(coarse - refined))
        heapq.heappush(heap, (-err, next(counter), rect, fine))
        return refined, err

    coarse_root = rule.values([root])[0]
    total, total_err = push(root, coarse_root)

    while total_err > max(rel_tol * abs(total), abs_tol):
        if len(heap) >= max_panels:
            raise QuadratureNotConverged(
                f"Adaptive quadrature stopped at {len(heap)} panels with error "
                f"{total_err:.3e} (target {rel_tol:.1e} relative)",
                panels=len(heap),
                error_estimate=total_err,
            )
        neg_err, _, rect, fine = heapq.heappop(heap)
        total -= fine.sum()
        total_err += neg_err
        for child, child_value in zip(_split(rect), fine):
            refined, err = push(child, child_value)
            total += refined
            total_err += err
        total_err = max(total_err, 0.0)

    value = _fsum(v for entry in heap for v in entry[3])
    error = math.fsum(-entry[0] for entry in heap)
    logger.debug(f"integrate_2d: {len(heap)} panels, {rule.evaluations} evaluations, "
                 f"error {error:.2e}")
    return QuadratureResult(value=value, error=error, panels=len(heap),
                            evaluations=rule.evaluations)


def integrate_rectangle(func: Integrand, rect: Rectangle, **kwargs) -> QuadratureResult:
    """Convenience wrapper taking the region as ``(x0, x1, z0, z1)``."""
    x0, x1, z0, z1 = rect
    return integrate_2d(func, (x0, x1), (z0, z1), **kwargs)


def integrate_2d_reference(func: Integrand, x_range: Tuple[float, float],
                           z_range: Tuple[float, float],
                           rel_tol: float = 1e-11) -> Union[float, complex]:
    """Independent cross-check using scipy's nested adaptive Gauss-Kronrod rule."""
    x0, x1 = (float(v) for v in x_range)
    z0, z1 = (float(v) for v in z_range)

    def scalar(z, x):
        return complex(np.asarray(func(np.array(x), np.array(z))))

    real, _ = integrate.dblquad(lambda z, x: scalar(z, x).real, x0, x1, z0, z1,
                                epsabs=0.0, epsrel=rel_tol)
    probe = np.asarray(func(np.array(0.5 * (x0 + x1)), np.array(0.5 * (z0 + z1))))
    if not np.iscomplexobj(probe):
        return real
    imag, _ = integrate.dblquad(lambda z, x: scalar(z, x).imag, x0, x1, z0, z1,
                                epsabs=0.0, epsrel=rel_tol)
    return complex(real, imag)
