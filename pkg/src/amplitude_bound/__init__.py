"""
Numerical check of the amplitude range of a second-layer element.
"""

from .bound import (
    AmplitudeBoundScenario,
    BoundReport,
    ElementIntegral,
    coupling_integrand,
    element_integrals,
    power_integrand,
    verify_bound,
    y_n,
    zeta_n,
    zeta_n_partitioned,
)
from .construction import close_quadrilateral, construct_zero

__all__ = [
    'AmplitudeBoundScenario', 'BoundReport', 'ElementIntegral',
    'coupling_integrand', 'element_integrals', 'power_integrand',
    'verify_bound', 'y_n', 'zeta_n', 'zeta_n_partitioned',
    'close_quadrilateral', 'construct_zero',
]
