"""
Exception hierarchy for the US-RIS simulator.

Every failure raised by the library derives from :class:`UsRisError`, so the
CLI can catch a single type and hand it to the error tracker.
"""

from typing import Optional, Sequence


class UsRisError(Exception):
    """Base class for all simulator errors."""


class ConfigError(UsRisError):
    """Configuration file or scenario parameters are invalid."""


class GeometryError(UsRisError):
    """Array or layer geometry cannot be used for the requested operation."""


class GridNotSymmetric(GeometryError):
    """An element centre lacks one of its three mirror images."""


class GridHasAxisElements(GeometryError):
    """An element centre sits on a symmetry axis (odd rows or cols)."""


class DegenerateGeometry(GeometryError):
    """A point source lies in the plane it is supposed to illuminate."""


class QuadratureNotConverged(UsRisError):
    """Adaptive quadrature ran out of panels before reaching its tolerance."""

    def __init__(self, message: str, panels: int = 0, error_estimate: float = float("nan")):
        super().__init__(message)
        self.panels = panels
        self.error_estimate = error_estimate


class DimensionMismatch(UsRisError):
    """Channel matrices and beamformer vectors do not chain."""


class ChannelNotPassive(UsRisError):
    """A channel coefficient would amplify the signal (magnitude above 1)."""


class ZeroEffectiveChannel(UsRisError):
    """A closed-form update would divide by a zero-norm vector."""


class LayerOutOfRange(UsRisError):
    """Layer index outside 1..L."""


class InvalidForMultiLayer(UsRisError):
    """The reflective variant only exists for single-layer surfaces."""


class EmptyDistribution(UsRisError):
    """A power distribution has no elements or no power."""


class ZeroEmission(UsRisError):
    """The emission vector of a layer is identically zero."""


class NonUnitPhase(UsRisError):
    """A phase-shift entry is not on the unit circle."""


class BoundViolated(UsRisError):
    """A sampled amplitude exceeded the analytic upper bound."""


class PolygonInfeasible(UsRisError):
    """Four integral magnitudes cannot close a quadrilateral."""

    def __init__(self, message: str, indices: Optional[Sequence[int]] = None,
                 magnitudes: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.indices = tuple(indices) if indices is not None else ()
        self.magnitudes = tuple(magnitudes) if magnitudes is not None else ()
