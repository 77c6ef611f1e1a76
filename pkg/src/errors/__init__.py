from .exceptions import (
    UsRisError,
    ConfigError,
    GeometryError,
    GridNotSymmetric,
    GridHasAxisElements,
    DegenerateGeometry,
    QuadratureNotConverged,
    DimensionMismatch,
    ChannelNotPassive,
    ZeroEffectiveChannel,
    LayerOutOfRange,
    InvalidForMultiLayer,
    EmptyDistribution,
    ZeroEmission,
    NonUnitPhase,
    BoundViolated,
    PolygonInfeasible,
)
from .error_tracker import ErrorTracker, ExperimentError

__all__ = [
    'UsRisError', 'ConfigError', 'GeometryError', 'GridNotSymmetric',
    'GridHasAxisElements', 'DegenerateGeometry', 'QuadratureNotConverged',
    'DimensionMismatch', 'ChannelNotPassive', 'ZeroEffectiveChannel', 'LayerOutOfRange',
    'InvalidForMultiLayer', 'EmptyDistribution', 'ZeroEmission', 'NonUnitPhase',
    'BoundViolated', 'PolygonInfeasible', 'ErrorTracker', 'ExperimentError',
]
