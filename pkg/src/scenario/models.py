"""
Validated configuration models.

The YAML configuration is a plain nested mapping (see ``config/config.yaml``);
these pydantic models check it once at load time so the numerical code can
trust its inputs.
"""

from typing import List, Optional, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    field_validator,
    model_validator,
)

Vector3 = Tuple[float, float, float]


class _Strict(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class ArrayConfig(_Strict):
    """A uniform linear antenna array."""
    count: PositiveInt
    center: Vector3 = (0.0, 0.0, 0.0)
    axis: Vector3 = (1.0, 0.0, 0.0)
    spacing_m: Optional[PositiveFloat] = None

    @field_validator('axis')
    @classmethod
    def _unit_axis(cls, axis: Vector3) -> Vector3:
        norm = sum(c * c for c in axis) ** 0.5
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"axis must have unit norm, got {axis}")
        return axis


class MultiLayerConfig(_Strict):
    layers: PositiveInt = 2
    cols: PositiveInt = 8
    rows: PositiveInt = 12
    depths_m: List[PositiveFloat] = Field(default_factory=lambda: [0.02, 0.02])

    @model_validator(mode='after')
    def _depth_per_layer(self) -> 'MultiLayerConfig':
        if len(self.depths_m) != self.layers:
            raise ValueError(
                f"depths_m needs one entry per layer ({self.layers}), got {len(self.depths_m)}"
            )
        return self


class SingleLayerConfig(_Strict):
    cols: PositiveInt = 12
    rows: PositiveInt = 16
    depth_m: PositiveFloat = 0.02


class ScenarioConfig(_Strict):
    """Physical description shared by every variant of an experiment."""
    frequency_hz: PositiveFloat = 2.5e9
    noise_power_w: PositiveFloat = 1e-6
    kappa: float = Field(default=0.8, gt=0.0, le=1.0)
    p_max_dbw: float = 0.0
    element_size_m: Optional[PositiveFloat] = None
    user_array: ArrayConfig = ArrayConfig(count=2, center=(0.0, 0.0, 0.0))
    bs_array: ArrayConfig = ArrayConfig(count=8, center=(0.0, 20.0, 0.0))
    multi_layer: MultiLayerConfig = MultiLayerConfig()
    single_layer: SingleLayerConfig = SingleLayerConfig()


class OptimizerSettings(_Strict):
    tolerance: PositiveFloat = 1e-6
    max_iters: PositiveInt = 100
    restarts: PositiveInt = 1
    seed: NonNegativeInt = 0
    workers: PositiveInt = 1


class SweepSettings(_Strict):
    start_dbw: float = -10.0
    stop_dbw: float = 20.0
    step_db: PositiveFloat = 2.0

    def points(self) -> List[float]:
        count = int(round((self.stop_dbw - self.start_dbw) / self.step_db)) + 1
        return [self.start_dbw + i * self.step_db for i in range(max(count, 1))]


class ConvergenceSettings(_Strict):
    p_max_dbw: float = 0.0


class PowerDistributionSettings(_Strict):
    epsilon: PositiveFloat = 1.0 / 6.0


class PatternSettings(_Strict):
    start_deg: float = -90.0
    stop_deg: float = 90.0
    step_deg: PositiveFloat = 0.25

    @model_validator(mode='after')
    def _increasing(self) -> 'PatternSettings':
        if self.stop_deg <= self.start_deg:
            raise ValueError("stop_deg must exceed start_deg")
        return self


class AmplitudeBoundSettings(_Strict):
    b: PositiveInt = 4
    a_m: PositiveFloat = 0.06
    d1_m: PositiveFloat = 0.02
    d2_m: PositiveFloat = 0.02
    target_index: NonNegativeInt = 10
    trials: PositiveInt = 1000
    wavelength_m: Optional[PositiveFloat] = None


class SinrSettings(_Strict):
    user_offsets_m: List[Vector3] = Field(default_factory=lambda: [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)])
    combiner: str = 'per-user'

    @field_validator('combiner')
    @classmethod
    def _known_combiner(cls, value: str) -> str:
        if value not in ('per-user', 'shared'):
            raise ValueError("combiner must be 'per-user' or 'shared'")
        return value


class DofExampleSettings(_Strict):
    profiles: List[str] = Field(default_factory=lambda: ['none', 'random', 'gradual'])


class ExperimentSettings(_Strict):
    variants: List[str] = Field(
        default_factory=lambda: ['multi-layer', 'single-layer-us', 'single-layer-bss', 'none'])
    snr_sweep: SweepSettings = SweepSettings()
    convergence: ConvergenceSettings = ConvergenceSettings()
    power_distribution: PowerDistributionSettings = PowerDistributionSettings()
    pattern: PatternSettings = PatternSettings()
    amplitude_bound: AmplitudeBoundSettings = AmplitudeBoundSettings()
    sinr: SinrSettings = SinrSettings()
    dof_example: DofExampleSettings = DofExampleSettings()
