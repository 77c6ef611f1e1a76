"""
Physical scenario: arrays, surface layers, wavelength and link budget.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Tuple
import logging
import math

from .models import ScenarioConfig
from ..errors import ConfigError
from ..geometry import ElementGrid, Position3D, UlaSpec, UpaLayerSpec, element_centers

logger = logging.getLogger(__name__)

SPEED_OF_LIGHT = 299_792_458.0


class Variant(str, Enum):
    """Surface configurations compared in the experiments."""
    MULTI_LAYER = "multi-layer"
    SINGLE_LAYER_US = "single-layer-us"
    SINGLE_LAYER_BSS = "single-layer-bss"
    NONE = "none"


def dbw_to_watts(dbw: float) -> float:
    return 10.0 ** (dbw / 10.0)


def wavelength_for(frequency_hz: float) -> float:
    return SPEED_OF_LIGHT / frequency_hz


@dataclass(frozen=True)
class Scenario:
    """Everything needed to synthesize channels and run the optimizer."""
    wavelength: float
    kappa: float
    noise_power: float
    p_max: float
    user_array: UlaSpec
    bs_array: UlaSpec
    layers: Tuple[UpaLayerSpec, ...] = field(default_factory=tuple)
    variant: Variant = Variant.MULTI_LAYER
    reflective: bool = False

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ConfigError(f"wavelength must be positive, got {self.wavelength}")
        if not 0.0 < self.kappa <= 1.0:
            raise ConfigError(f"kappa must lie in (0, 1], got {self.kappa}")
        if not self.noise_power > 0:
            raise ConfigError(f"noise power must be positive, got {self.noise_power}")
        if self.p_max < 0:
            raise ConfigError(f"p_max must be non-negative, got {self.p_max}")
        counts = {layer.count for layer in self.layers}
        if len(counts) > 1:
            raise ConfigError(f"all layers need the same element count, got {sorted(counts)}")
        planes = [layer.plane_y for layer in self.layers]
        if any(b <= a for a, b in zip(planes, planes[1:])):
            raise ConfigError(f"layer planes must be strictly increasing in y, got {planes}")
        if self.layers and self.layers[0].plane_y <= self.user_array.center.y:
            raise ConfigError("the first layer must lie in front of the user array")
        if self.layers and self.bs_array.center.y <= self.layers[-1].plane_y:
            raise ConfigError("the BS must lie beyond the last layer")

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    @property
    def elements_per_layer(self) -> int:
        return self.layers[0].count if self.layers else 0

    @property
    def user_antennas(self) -> int:
        return self.user_array.count

    @property
    def bs_antennas(self) -> int:
        return self.bs_array.count

    def grids(self) -> List[ElementGrid]:
        return [element_centers(layer) for layer in self.layers]

    def with_power(self, p_max: float) -> 'Scenario':
        return replace(self, p_max=p_max)

    def translated(self, dx: float, dy: float, dz: float) -> 'Scenario':
        """The user array and its surface stack moved together; the BS stays."""
        user = replace(self.user_array, center=self.user_array.center.translated(dx, dy, dz))
        layers = tuple(
            replace(layer, plane_y=layer.plane_y + dy,
                    center_xz=(layer.center_xz[0] + dx, layer.center_xz[1] + dz))
            for layer in self.layers
        )
        return replace(self, user_array=user, layers=layers)


def _ula(cfg, wavelength: float) -> UlaSpec:
    return UlaSpec(
        count=cfg.count,
        spacing=cfg.spacing_m or wavelength / 2.0,
        center=Position3D.from_sequence(cfg.center),
        axis=tuple(float(c) for c in cfg.axis),
    )


def _layers(cfg: ScenarioConfig, variant: Variant, a: float,
            user: UlaSpec) -> Tuple[UpaLayerSpec, ...]:
    origin_y = user.center.y
    center_xz = (user.center.x, user.center.z)
    if variant is Variant.MULTI_LAYER:
        ml = cfg.multi_layer
        planes, y = [], origin_y
        for depth in ml.depths_m:
            y += depth
            planes.append(y)
        return tuple(UpaLayerSpec(ml.cols, ml.rows, a, p, center_xz) for p in planes)
    if variant in (Variant.SINGLE_LAYER_US, Variant.SINGLE_LAYER_BSS):
        sl = cfg.single_layer
        return (UpaLayerSpec(sl.cols, sl.rows, a, origin_y + sl.depth_m, center_xz),)
    return ()


def build_scenario(cfg: ScenarioConfig, variant: Variant,
                   p_max_dbw: Optional[float] = None) -> Scenario:
    """Instantiate one variant of the configured scenario."""
    variant = Variant(variant)
    wavelength = wavelength_for(cfg.frequency_hz)
    a = cfg.element_size_m or wavelength / 2.0
    try:
        user = _ula(cfg.user_array, wavelength)
        bs = _ula(cfg.bs_array, wavelength)
        layers = _layers(cfg, variant, a, user)
        scenario = Scenario(
            wavelength=wavelength,
            kappa=cfg.kappa,
            noise_power=cfg.noise_power_w,
            p_max=dbw_to_watts(cfg.p_max_dbw if p_max_dbw is None else p_max_dbw),
            user_array=user,
            bs_array=bs,
            layers=layers,
            variant=variant,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if variant is Variant.SINGLE_LAYER_BSS:
        # imported here to avoid a package cycle
        from ..beamformer.baseline import reflective_variant
        scenario = reflective_variant(scenario)
    logger.debug(f"Built {variant.value} scenario: L={scenario.num_layers}, "
                 f"N={scenario.elements_per_layer}, lambda={wavelength:.5f} m")
    return scenario


def db(value: float) -> float:
    """10 log10 of a linear power ratio (-inf for 0)."""
    return 10.0 * math.log10(value) if value > 0 else float('-inf')
