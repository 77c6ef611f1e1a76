"""
Antenna-array and RIS-layer layouts.

Coordinates follow the simulation scenario: the user sits near the origin,
surfaces are planes of constant y and the BS lies far along +y. Layer element
positions are described by their (x, z) centres, written (alpha, beta).
"""

from dataclasses import dataclass, field
from typing import List, Tuple
import math

import numpy as np


@dataclass(frozen=True)
class Position3D:
    """A point in metres."""
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise ValueError(f"Position components must be finite, got {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_sequence(cls, values) -> "Position3D":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def translated(self, dx: float, dy: float, dz: float) -> "Position3D":
        return Position3D(self.x + dx, self.y + dy, self.z + dz)


@dataclass(frozen=True)
class UlaSpec:
    """Uniform linear array: ``count`` antennas ``spacing`` apart along ``axis``."""
    count: int
    spacing: float
    center: Position3D
    axis: Tuple[float, float, float] = (1.0, 0.0, 0.0)

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"ULA needs at least one antenna, got {self.count}")
        if not self.spacing > 0:
            raise ValueError(f"ULA spacing must be positive, got {self.spacing}")
        if abs(float(np.linalg.norm(self.axis)) - 1.0) > 1e-9:
            raise ValueError(f"ULA axis must have unit norm, got {self.axis}")


@dataclass(frozen=True)
class UpaLayerSpec:
    """A closely packed rectangular layer of square elements in the plane y = plane_y."""
    cols: int
    rows: int
    element_size: float
    plane_y: float
    center_xz: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.cols < 1 or self.rows < 1:
            raise ValueError(f"Layer needs positive rows/cols, got {self.rows}x{self.cols}")
        if not self.element_size > 0:
            raise ValueError(f"Element size must be positive, got {self.element_size}")

    @property
    def count(self) -> int:
        return self.cols * self.rows

    @property
    def extent(self) -> Tuple[float, float]:
        """Panel width along x and height along z."""
        return self.cols * self.element_size, self.rows * self.element_size


@dataclass(frozen=True, eq=False)
class ElementGrid:
    """Element centres of one layer; ``centers[n] = (alpha_n, beta_n)``."""
    centers: np.ndarray
    plane_y: float
    element_size: float
    cols: int
    rows: int
    centroid: Tuple[float, float] = field(default=(0.0, 0.0))

    @property
    def count(self) -> int:
        return len(self.centers)

    def region(self, n: int) -> Tuple[float, float, float, float]:
        """Rectangle (x0, x1, z0, z1) covered by element ``n``."""
        alpha, beta = self.centers[n]
        half = self.element_size / 2.0
        return alpha - half, alpha + half, beta - half, beta + half

    def position(self, n: int) -> Position3D:
        alpha, beta = self.centers[n]
        return Position3D(float(alpha), self.plane_y, float(beta))

    def positions(self) -> np.ndarray:
        """(N, 3) array of element centres in 3-D."""
        out = np.empty((self.count, 3))
        out[:, 0] = self.centers[:, 0]
        out[:, 1] = self.plane_y
        out[:, 2] = self.centers[:, 1]
        return out

    def index(self, row: int, col: int) -> int:
        return row * self.cols + col


def element_centers(layer: UpaLayerSpec) -> ElementGrid:
    """
    Lay out the element centres of a layer.

    Indexing is row-major with x varying fastest, starting from the most
    negative (alpha, beta) corner: ``n = row * cols + col``.
    """
    a = layer.element_size
    cx, cz = layer.center_xz
    xs = cx + (np.arange(layer.cols) - (layer.cols - 1) / 2.0) * a
    zs = cz + (np.arange(layer.rows) - (layer.rows - 1) / 2.0) * a
    alpha, beta = np.meshgrid(xs, zs)  # rows index z, cols index x
    centers = np.column_stack([alpha.ravel(), beta.ravel()])
    return ElementGrid(
        centers=centers,
        plane_y=layer.plane_y,
        element_size=a,
        cols=layer.cols,
        rows=layer.rows,
        centroid=(float(cx), float(cz)),
    )


def ula_positions(spec: UlaSpec) -> List[Position3D]:
    """Antenna positions centred on ``spec.center`` and spaced along ``spec.axis``."""
    axis = np.asarray(spec.axis, dtype=float)
    center = spec.center.as_array()
    offsets = (np.arange(spec.count) - (spec.count - 1) / 2.0) * spec.spacing
    return [Position3D.from_sequence(center + o * axis) for o in offsets]
