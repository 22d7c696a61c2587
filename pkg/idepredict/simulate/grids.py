"""Search grids for grid-based ML and MAP estimators."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Tuple

import numpy as np

from ..utilities.error_handler import DomainError


class GridTag(Enum):
    UNIFORM = "uniform"
    SPHERE = "sphere"
    OMEGA = "omega"


@dataclass(frozen=True, eq=False)
class SearchGrid:
    """Finite set of candidate parameter vectors, one per row of ``points``."""
    points: np.ndarray
    tag: GridTag
    axes: Tuple[str, ...] = ()
    metadata: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if points.ndim != 2 or points.shape[0] == 0:
            raise DomainError(f"search grid needs a non-empty (G, J) array, got {points.shape}")
        object.__setattr__(self, "points", points)

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def uniform_grid(lo: float, hi: float, n: int = 3600, axis: str = "theta") -> SearchGrid:
    """``n`` equally spaced points over ``[lo, hi]`` including both ends."""
    if n < 2:
        raise DomainError(f"uniform grid needs at least 2 points, got {n}")
    if not lo < hi:
        raise DomainError(f"uniform grid needs lo < hi, got [{lo}, {hi}]")
    return SearchGrid(np.linspace(lo, hi, n)[:, None], GridTag.UNIFORM, (axis,))


def sphere_grid(n_elevation: int = 200, density: float = 100.0) -> SearchGrid:
    """
    Near-uniform (azimuth, elevation) grid on the unit sphere.

    Elevation rings ``theta_k`` are equally spaced on ``[0, pi]``; ring ``k``
    holds ``max(1, ceil(density * sin(theta_k)))`` azimuths equally spaced on
    ``[-pi, pi)``.
    """
    if n_elevation < 2:
        raise DomainError(f"sphere grid needs at least 2 elevation rings, got {n_elevation}")
    if not density > 0:
        raise DomainError(f"ring density must be positive, got {density}")
    elevations = np.linspace(0.0, np.pi, n_elevation)
    counts = np.maximum(1, np.ceil(density * np.sin(elevations)).astype(int))
    ring = np.repeat(np.arange(n_elevation), counts)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    position = np.arange(ring.size) - starts[ring]
    azimuths = -np.pi + 2.0 * np.pi * position / counts[ring]
    points = np.column_stack([azimuths, elevations[ring]])
    return SearchGrid(points, GridTag.SPHERE, ("azimuth", "elevation"),
                      {"ring_counts": counts})


def omega_grid(n: int = 8192) -> SearchGrid:
    """Angles ``arccos(omega / pi)`` for ``n`` uniform spatial frequencies, ascending."""
    if n < 2:
        raise DomainError(f"omega grid needs at least 2 points, got {n}")
    omega = np.linspace(-np.pi, np.pi, n)
    angles = np.arccos(np.clip(omega / np.pi, -1.0, 1.0))[::-1]
    return SearchGrid(angles[:, None], GridTag.OMEGA, ("azimuth",))
