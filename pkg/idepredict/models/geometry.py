"""Sensor array geometries in wavelength units."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from ..utilities.error_handler import ConfigurationError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """Sensor positions ``(x, y, z)`` normalized by the wavelength.

    Two-column input is treated as planar with ``z = 0``.
    """
    positions: np.ndarray

    def __post_init__(self):
        positions = np.atleast_2d(np.asarray(self.positions, dtype=float))
        if positions.ndim != 2 or positions.shape[1] not in (2, 3):
            raise DomainError(f"positions must be K x 2 or K x 3, got shape {positions.shape}")
        if positions.shape[1] == 2:
            positions = np.column_stack([positions, np.zeros(positions.shape[0])])
        if positions.shape[0] < 2:
            raise DomainError(f"an array needs at least 2 sensors, got {positions.shape[0]}")
        if not np.all(np.isfinite(positions)):
            raise DomainError("sensor positions must be finite")
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)

    @property
    def n_sensors(self) -> int:
        return self.positions.shape[0]

    @property
    def is_planar(self) -> bool:
        return bool(np.all(self.positions[:, 2] == 0.0))

    @property
    def aperture(self) -> float:
        """Largest inter-sensor distance."""
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return float(np.max(np.linalg.norm(diff, axis=-1)))


# Coordinates are 4-decimal roundings of 5/3 and 5/(3*sqrt(2)), kept as printed.
_REFERENCE_POSITIONS = np.array([
    [1.6667, 0.0, 0.0],
    [1.1785, 1.1785, 1.1785],
    [0.0, 1.6667, 1.6667],
    [-1.1785, 1.1785, 1.1785],
    [-1.6667, 0.0, 0.0],
    [-1.1785, -1.1785, -1.1785],
    [0.0, -1.6667, -1.6667],
    [1.1785, -1.1785, -1.1785],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 1.6667],
    [0.0, 0.0, -1.6667],
])


def reference_array() -> ArrayGeometry:
    """The 11-sensor 3-D array used for the joint azimuth/elevation scenarios."""
    return ArrayGeometry(_REFERENCE_POSITIONS.copy())


def uca_geometry(n_sensors: int, radius: float, start_angle: float = 0.0) -> ArrayGeometry:
    """Planar uniform circular array, sensor ``k`` at angle ``start_angle + 2*pi*k/n``."""
    if n_sensors < 2 or not radius > 0:
        raise DomainError(f"UCA needs n >= 2 and radius > 0, got n={n_sensors} radius={radius}")
    angles = start_angle + 2.0 * np.pi * np.arange(n_sensors) / n_sensors
    return ArrayGeometry(np.column_stack([radius * np.cos(angles), radius * np.sin(angles)]))


def ula_geometry(n_sensors: int, spacing: float = 0.5) -> ArrayGeometry:
    """Uniform linear array along the x axis starting at the origin."""
    if n_sensors < 2 or not spacing > 0:
        raise DomainError(f"ULA needs n >= 2 and spacing > 0, got n={n_sensors} spacing={spacing}")
    x = spacing * np.arange(n_sensors)
    return ArrayGeometry(np.column_stack([x, np.zeros(n_sensors)]))


def load_geometry(path: Union[str, Path]) -> ArrayGeometry:
    """
    Read a geometry table: one sensor per line, ``x y z`` in wavelengths.

    Lines starting with ``#`` and trailing ``#`` comments are ignored.

    Raises:
        ConfigurationError: file missing or not a three-column numeric table
    """
    path = Path(path)
    try:
        table = np.loadtxt(path, comments="#", ndmin=2, dtype=float)
    except (OSError, ValueError) as error:
        raise ConfigurationError(f"cannot read geometry file {path}: {error}",
                                 config_key="geometry_file", original_error=error) from error
    if table.shape[1] != 3:
        raise ConfigurationError(
            f"geometry file {path} must have 3 columns (x y z), found {table.shape[1]}",
            config_key="geometry_file")
    logger.debug(f"Loaded {table.shape[0]} sensors from {path}")
    try:
        return ArrayGeometry(table)
    except DomainError as error:
        raise ConfigurationError(f"invalid geometry in {path}: {error}",
                                 config_key="geometry_file", original_error=error) from error
