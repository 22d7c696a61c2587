"""Concrete mean models: far-field and near-field arrays, ULA, single tone."""

from typing import Optional

import numpy as np

from ..utilities.error_handler import DomainError
from .geometry import ArrayGeometry
from .manifold import ManifoldModel, NoiseKind

TWO_PI = 2.0 * np.pi

AZIMUTH_SUPPORT = (-np.pi, np.pi)
ELEVATION_SUPPORT = (0.0, np.pi)


def _direction(phi: np.ndarray, theta: np.ndarray) -> np.ndarray:
    return np.stack([np.cos(phi) * np.sin(theta),
                     np.sin(phi) * np.sin(theta),
                     np.cos(theta)], axis=-1)


def far_field_manifold(geometry: ArrayGeometry, amplitude: float = 1.0) -> ManifoldModel:
    """
    Plane-wave response ``beta * exp(j 2 pi p_n . u(phi, theta))``.

    Parameters are (azimuth, elevation) in radians with
    ``u = (cos phi sin theta, sin phi sin theta, cos theta)``.
    """
    positions = geometry.positions
    beta = float(amplitude)

    def mean_fn(thetas: np.ndarray) -> np.ndarray:
        u = _direction(thetas[:, 0], thetas[:, 1])
        return beta * np.exp(1j * TWO_PI * (u @ positions.T))

    def derivative_fn(theta: np.ndarray, index: int, order: int) -> Optional[np.ndarray]:
        phi, el = theta
        a = mean_fn(theta[None, :])[0]
        if index == 0:
            du = np.array([-np.sin(phi) * np.sin(el), np.cos(phi) * np.sin(el), 0.0])
            d2u = np.array([-np.cos(phi) * np.sin(el), -np.sin(phi) * np.sin(el), 0.0])
        else:
            du = np.array([np.cos(phi) * np.cos(el), np.sin(phi) * np.cos(el), -np.sin(el)])
            d2u = np.array([-np.cos(phi) * np.sin(el), -np.sin(phi) * np.sin(el), -np.cos(el)])
        g1 = 1j * TWO_PI * (positions @ du)
        if order == 1:
            return g1 * a
        if order == 2:
            return (1j * TWO_PI * (positions @ d2u) + g1 ** 2) * a
        return None

    return ManifoldModel(
        name="far-field",
        n_sensors=geometry.n_sensors,
        supports=(AZIMUTH_SUPPORT, ELEVATION_SUPPORT),
        mean_fn=mean_fn,
        param_names=("azimuth", "elevation"),
        derivative_fn=derivative_fn,
        metadata={"amplitude": beta},
    )


def near_field_manifold(geometry: ArrayGeometry, range_: float,
                        amplitude: float = 1.0) -> ManifoldModel:
    """
    Spherical-wavefront response ``exp(-j 2 pi d_n(phi))`` of a planar array.

    ``d_n(phi) = ||p_n - r (cos phi, sin phi)||`` is the sensor-to-source
    distance in wavelengths; a source on top of a sensor gives ``d_n = 0``.
    """
    if not range_ > 0:
        raise DomainError(f"source range must be positive, got {range_}",
                          parameter="range", value=range_)
    if not geometry.is_planar:
        raise DomainError("near-field model needs a planar geometry (z = 0)")
    planar = geometry.positions[:, :2]
    r = float(range_)
    beta = float(amplitude)

    def mean_fn(thetas: np.ndarray) -> np.ndarray:
        source = r * np.stack([np.cos(thetas[:, 0]), np.sin(thetas[:, 0])], axis=-1)
        distance = np.linalg.norm(planar[None, :, :] - source[:, None, :], axis=-1)
        return beta * np.exp(-1j * TWO_PI * distance)

    return ManifoldModel(
        name="near-field",
        n_sensors=geometry.n_sensors,
        supports=(AZIMUTH_SUPPORT,),
        mean_fn=mean_fn,
        param_names=("azimuth",),
        metadata={"amplitude": beta, "range": r},
    )


def ula_manifold(n_sensors: int, amplitude: complex = 1.0) -> ManifoldModel:
    """Half-wavelength ULA ``alpha * exp(j pi cos(phi) n)`` over ``phi in [0, pi]``."""
    if n_sensors < 2:
        raise DomainError(f"ULA needs at least 2 sensors, got {n_sensors}")
    alpha = complex(amplitude)
    n = np.arange(n_sensors)

    def mean_fn(thetas: np.ndarray) -> np.ndarray:
        return alpha * np.exp(1j * np.pi * np.cos(thetas[:, :1]) * n)

    def derivative_fn(theta: np.ndarray, index: int, order: int) -> Optional[np.ndarray]:
        phi = theta[0]
        m = mean_fn(theta[None, :])[0]
        if order == 1:
            return -1j * np.pi * n * np.sin(phi) * m
        if order == 2:
            return (-1j * np.pi * n * np.cos(phi) - (np.pi * n * np.sin(phi)) ** 2) * m
        return None

    return ManifoldModel(
        name="ula",
        n_sensors=n_sensors,
        supports=((0.0, np.pi),),
        mean_fn=mean_fn,
        param_names=("azimuth",),
        derivative_fn=derivative_fn,
        metadata={"amplitude": alpha},
    )


def frequency_manifold(n_samples: int, amplitude: complex = 1.0) -> ManifoldModel:
    """Single complex tone ``A exp(j omega n)``, ``n = 0..N-1``, over ``[-pi, pi]``."""
    if n_samples < 1:
        raise DomainError(f"tone model needs at least 1 sample, got {n_samples}")
    amp = complex(amplitude)
    n = np.arange(n_samples)

    def mean_fn(thetas: np.ndarray) -> np.ndarray:
        return amp * np.exp(1j * thetas[:, :1] * n)

    def derivative_fn(theta: np.ndarray, index: int, order: int) -> Optional[np.ndarray]:
        m = mean_fn(theta[None, :])[0]
        if order == 1:
            return 1j * n * m
        if order == 2:
            return -(n ** 2) * m
        return None

    return ManifoldModel(
        name="frequency",
        n_sensors=n_samples,
        supports=(AZIMUTH_SUPPORT,),
        mean_fn=mean_fn,
        param_names=("frequency",),
        derivative_fn=derivative_fn,
        metadata={"amplitude": amp},
    )


def identity_manifold(half_width: float = 50.0,
                      noise_kind: NoiseKind = NoiseKind.COMPLEX) -> ManifoldModel:
    """Scalar location model ``m(theta) = theta`` over ``[-half_width, half_width]``."""
    if not half_width > 0:
        raise DomainError(f"half_width must be positive, got {half_width}")

    def mean_fn(thetas: np.ndarray) -> np.ndarray:
        return thetas[:, :1].astype(complex)

    def derivative_fn(theta: np.ndarray, index: int, order: int) -> Optional[np.ndarray]:
        return np.array([1.0 if order == 1 else 0.0], dtype=complex)

    return ManifoldModel(
        name="identity",
        n_sensors=1,
        supports=((-half_width, half_width),),
        mean_fn=mean_fn,
        noise_kind=noise_kind,
        param_names=("theta",),
        derivative_fn=derivative_fn,
    )
