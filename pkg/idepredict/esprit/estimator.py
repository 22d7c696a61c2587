"""Single-source lag-one ESPRIT for a half-wavelength ULA."""

from typing import NamedTuple, Tuple

import numpy as np

from ..utilities.error_handler import DomainError, UndefinedEstimateError


class EspritEstimate(NamedTuple):
    omega_hat: float
    phi_hat: float


def _lag_sum(x: np.ndarray) -> complex:
    return complex(np.vdot(x[:-1], x[1:]))


def _angle_from_omega(omega):
    return np.arccos(np.clip(np.asarray(omega) / np.pi, -1.0, 1.0))


def esprit_estimate(x) -> EspritEstimate:
    """
    Closed-form minimizer of ``J(omega) = sum |x_n - e^{j omega} x_{n-1}|^2``.

    ``omega_hat = arg(sum x*_{n-1} x_n)`` and ``phi_hat = arccos(omega_hat / pi)``
    with the ratio clamped to ``[-1, 1]``.

    Raises:
        UndefinedEstimateError: the lag-one sum is zero
    """
    x = np.asarray(x, dtype=complex).ravel()
    if x.size < 2:
        raise DomainError(f"ESPRIT needs at least 2 samples, got {x.size}")
    lag = _lag_sum(x)
    if lag == 0:
        raise UndefinedEstimateError("lag-one sum is zero; the frequency is undefined")
    omega = float(np.angle(lag))
    return EspritEstimate(omega, float(_angle_from_omega(omega)))


def esprit_estimate_batch(snapshots: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Row-wise ``esprit_estimate`` for a ``(B, N)`` array; undefined rows give NaN."""
    snapshots = np.asarray(snapshots, dtype=complex)
    if snapshots.ndim != 2 or snapshots.shape[1] < 2:
        raise DomainError(f"expected a (B, N >= 2) array, got shape {snapshots.shape}")
    lags = np.sum(np.conj(snapshots[:, :-1]) * snapshots[:, 1:], axis=1)
    omega = np.where(lags == 0, np.nan, np.angle(lags))
    with np.errstate(invalid="ignore"):
        phi = np.where(np.isnan(omega), np.nan, _angle_from_omega(np.nan_to_num(omega)))
    return omega, phi


def esprit_cost(x, omega) -> np.ndarray:
    """ESPRIT cost ``J(omega)`` at one or more frequencies."""
    x = np.asarray(x, dtype=complex).ravel()
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    residual = x[None, 1:] - np.exp(1j * omega)[:, None] * x[None, :-1]
    return np.sum(np.abs(residual) ** 2, axis=1)
