"""Parametric mean models ``x = m(theta) + v`` and their differentials."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ..utilities.error_handler import DomainError

ParamLike = Union[float, Sequence[float], np.ndarray]
# (theta of shape (J,), parameter index, derivative order 1 or 2) -> (N,) or None
DerivativeFn = Callable[[np.ndarray, int, int], Optional[np.ndarray]]

SUPPORT_SLACK = 1e-12


class NoiseKind(Enum):
    """Noise model of the measurements."""
    COMPLEX = "complex-circular"
    REAL = "real"

    @property
    def difference_variance_factor(self) -> float:
        """Factor ``c`` such that the pairwise statistic has variance ``c * sigma2``."""
        return 2.0 if self is NoiseKind.COMPLEX else 4.0

    @property
    def fisher_factor(self) -> float:
        """Factor ``c`` in ``I = (c / sigma2) * ||dm||^2``."""
        return 2.0 if self is NoiseKind.COMPLEX else 1.0

    @property
    def likelihood_scale(self) -> float:
        """Factor ``s`` in the log-likelihood ``-||x - m||^2 / (s * sigma2)``."""
        return 1.0 if self is NoiseKind.COMPLEX else 2.0


@dataclass(frozen=True, eq=False)
class ManifoldModel:
    """Mean function ``m: R^J -> C^N`` with a box support.

    ``mean_fn`` is vectorized: it maps a ``(G, J)`` array of parameter vectors
    to a ``(G, N)`` array of mean vectors.
    """
    name: str
    n_sensors: int
    supports: Tuple[Tuple[float, float], ...]
    mean_fn: Callable[[np.ndarray], np.ndarray]
    noise_kind: NoiseKind = NoiseKind.COMPLEX
    param_names: Tuple[str, ...] = ()
    derivative_fn: Optional[DerivativeFn] = None
    metadata: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_sensors < 1:
            raise DomainError(f"model needs at least one output, got N={self.n_sensors}")
        supports = tuple((float(lo), float(hi)) for lo, hi in self.supports)
        if not supports:
            raise DomainError("model needs at least one parameter")
        for lo, hi in supports:
            if not lo < hi:
                raise DomainError(f"support interval must satisfy lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "supports", supports)
        if not self.param_names:
            object.__setattr__(self, "param_names",
                               tuple(f"theta{i + 1}" for i in range(len(supports))))

    @property
    def param_dim(self) -> int:
        return len(self.supports)

    def support_width(self, index: int = 0) -> float:
        lo, hi = self.supports[index]
        return hi - lo

    def as_vector(self, theta: ParamLike) -> np.ndarray:
        vector = np.atleast_1d(np.asarray(theta, dtype=float))
        if vector.shape != (self.param_dim,):
            raise DomainError(
                f"{self.name} expects {self.param_dim} parameter(s), got shape {vector.shape}")
        return vector

    def contains(self, theta: ParamLike) -> bool:
        vector = self.as_vector(theta)
        return bool(np.all(self._inside(vector[None, :])))

    def _inside(self, thetas: np.ndarray) -> np.ndarray:
        bounds = np.asarray(self.supports)
        slack = SUPPORT_SLACK * (1.0 + bounds[:, 1] - bounds[:, 0])
        return np.all((thetas >= bounds[:, 0] - slack) & (thetas <= bounds[:, 1] + slack), axis=-1)

    def check(self, theta: ParamLike, what: str = "parameter") -> np.ndarray:
        vector = self.as_vector(theta)
        if not np.all(np.isfinite(vector)) or not self._inside(vector[None, :])[0]:
            raise DomainError(
                f"{what} {vector.tolist()} outside the support {list(self.supports)} of {self.name}",
                parameter=what, value=vector)
        return vector

    def mean(self, theta: ParamLike) -> np.ndarray:
        """Mean vector ``m(theta)`` of length N."""
        vector = self.check(theta)
        return np.asarray(self.mean_fn(vector[None, :]), dtype=complex)[0]

    def mean_batch(self, thetas: np.ndarray) -> np.ndarray:
        """Mean vectors for a ``(G, J)`` array of parameters."""
        thetas = np.asarray(thetas, dtype=float).reshape(-1, self.param_dim)
        if not np.all(self._inside(thetas)):
            raise DomainError(f"batch contains parameters outside the support of {self.name}")
        return np.asarray(self.mean_fn(thetas), dtype=complex)


@dataclass(frozen=True)
class Derivative:
    """Derivative vector with the difference scheme that produced it."""
    value: np.ndarray
    scheme: str
    step: float = 0.0

    @property
    def one_sided(self) -> bool:
        return self.scheme in ("forward", "backward")


def mtilde(model: ManifoldModel, theta1: ParamLike, theta2: ParamLike) -> np.ndarray:
    """Difference ``m(theta1) - m(theta2)``; both must lie in the support."""
    return model.mean(theta1) - model.mean(theta2)


def _analytic(model: ManifoldModel, theta: np.ndarray, index: int, order: int) -> np.ndarray:
    value = model.derivative_fn(theta, index, order) if model.derivative_fn else None
    if value is None:
        raise DomainError(f"{model.name} has no analytic derivative of order {order}")
    return np.asarray(value, dtype=complex)


def _stencil(model: ManifoldModel, theta: np.ndarray, index: int,
             offsets: Sequence[float]) -> np.ndarray:
    points = np.repeat(theta[None, :], len(offsets), axis=0)
    points[:, index] += np.asarray(offsets)
    return np.asarray(model.mean_fn(points), dtype=complex)


def manifold_derivative(model: ManifoldModel, theta: ParamLike, index: int = 0,
                        h: Optional[float] = None, method: str = "finite") -> Derivative:
    """
    First derivative of the mean with respect to parameter ``index``.

    The finite path uses a central difference with step ``h`` (default
    ``1e-6 * support width``) and switches to a second-order one-sided
    difference within ``h`` of a support edge.

    Args:
        model: Mean model
        theta: Evaluation point inside the support
        index: Parameter index
        h: Difference step
        method: ``"finite"`` or ``"analytic"``

    Returns:
        Derivative: Vector of length N and the scheme used
    """
    vector = model.check(theta)
    if method == "analytic":
        return Derivative(_analytic(model, vector, index, 1), "analytic")
    if method != "finite":
        raise DomainError(f"unknown derivative method {method!r}")

    h = 1e-6 * model.support_width(index) if h is None else float(h)
    if not h > 0:
        raise DomainError(f"difference step must be positive, got {h}")
    lo, hi = model.supports[index]
    t = vector[index]
    if t - h >= lo and t + h <= hi:
        f = _stencil(model, vector, index, (-h, h))
        return Derivative((f[1] - f[0]) / (2.0 * h), "central", h)
    if t + 2 * h <= hi:
        f = _stencil(model, vector, index, (0.0, h, 2 * h))
        return Derivative((-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h), "forward", h)
    f = _stencil(model, vector, index, (0.0, -h, -2 * h))
    return Derivative((3.0 * f[0] - 4.0 * f[1] + f[2]) / (2.0 * h), "backward", h)


def manifold_second_derivative(model: ManifoldModel, theta: ParamLike, index: int = 0,
                               h: Optional[float] = None, method: str = "finite") -> Derivative:
    """Second derivative of the mean; default step ``1e-4 * support width``."""
    vector = model.check(theta)
    if method == "analytic":
        return Derivative(_analytic(model, vector, index, 2), "analytic")
    if method != "finite":
        raise DomainError(f"unknown derivative method {method!r}")

    h = 1e-4 * model.support_width(index) if h is None else float(h)
    if not h > 0:
        raise DomainError(f"difference step must be positive, got {h}")
    lo, hi = model.supports[index]
    t = vector[index]
    if t - h >= lo and t + h <= hi:
        f = _stencil(model, vector, index, (-h, 0.0, h))
        return Derivative((f[0] - 2.0 * f[1] + f[2]) / h ** 2, "central", h)
    sign = 1.0 if t + 3 * h <= hi else -1.0
    f = _stencil(model, vector, index, tuple(sign * k * h for k in range(4)))
    value = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h ** 2
    return Derivative(value, "forward" if sign > 0 else "backward", h)


def fix_parameters(model: ManifoldModel, free_index: int,
                   fixed: Dict[int, float]) -> ManifoldModel:
    """
    Restrict a J-parameter model to its parameter ``free_index``.

    Args:
        model: Full model
        free_index: Parameter left free
        fixed: Values for every other parameter index

    Returns:
        ManifoldModel: One-parameter model over ``supports[free_index]``
    """
    missing = set(range(model.param_dim)) - {free_index} - set(fixed)
    if missing:
        raise DomainError(f"no fixed value for parameter(s) {sorted(missing)} of {model.name}")
    base = np.zeros(model.param_dim)
    for index, value in fixed.items():
        base[index] = value
    base[free_index] = model.supports[free_index][0]
    model.check(base, what="fixed parameters")

    def mean_fn(thetas: np.ndarray) -> np.ndarray:
        full = np.repeat(base[None, :], thetas.shape[0], axis=0)
        full[:, free_index] = thetas[:, 0]
        return model.mean_fn(full)

    derivative_fn = None
    if model.derivative_fn is not None:
        def derivative_fn(theta: np.ndarray, index: int, order: int) -> Optional[np.ndarray]:
            full = base.copy()
            full[free_index] = theta[0]
            return model.derivative_fn(full, free_index, order)

    fixed_text = ", ".join(f"{model.param_names[i]}={v:.6g}" for i, v in sorted(fixed.items()))
    return ManifoldModel(
        name=f"{model.name}[{fixed_text}]",
        n_sensors=model.n_sensors,
        supports=(model.supports[free_index],),
        mean_fn=mean_fn,
        noise_kind=model.noise_kind,
        param_names=(model.param_names[free_index],),
        derivative_fn=derivative_fn,
        metadata={**model.metadata, "fixed": dict(fixed)},
    )


@dataclass(frozen=True, eq=False)
class MismatchPair:
    """True data model, the model assumed by the estimator, and both noise levels."""
    true_model: ManifoldModel
    assumed_model: ManifoldModel
    true_noise_variance: float
    assumed_noise_variance: float

    def __post_init__(self):
        t, a = self.true_model, self.assumed_model
        if t.n_sensors != a.n_sensors:
            raise DomainError(f"models disagree on N: {t.n_sensors} vs {a.n_sensors}")
        if t.param_dim != a.param_dim:
            raise DomainError(f"models disagree on J: {t.param_dim} vs {a.param_dim}")
        if not np.allclose(t.supports, a.supports, rtol=0.0, atol=1e-12):
            raise DomainError(f"models disagree on supports: {t.supports} vs {a.supports}")
        for label, value in (("true", self.true_noise_variance),
                             ("assumed", self.assumed_noise_variance)):
            if not value > 0:
                raise DomainError(f"{label} noise variance must be positive, got {value}")

    def mu(self, theta: ParamLike) -> np.ndarray:
        """Mean offset ``m_true(theta) - m_assumed(theta)``."""
        return self.true_model.mean(theta) - self.assumed_model.mean(theta)
