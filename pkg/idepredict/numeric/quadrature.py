"""Adaptive quadrature with an explicit tolerance and evaluation budget."""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from ..utilities.error_handler import ConvergenceError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadResult:
    """Value of one integral with its error estimate and evaluation count."""
    value: float
    abs_error_estimate: float
    n_evals: int

    def __post_init__(self):
        if not self.abs_error_estimate >= 0:
            raise DomainError(f"abs_error_estimate must be >= 0, got {self.abs_error_estimate}")
        if self.n_evals < 1:
            raise DomainError(f"n_evals must be >= 1, got {self.n_evals}")

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            value=self.value + other.value,
            abs_error_estimate=self.abs_error_estimate + other.abs_error_estimate,
            n_evals=self.n_evals + other.n_evals,
        )

    def scaled(self, factor: float) -> "QuadResult":
        return QuadResult(self.value * factor, self.abs_error_estimate * abs(factor), self.n_evals)


@dataclass(frozen=True)
class QuadTolerances:
    """Absolute/relative tolerance and subdivision budget for ``adaptive_quad``."""
    abs_tol: float = 1e-5
    rel_tol: float = 1e-5
    max_subintervals: int = 500

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError(
                f"tolerances must be positive, got abs={self.abs_tol} rel={self.rel_tol}")
        if self.max_subintervals < 1:
            raise DomainError(f"max_subintervals must be >= 1, got {self.max_subintervals}")

    def with_overrides(self, abs_tol: Optional[float] = None,
                       rel_tol: Optional[float] = None) -> "QuadTolerances":
        return replace(
            self,
            abs_tol=self.abs_tol if abs_tol is None else abs_tol,
            rel_tol=self.rel_tol if rel_tol is None else rel_tol,
        )


DEFAULT_TOLERANCES = QuadTolerances()
# per-angle Bayesian integrals and the 2-D bound integral
BAYES_TOLERANCES = QuadTolerances(abs_tol=1e-18, rel_tol=1e-12, max_subintervals=1000)
ZZB_TOLERANCES = QuadTolerances(abs_tol=1e-10, rel_tol=1e-6, max_subintervals=500)


def adaptive_quad(f: Callable[[float], float], a: float, b: float,
                  abs_tol: float = 1e-5, rel_tol: float = 1e-5,
                  max_subintervals: int = 500,
                  breakpoints: Sequence[float] = (),
                  raise_on_budget: bool = True) -> QuadResult:
    """
    Integrate ``f`` over ``[a, b]`` by adaptive Gauss-Kronrod subdivision.

    Args:
        f: Real integrand, finite on [a, b]
        a: Lower limit
        b: Upper limit, ``a < b``
        abs_tol: Absolute tolerance
        rel_tol: Relative tolerance
        max_subintervals: Subdivision budget, raised to cover the breakpoint partition
        breakpoints: Interior points where ``f`` is known to kink or jump
        raise_on_budget: Raise ``ConvergenceError`` when the budget runs out
            before the tolerance is met; otherwise log and return the estimate

    Returns:
        QuadResult: Value, error estimate and number of integrand evaluations

    Raises:
        DomainError: ``a >= b`` or non-finite limits
        ConvergenceError: Budget exhausted above tolerance, or a non-finite value
    """
    if not (np.isfinite(a) and np.isfinite(b)):
        raise DomainError(f"integration limits must be finite, got [{a}, {b}]")
    if not a < b:
        raise DomainError(f"integration requires a < b, got [{a}, {b}]")

    points = sorted(p for p in breakpoints if a < p < b) or None
    # the breakpoint partition alone uses len(points) + 1 subintervals
    limit = max(max_subintervals, len(points) + 2) if points else max_subintervals
    out = integrate.quad(f, a, b, epsabs=abs_tol, epsrel=rel_tol,
                         limit=limit, points=points, full_output=1)
    value, abs_error, info = float(out[0]), float(out[1]), out[2]
    message = out[3] if len(out) > 3 else None
    n_evals = max(1, int(info.get('neval', 1)))

    if not np.isfinite(value):
        raise ConvergenceError(
            f"integral over [{a}, {b}] is not finite", best_estimate=value,
            abs_error_estimate=abs_error, n_evals=n_evals)

    if message is not None and "invalid" in str(message):
        raise DomainError(f"quadrature over [{a}, {b}] rejected its input: {message}")
    if message is not None:
        target = max(abs_tol, rel_tol * abs(value))
        exhausted = int(info.get('last', 0)) >= limit
        if exhausted and abs_error > target:
            if raise_on_budget:
                raise ConvergenceError(
                    f"quadrature over [{a:.6g}, {b:.6g}] stopped at {limit} "
                    f"subintervals with error estimate {abs_error:.3e} > {target:.3e}",
                    best_estimate=value, abs_error_estimate=abs_error, n_evals=n_evals)
            logger.warning(
                f"quadrature budget exhausted on [{a:.6g}, {b:.6g}]: "
                f"error estimate {abs_error:.3e} > {target:.3e}")
        else:
            logger.debug(f"quadrature on [{a:.6g}, {b:.6g}] accepted with note: {message}")

    return QuadResult(value=value, abs_error_estimate=abs(abs_error), n_evals=n_evals)


def integrate_with(f: Callable[[float], float], a: float, b: float,
                   tols: QuadTolerances = DEFAULT_TOLERANCES,
                   breakpoints: Sequence[float] = (),
                   raise_on_budget: bool = True) -> QuadResult:
    """``adaptive_quad`` driven by a ``QuadTolerances`` record."""
    return adaptive_quad(f, a, b, abs_tol=tols.abs_tol, rel_tol=tols.rel_tol,
                         max_subintervals=tols.max_subintervals,
                         breakpoints=breakpoints, raise_on_budget=raise_on_budget)
