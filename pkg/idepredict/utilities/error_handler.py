"""
Error Handling Module

This module provides the exception hierarchy, error categorization, error
context managers and the centralized error handler used by the numerical
library and the command-line front end.
"""

import time
import logging
import functools
from contextlib import contextmanager
from typing import Type, Callable, Any, Optional, Dict
from enum import Enum


class ErrorCategory(Enum):
    """Categorizes errors by the part of the pipeline that failed."""
    DOMAIN = "domain"
    NUMERICAL = "numerical"
    CONVERGENCE = "convergence"
    ESTIMATOR = "estimator"
    CONFIGURATION = "configuration"
    UNKNOWN = "unknown"

    @property
    def exit_code(self) -> int:
        """Process exit code reported by the CLI for this category."""
        return _EXIT_CODES.get(self, 1)


_EXIT_CODES = {
    ErrorCategory.CONFIGURATION: 2,
    ErrorCategory.CONVERGENCE: 3,
}


class IdePredictError(Exception):
    """Base exception class for all idepredict errors."""

    def __init__(self, message: str, category: ErrorCategory = ErrorCategory.UNKNOWN,
                 original_error: Optional[Exception] = None):
        super().__init__(message)
        self.message = message
        self.category = category
        self.original_error = original_error
        self.timestamp = time.time()


class DomainError(IdePredictError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""

    def __init__(self, message: str, parameter: Optional[str] = None,
                 value: Optional[Any] = None, original_error: Optional[Exception] = None):
        super().__init__(message, ErrorCategory.DOMAIN, original_error)
        self.parameter = parameter
        self.value = value


class ContractError(DomainError):
    """Raised when a caller-supplied callable breaks its documented contract."""


class NotPSDError(IdePredictError):
    """Covariance matrix has an eigenvalue significantly below zero."""

    def __init__(self, message: str, min_eigenvalue: float = 0.0,
                 original_error: Optional[Exception] = None):
        super().__init__(message, ErrorCategory.NUMERICAL, original_error)
        self.min_eigenvalue = min_eigenvalue


class SingularInformationError(IdePredictError):
    """Fisher information is zero, the bound is undefined."""

    def __init__(self, message: str, original_error: Optional[Exception] = None):
        super().__init__(message, ErrorCategory.NUMERICAL, original_error)


class DegenerateCurvatureError(IdePredictError):
    """Curvature term of the misspecified bound vanishes."""

    def __init__(self, message: str, curvature: float = 0.0,
                 original_error: Optional[Exception] = None):
        super().__init__(message, ErrorCategory.NUMERICAL, original_error)
        self.curvature = curvature


class ConvergenceError(IdePredictError):
    """Quadrature did not reach its tolerance within the evaluation budget."""

    def __init__(self, message: str, best_estimate: float = float("nan"),
                 abs_error_estimate: float = float("nan"), n_evals: int = 0,
                 original_error: Optional[Exception] = None):
        super().__init__(message, ErrorCategory.CONVERGENCE, original_error)
        self.best_estimate = best_estimate
        self.abs_error_estimate = abs_error_estimate
        self.n_evals = n_evals


class UndefinedEstimateError(IdePredictError):
    """Estimator has no defined output for the given data."""

    def __init__(self, message: str, original_error: Optional[Exception] = None):
        super().__init__(message, ErrorCategory.ESTIMATOR, original_error)


class MonteCarloAbortError(IdePredictError):
    """Too many Monte Carlo runs failed for the result to be meaningful."""

    def __init__(self, message: str, n_failed: int = 0, n_runs: int = 0,
                 first_failure: Optional[int] = None,
                 original_error: Optional[Exception] = None):
        super().__init__(message, ErrorCategory.ESTIMATOR, original_error)
        self.n_failed = n_failed
        self.n_runs = n_runs
        self.first_failure = first_failure


class ConfigurationError(IdePredictError):
    """Exception for configuration-related errors."""

    def __init__(self, message: str, config_key: Optional[str] = None,
                 suggestion: Optional[str] = None,
                 original_error: Optional[Exception] = None):
        super().__init__(message, ErrorCategory.CONFIGURATION, original_error)
        self.config_key = config_key
        self.suggestion = suggestion


class ErrorCategorizer:
    """Categorizes exceptions raised inside or outside the library."""

    CONFIGURATION_EXCEPTIONS = {
        'FileNotFoundError', 'PermissionError', 'IsADirectoryError',
        'MissingSectionHeaderError', 'ParsingError', 'DuplicateOptionError',
        'DuplicateSectionError', 'JSONDecodeError',
    }

    NUMERICAL_EXCEPTIONS = {
        'FloatingPointError', 'OverflowError', 'ZeroDivisionError', 'LinAlgError',
    }

    @classmethod
    def categorize_error(cls, error: Exception) -> ErrorCategory:
        """
        Categorize an exception.

        Args:
            error: The exception to categorize

        Returns:
            ErrorCategory: The category of the error
        """
        if isinstance(error, IdePredictError):
            return error.category

        error_name = type(error).__name__
        if error_name in cls.CONFIGURATION_EXCEPTIONS:
            return ErrorCategory.CONFIGURATION
        if error_name in cls.NUMERICAL_EXCEPTIONS:
            return ErrorCategory.NUMERICAL
        if isinstance(error, ValueError):
            return ErrorCategory.DOMAIN
        return ErrorCategory.UNKNOWN


def describe_error(error: Exception, operation: str,
                   context: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Flat record of an error for structured logs."""
    return {
        'operation': operation,
        'error_type': type(error).__name__,
        'error_message': str(error),
        'error_category': ErrorCategorizer.categorize_error(error).value,
        **(context or {}),
    }


@contextmanager
def error_context(operation: str, capture_errors: bool = True,
                  reraise_as: Optional[Type[IdePredictError]] = None,
                  additional_context: Optional[Dict[str, Any]] = None):
    """
    Context manager for consistent error handling.

    Errors that already belong to the hierarchy are re-raised unchanged;
    foreign exceptions are wrapped in ``reraise_as`` when it is given.

    Args:
        operation: Description of the operation being performed
        capture_errors: Whether to log errors
        reraise_as: Exception type to wrap foreign errors in
        additional_context: Additional context to include in error logs
    """
    logger = logging.getLogger(__name__)
    try:
        logger.debug(f"Starting operation: {operation}")
        yield
        logger.debug(f"Completed operation: {operation}")
    except Exception as error:
        if capture_errors:
            logger.error(f"Error in operation '{operation}': {describe_error(error, operation, additional_context)}")

        if reraise_as and not isinstance(error, IdePredictError):
            raise reraise_as(f"Error in {operation}: {error}", original_error=error) from error
        raise


class CentralizedErrorHandler:
    """Collects error statistics across CLI commands."""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.error_stats: Dict[str, int] = {'total_errors': 0}

    def handle_error(self, error: Exception, operation: str = "Unknown",
                     context: Optional[Dict[str, Any]] = None) -> ErrorCategory:
        """
        Log an error with its category and update the statistics.

        Args:
            error: The exception that occurred
            operation: Description of the operation that failed
            context: Additional context information

        Returns:
            ErrorCategory: The category assigned to the error
        """
        category = ErrorCategorizer.categorize_error(error)
        error_info = describe_error(error, operation, context)

        self.error_stats['total_errors'] += 1
        key = f"{category.value}_errors"
        self.error_stats[key] = self.error_stats.get(key, 0) + 1

        if category in (ErrorCategory.CONFIGURATION, ErrorCategory.DOMAIN):
            self.logger.warning(f"Rejected input in {operation}: {error_info}")
        else:
            self.logger.error(f"Error in {operation}: {error_info}")
        return category

    def get_error_statistics(self) -> Dict[str, int]:
        """Get error handling statistics."""
        return self.error_stats.copy()

    def reset_statistics(self) -> None:
        """Reset error handling statistics."""
        self.error_stats = {'total_errors': 0}


# Global error handler instance
error_handler = CentralizedErrorHandler()


def handle_errors(operation: str = "Unknown",
                  context: Optional[Dict[str, Any]] = None):
    """
    Decorator that routes every escaping exception through ``error_handler``.

    Args:
        operation: Description of the operation
        context: Additional context information
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except Exception as error:
                error_handler.handle_error(error, operation, context)
                raise
        return wrapper
    return decorator
