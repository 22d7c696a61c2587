"""
Utilities package for idepredict

This package contains the cross-cutting helpers:
- error_handler: Exception hierarchy, categorization and centralized handling
- logger_utils: Structured logging with correlation IDs and context
- csv_utils: Result table CSV emission and parsing
- parallel_manager: Sharded thread-pool execution
"""

from .csv_utils import CsvUtils
from .error_handler import (
    ErrorCategory, IdePredictError, DomainError, ContractError, NotPSDError,
    SingularInformationError, DegenerateCurvatureError, ConvergenceError,
    UndefinedEstimateError, MonteCarloAbortError, ConfigurationError,
    ErrorCategorizer, error_context, CentralizedErrorHandler, error_handler,
    handle_errors
)
from .logger_utils import (
    StructuredLogger, JsonFormatter, ContextFilter, log_context,
    correlation_id, log_performance, configure_logging, get_logger
)
from .parallel_manager import (
    ShardPlan, ParallelShardExecutor, ParallelExecutionMetrics, default_worker_count
)

__all__ = [
    'CsvUtils',
    # Error handling components
    'ErrorCategory',
    'IdePredictError',
    'DomainError',
    'ContractError',
    'NotPSDError',
    'SingularInformationError',
    'DegenerateCurvatureError',
    'ConvergenceError',
    'UndefinedEstimateError',
    'MonteCarloAbortError',
    'ConfigurationError',
    'ErrorCategorizer',
    'error_context',
    'CentralizedErrorHandler',
    'error_handler',
    'handle_errors',
    # Logging components
    'StructuredLogger',
    'JsonFormatter',
    'ContextFilter',
    'log_context',
    'correlation_id',
    'log_performance',
    'configure_logging',
    'get_logger',
    # Parallel execution
    'ShardPlan',
    'ParallelShardExecutor',
    'ParallelExecutionMetrics',
    'default_worker_count',
]
