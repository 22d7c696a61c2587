"""Structured logging utilities.

This module provides:
- Structured logging with JSON formatting
- Correlation IDs that tie every record of one CLI invocation together
- Context injection (scenario kind, SNR row, command) through a logging filter
- Performance logging decorator for commands
"""

import json
import logging
import sys
import threading
import time
import uuid
from contextlib import contextmanager
from datetime import datetime
from enum import Enum
from functools import wraps
from typing import Any, Dict, Optional


class LogLevel(Enum):
    """Levels accepted by ``--log-level``."""
    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARNING = logging.WARNING
    ERROR = logging.ERROR
    CRITICAL = logging.CRITICAL


class RunContext:
    """Thread-local correlation id and row context of the running command."""

    def __init__(self):
        self._local = threading.local()

    def _values(self) -> Dict[str, Any]:
        if not hasattr(self._local, 'values'):
            self._local.values = {}
        return self._local.values

    def get_correlation_id(self) -> Optional[str]:
        return getattr(self._local, 'correlation_id', None)

    def set_correlation_id(self, value: Optional[str]):
        if value is None:
            self._local.__dict__.pop('correlation_id', None)
        else:
            self._local.correlation_id = value

    def get_context(self, key: Optional[str] = None):
        """Return one context value, or a copy of all of them when ``key`` is None."""
        values = self._values()
        return dict(values) if key is None else values.get(key)

    def push(self, **values) -> Dict[str, Any]:
        """Set context values and return the ones they replaced."""
        current = self._values()
        previous = {key: current.get(key) for key in values}
        self.restore(values)
        return previous

    def restore(self, values: Dict[str, Any]):
        current = self._values()
        for key, value in values.items():
            if value is None:
                current.pop(key, None)
            else:
                current[key] = value


correlation_context = RunContext()

# attributes every LogRecord carries; anything else came in through extra=
_RECORD_ATTRS = frozenset(vars(logging.LogRecord('', 0, '', 0, '', None, None))) | {'message', 'asctime'}


class JsonFormatter(logging.Formatter):
    """One JSON object per record, with correlation id and row context."""

    def __init__(self, include_context: bool = True):
        super().__init__()
        self.include_context = include_context

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            'time': datetime.fromtimestamp(record.created).isoformat(timespec='milliseconds'),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'thread': record.threadName,
        }
        run_id = correlation_context.get_correlation_id()
        if run_id:
            payload['correlation_id'] = run_id
        if self.include_context:
            context = correlation_context.get_context()
            if context:
                payload['context'] = context
        if record.exc_info and record.exc_info[0] is not None:
            payload['exception'] = {
                'type': record.exc_info[0].__name__,
                'message': str(record.exc_info[1]),
                'traceback': self.formatException(record.exc_info),
            }
        extra = {key: value for key, value in vars(record).items()
                 if key not in _RECORD_ATTRS and key not in payload and not key.startswith('_')}
        if extra:
            payload['extra'] = extra
        return json.dumps(payload, default=str, ensure_ascii=False)


class ContextFilter(logging.Filter):
    """Copy the correlation id and the row context onto each record."""

    CONTEXT_KEYS = ('scenario', 'snr_db', 'command')

    def filter(self, record: logging.LogRecord) -> bool:
        run_id = correlation_context.get_correlation_id()
        if run_id:
            record.correlation_id = run_id
        for key in self.CONTEXT_KEYS:
            value = correlation_context.get_context(key)
            if value is not None and not hasattr(record, key):
                setattr(record, key, value)
        return True


class StructuredLogger:
    """
    Logger wrapper whose level methods take keyword context

    Records go to stderr only; stdout is reserved for result tables.
    """

    def __init__(self, name: str, level: int = logging.WARNING,
                 use_json_formatter: bool = False, enable_correlation: bool = True):
        self.logger = logging.getLogger(name)
        self.logger.setLevel(level)
        self.logger.propagate = False
        self.close()

        handler = logging.StreamHandler(sys.stderr)
        if use_json_formatter:
            handler.setFormatter(JsonFormatter(include_context=enable_correlation))
        else:
            handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
        if enable_correlation:
            handler.addFilter(ContextFilter())
        self.logger.addHandler(handler)

    def debug(self, message: str, **context):
        self.logger.debug(message, extra=context)

    def info(self, message: str, **context):
        self.logger.info(message, extra=context)

    def warning(self, message: str, **context):
        self.logger.warning(message, extra=context)

    def error(self, message: str, exception: Optional[BaseException] = None, **context):
        if exception is not None:
            context.update(exception_type=type(exception).__name__, exception_message=str(exception))
        self.logger.error(message, exc_info=exception, extra=context)

    def close(self):
        """Detach and close all handlers."""
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()


@contextmanager
def log_context(**values):
    """Attach row context (scenario, snr_db, command) to records logged inside the block."""
    previous = correlation_context.push(**values)
    try:
        yield
    finally:
        correlation_context.restore(previous)


@contextmanager
def correlation_id(value: Optional[str] = None):
    """Tag every record logged inside the block with one run id."""
    value = value or uuid.uuid4().hex[:12]
    previous = correlation_context.get_correlation_id()
    correlation_context.set_correlation_id(value)
    try:
        yield value
    finally:
        correlation_context.set_correlation_id(previous)


def log_performance(logger: StructuredLogger):
    """Decorator that logs start, wall time and outcome of a command."""
    def decorator(func):
        name = f"{func.__module__}.{func.__qualname__}"

        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            logger.debug(f"Starting {name}", method=name)
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                logger.error(f"Failed {name}", exception=e, method=name, status="error",
                             elapsed_s=round(time.perf_counter() - start, 6))
                raise
            logger.info(f"Completed {name}", method=name, status="success",
                        elapsed_s=round(time.perf_counter() - start, 6))
            return result
        return wrapper
    return decorator


_loggers: Dict[str, StructuredLogger] = {}
_settings: Dict[str, Any] = {
    'level': logging.WARNING,
    'use_json_formatter': False,
    'enable_correlation': True,
}


def configure_logging(**settings):
    """Update logger settings and close every cached logger so it is rebuilt with them."""
    _settings.update(settings)
    for name in list(_loggers):
        _loggers.pop(name).close()


def get_logger(name: str, **overrides) -> StructuredLogger:
    """Return the cached StructuredLogger for ``name``, creating it on first use."""
    if name not in _loggers:
        _loggers[name] = StructuredLogger(name, **{**_settings, **overrides})
    return _loggers[name]
