import json
import logging
import threading
import time

import pytest

from idepredict.utilities import (
    CentralizedErrorHandler, ConfigurationError, ConvergenceError, CsvUtils, DomainError,
    ErrorCategorizer, ErrorCategory, JsonFormatter, MonteCarloAbortError, ParallelShardExecutor,
    ShardPlan, correlation_id, error_context, error_handler, handle_errors, log_context,
    log_performance
)
from idepredict.utilities.logger_utils import ContextFilter, correlation_context


class TestCsvUtils:

    def test_number_and_integer_formats(self):
        text = CsvUtils().emit([{"snr_db": -5, "mse_pred": 6.417e-4, "n_runs": 1000}])
        assert text == "snr_db,mse_pred,n_runs\n-5.0000000000e+00,6.4170000000e-04,1000\n"

    def test_column_order(self):
        text = CsvUtils().emit([{"a": 1.0, "b": 2.0}], columns=["b", "a"])
        assert text.splitlines()[0] == "b,a"

    def test_file_round_trip(self, tmp_path):
        utils = CsvUtils()
        rows = [{"snr_db": 0.0, "crlb": 4.0322580645e-04, "n_runs": 10},
                {"snr_db": 5.0, "crlb": 1.2751e-04, "n_runs": 10}]
        path = tmp_path / "nested" / "table.csv"
        written = utils.write_csv_file(rows, str(path))
        assert path.read_bytes() == written.encode("utf-8")
        assert b"\r\n" not in path.read_bytes()
        parsed = utils.read_csv_file(str(path))
        assert parsed[1]["n_runs"] == 10
        assert parsed[0]["crlb"] == pytest.approx(4.0322580645e-04, rel=1e-10)


class TestShardPlan:

    def test_blocks_cover_items(self):
        plan = ShardPlan(600, 256)
        assert plan.n_blocks == 3
        assert plan.blocks() == [(0, 0, 256), (1, 256, 512), (2, 512, 600)]

    def test_empty_plan(self):
        assert ShardPlan(0).blocks() == []

    @pytest.mark.parametrize("n_items, block_size", [(-1, 10), (10, 0)])
    def test_rejects_bad_plans(self, n_items, block_size):
        with pytest.raises(ValueError):
            ShardPlan(n_items, block_size)


class TestParallelShardExecutor:

    def test_results_in_block_order(self):
        def work(block, start, stop):
            time.sleep(0.001 * (5 - block % 5))
            return (block, stop - start)

        executor = ParallelShardExecutor(4)
        results = executor.map_blocks(ShardPlan(1000, 100), work)
        assert [r[0] for r in results] == list(range(10))
        assert sum(r[1] for r in results) == 1000
        assert executor.last_metrics.completed_blocks == 10
        assert executor.last_metrics.worker_count == 4

    def test_uses_several_threads(self):
        names = set()
        lock = threading.Lock()

        def work(block, start, stop):
            with lock:
                names.add(threading.current_thread().name)
            time.sleep(0.01)

        ParallelShardExecutor(3).map_blocks(ShardPlan(6, 1), work, "threads")
        assert len(names) > 1

    def test_single_worker_runs_inline(self):
        results = ParallelShardExecutor(1).map_blocks(
            ShardPlan(3, 1), lambda b, s, e: threading.current_thread().name)
        assert set(results) == {threading.current_thread().name}

    def test_rejects_zero_workers(self):
        with pytest.raises(ValueError):
            ParallelShardExecutor(0)


class TestErrors:

    @pytest.mark.parametrize("error, category, code", [
        (ConfigurationError("bad key"), ErrorCategory.CONFIGURATION, 2),
        (ConvergenceError("budget"), ErrorCategory.CONVERGENCE, 3),
        (DomainError("sigma2"), ErrorCategory.DOMAIN, 1),
        (MonteCarloAbortError("runs"), ErrorCategory.ESTIMATOR, 1),
        (FileNotFoundError("x.ini"), ErrorCategory.CONFIGURATION, 2),
        (ZeroDivisionError(), ErrorCategory.NUMERICAL, 1),
        (ValueError("x"), ErrorCategory.DOMAIN, 1),
        (RuntimeError("x"), ErrorCategory.UNKNOWN, 1),
    ])
    def test_categories_and_exit_codes(self, error, category, code):
        assert ErrorCategorizer.categorize_error(error) is category
        assert category.exit_code == code

    def test_domain_error_is_value_error(self):
        assert isinstance(DomainError("x"), ValueError)

    def test_error_context_wraps_foreign_errors(self):
        with pytest.raises(ConfigurationError) as info:
            with error_context("parse", reraise_as=ConfigurationError):
                int("abc")
        assert isinstance(info.value.original_error, ValueError)

    def test_error_context_keeps_own_errors(self):
        with pytest.raises(DomainError):
            with error_context("parse", reraise_as=ConfigurationError):
                raise DomainError("negative")

    def test_centralized_handler_counts(self):
        handler = CentralizedErrorHandler()
        handler.handle_error(DomainError("a"), "predict")
        handler.handle_error(ConvergenceError("b"), "predict")
        handler.handle_error(DomainError("c"), "bounds")
        stats = handler.get_error_statistics()
        assert stats == {"total_errors": 3, "domain_errors": 2, "convergence_errors": 1}
        handler.reset_statistics()
        assert handler.get_error_statistics() == {"total_errors": 0}

    def test_handle_errors_reraises(self, mocker):
        recorded = mocker.patch.object(error_handler, "handle_error")

        @handle_errors("cli")
        def failing():
            raise ConfigurationError("missing section")

        with pytest.raises(ConfigurationError):
            failing()
        recorded.assert_called_once()
        assert recorded.call_args.args[1] == "cli"


class TestLogging:

    def _record(self, message="row done"):
        return logging.LogRecord("idepredict", logging.INFO, __file__, 1, message, None, None)

    def test_context_filter_adds_scenario_fields(self):
        record = self._record()
        with correlation_id("abc-123"), log_context(scenario="frequency", snr_db=5.0):
            ContextFilter().filter(record)
        assert record.correlation_id == "abc-123"
        assert record.scenario == "frequency"
        assert record.snr_db == 5.0
        assert correlation_context.get_context("scenario") is None
        assert correlation_context.get_correlation_id() is None

    def test_json_formatter(self):
        with correlation_id("run-1"), log_context(command="sweep"):
            payload = json.loads(JsonFormatter().format(self._record("threshold found")))
        assert payload["message"] == "threshold found"
        assert payload["level"] == "INFO"
        assert payload["correlation_id"] == "run-1"
        assert payload["context"] == {"command": "sweep"}

    def test_log_performance(self, mocker):
        logger = mocker.Mock()

        @log_performance(logger)
        def command():
            return "done"

        assert command() == "done"
        logger.debug.assert_called_once()
        assert logger.info.call_args.kwargs["status"] == "success"

    def test_log_performance_reports_failure(self, mocker):
        logger = mocker.Mock()

        @log_performance(logger)
        def command():
            raise DomainError("bad")

        with pytest.raises(DomainError):
            command()
        assert logger.error.call_args.kwargs["status"] == "error"
