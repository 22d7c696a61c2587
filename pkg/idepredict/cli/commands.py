"""Subcommand implementations: validation, prediction, bounds, Monte Carlo, sweeps."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..utilities.csv_utils import CsvUtils
from ..utilities.error_handler import ConfigurationError, DomainError, error_context
from ..utilities.logger_utils import log_context
from .config import ScenarioConfig
from .scenarios import SCENARIOS, build_scenario

COLUMN_ORDER = (
    "snr_db", "mse_pred", "mse_pred_stderr", "mse_pred_known", "mse_pred_ml",
    "crlb", "mcrlb", "hcrb", "zzb", "bcrlb",
    "mc_mse", "mc_stderr", "mc_mse_ml", "mc_stderr_ml", "n_runs",
    "rmse_deg_pred", "rmse_deg_mc",
)
COMMANDS = ("predict", "bounds", "montecarlo", "sweep")


@dataclass
class SweepRow:
    """One SNR row of a result table."""
    snr_db: float
    values: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name, value in self.values.items():
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(f"column {name} at {self.snr_db} dB is {value}",
                                  parameter=name, value=value)

    def as_dict(self) -> Dict[str, float]:
        return {"snr_db": self.snr_db, **self.values}


def ordered_columns(rows: List[SweepRow]) -> List[str]:
    present = set()
    for row in rows:
        present.update(row.as_dict())
    return [name for name in COLUMN_ORDER if name in present]


class CommandRunner:
    """Runs one subcommand over every SNR of a scenario."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.logger = logging.getLogger(self.__class__.__name__)
        with error_context(f"building scenario {config.kind}", reraise_as=ConfigurationError):
            self.scenario = build_scenario(config)
        self.csv = CsvUtils()

    def _seed(self) -> int:
        seed = self.config.montecarlo["seed"]
        if seed is None:
            raise ConfigurationError("Monte Carlo needs montecarlo.seed or --seed",
                                     config_key="montecarlo.seed")
        return int(seed)

    def row(self, command: str, snr_db: float) -> SweepRow:
        outputs = self.config.outputs
        values: Dict[str, float] = {}
        if command == "predict" or (command == "sweep" and "prediction" in outputs):
            values.update(self.scenario.predict(snr_db))
        if command in ("bounds", "sweep"):
            values.update(self.scenario.bounds(snr_db, self.config.bound_outputs()))
        if command == "montecarlo" or (command == "sweep" and "montecarlo" in outputs):
            mc = self.config.montecarlo
            values.update(self.scenario.montecarlo(snr_db, mc["n_runs"], self._seed(),
                                                   mc["threads"]))
        if self.scenario.angular:
            if "mse_pred" in values:
                values["rmse_deg_pred"] = math.degrees(math.sqrt(values["mse_pred"]))
            if "mc_mse" in values:
                values["rmse_deg_mc"] = math.degrees(math.sqrt(values["mc_mse"]))
        return SweepRow(snr_db, values)

    def run(self, command: str) -> List[SweepRow]:
        """
        Compute the rows of a subcommand, sorted by SNR.

        Raises:
            ConfigurationError: nothing to compute, or a Monte Carlo run without seed
        """
        if command not in COMMANDS:
            raise ConfigurationError(f"unknown command {command!r}")
        if command == "bounds" and not self.config.bound_outputs():
            raise ConfigurationError("no bounds requested in scenario.outputs",
                                     config_key="scenario.outputs")
        if command in ("montecarlo", "sweep"):
            if command == "montecarlo" or "montecarlo" in self.config.outputs:
                self._seed()
        rows = []
        for snr_db in self.config.snr_db:
            with log_context(scenario=self.config.kind, snr_db=snr_db, command=command):
                row = self.row(command, snr_db)
                self.logger.info(f"{command} {self.config.kind} at {snr_db:g} dB: "
                                 + ", ".join(f"{k}={v:.4e}" for k, v in row.values.items()))
            rows.append(row)
        if command == "sweep":
            self._log_threshold(rows)
        return rows

    def _log_threshold(self, rows: List[SweepRow]) -> None:
        for column in ("mse_pred", "mc_mse"):
            hit = next((row.snr_db for row in rows
                        if column in row.values and "crlb" in row.values
                        and row.values[column] <= 2.0 * row.values["crlb"]), None)
            if hit is not None:
                self.logger.info(f"threshold_snr_db({column})={hit:g}")

    def emit(self, rows: List[SweepRow]) -> str:
        return self.csv.emit([row.as_dict() for row in rows], ordered_columns(rows))

    def write(self, rows: List[SweepRow], out: Optional[str]) -> str:
        """Write the CSV to ``out`` when given; the text is returned either way."""
        if out:
            return self.csv.write_csv_file([row.as_dict() for row in rows], out,
                                           ordered_columns(rows))
        return self.emit(rows)


def cmd_validate(config: ScenarioConfig) -> str:
    """Check that the scenario can be built and return the resolved YAML."""
    CommandRunner(config)
    return config.to_yaml()


def cmd_table(config: ScenarioConfig, command: str, out: Optional[str] = None) -> str:
    runner = CommandRunner(config)
    return runner.write(runner.run(command), out)


def cmd_predict(config: ScenarioConfig, out: Optional[str] = None) -> str:
    return cmd_table(config, "predict", out)


def cmd_bounds(config: ScenarioConfig, out: Optional[str] = None) -> str:
    return cmd_table(config, "bounds", out)


def cmd_montecarlo(config: ScenarioConfig, out: Optional[str] = None) -> str:
    return cmd_table(config, "montecarlo", out)


def cmd_sweep(config: ScenarioConfig, out: Optional[str] = None) -> str:
    return cmd_table(config, "sweep", out)


def cmd_list_scenarios() -> str:
    width = max(len(kind) for kind in SCENARIOS)
    return "".join(f"{kind:<{width}}  {cls.description}\n" for kind, cls in SCENARIOS.items())
