"""
Command-line front end

- config: Scenario file loading, schema validation and defaults
- scenarios: One runner class per scenario kind
- commands: Subcommand implementations and the result table
- main: Argument parsing, logging setup and exit codes
"""

from .config import ScenarioConfig, ConfigLoader, load_config, KINDS
from .scenarios import BaseScenario, SCENARIOS, build_scenario
from .commands import (
    SweepRow, CommandRunner, cmd_validate, cmd_predict, cmd_bounds,
    cmd_montecarlo, cmd_sweep, cmd_list_scenarios
)
from .main import main

__all__ = [
    'ScenarioConfig',
    'ConfigLoader',
    'load_config',
    'KINDS',
    'BaseScenario',
    'SCENARIOS',
    'build_scenario',
    'SweepRow',
    'CommandRunner',
    'cmd_validate',
    'cmd_predict',
    'cmd_bounds',
    'cmd_montecarlo',
    'cmd_sweep',
    'cmd_list_scenarios',
    'main',
]
