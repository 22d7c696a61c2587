"""
Behave hooks for the acceptance features.

Each scenario gets its own scratch directory for scenario files and CSV
output; it is removed afterwards unless the scenario failed.
"""

import logging
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from idepredict.utilities import configure_logging  # noqa: E402


def before_all(context):
    level = context.config.logging_level or logging.WARNING
    configure_logging(level=level)
    context.logger = logging.getLogger("features")


def before_scenario(context, scenario):
    context.workdir = Path(tempfile.mkdtemp(prefix="idepredict-"))
    context.exit_code = None
    context.stdout = ""
    context.stderr = ""
    context.rows = []


def after_scenario(context, scenario):
    configure_logging()
    if scenario.status == "failed":
        context.logger.warning(f"kept {context.workdir} for failed scenario {scenario.name!r}")
        return
    shutil.rmtree(context.workdir, ignore_errors=True)
