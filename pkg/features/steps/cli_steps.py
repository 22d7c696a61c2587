"""Steps that drive the command-line entry point in-process."""

import io
import shlex
from contextlib import redirect_stderr, redirect_stdout

from behave import given, then, when

from idepredict.cli import main
from idepredict.utilities import CsvUtils


@given('a scenario file containing')
def step_scenario_file(context):
    context.scenario_file = context.workdir / "scenario.ini"
    context.scenario_file.write_text(context.text + "\n", encoding="utf-8")


@when('I run idepredict with "{arguments}"')
def step_run_cli(context, arguments):
    arguments = (arguments.replace("{file}", str(getattr(context, "scenario_file", "")))
                 .replace("{dir}", str(context.workdir)))
    stdout, stderr = io.StringIO(), io.StringIO()
    with redirect_stdout(stdout), redirect_stderr(stderr):
        context.exit_code = main(shlex.split(arguments))
    context.stdout, context.stderr = stdout.getvalue(), stderr.getvalue()


@then('the exit code is {code:d}')
def step_exit_code(context, code):
    assert context.exit_code == code, \
        f"exit code {context.exit_code}, expected {code}; stderr:\n{context.stderr}"


@then('the output mentions "{text}"')
def step_output_mentions(context, text):
    assert text in context.stdout, f"{text!r} not in output:\n{context.stdout}"


@then('the error mentions "{text}"')
def step_error_mentions(context, text):
    assert text in context.stderr, f"{text!r} not in stderr:\n{context.stderr}"


@then('the file "{name}" has the header "{header}"')
def step_file_header(context, name, header):
    first = (context.workdir / name).read_text(encoding="utf-8").splitlines()[0]
    assert first == header, f"header is {first!r}"


@then('the file "{name}" has rows for SNR {values}')
def step_file_rows(context, name, values):
    expected = [float(v) for v in values.split(",")]
    rows = CsvUtils().read_csv_file(str(context.workdir / name))
    assert [row["snr_db"] for row in rows] == expected


@then('the files "{first}" and "{second}" are identical')
def step_identical(context, first, second):
    a = (context.workdir / first).read_bytes()
    b = (context.workdir / second).read_bytes()
    assert a == b, f"{first} and {second} differ"
