"""Steps that build a scenario in memory and check the result table."""

import json

import numpy as np
from behave import given, then, when

from idepredict.cli.commands import cmd_table
from idepredict.cli.config import KIND_OUTPUTS, ConfigLoader
from idepredict.utilities import CsvUtils


def _document(context, outputs):
    lines = ["[scenario]", f"kind = {json.dumps(context.kind)}",
             f"{context.noise_key} = {json.dumps(context.noise_values)}",
             f"outputs = {json.dumps(outputs)}"]
    mc = getattr(context, "montecarlo", None)
    if mc:
        lines += ["[montecarlo]"] + [f"{key} = {json.dumps(value)}" for key, value in mc.items()]
    return "\n".join(lines) + "\n"


def _run(context, command, outputs):
    config = ConfigLoader().loads(_document(context, outputs), source=f"feature:{context.kind}")
    context.rows = CsvUtils().parse(cmd_table(config, command))


def _column(context, name):
    """Values of one column, one per SNR row."""
    assert context.rows, "no result rows"
    assert name in context.rows[0], f"column {name} missing from {sorted(context.rows[0])}"
    return [row[name] for row in context.rows]


def _pairs(context, first, second):
    return zip(_column(context, "snr_db"), _column(context, first), _column(context, second))


@given('a "{kind}" scenario with noise variance {sigma2:g}')
def step_scenario_sigma2(context, kind, sigma2):
    context.kind = kind
    context.noise_key, context.noise_values = "sigma2", [sigma2]


@given('a "{kind}" scenario at {snr_db:g} dB')
@given('an "{kind}" scenario at {snr_db:g} dB')
def step_scenario_snr(context, kind, snr_db):
    context.kind = kind
    context.noise_key, context.noise_values = "snr_db", [snr_db]


@given('a "{kind}" scenario swept from {low:g} to {high:g} dB in {step:g} dB steps')
def step_scenario_sweep(context, kind, low, high, step):
    context.kind = kind
    count = int(round((high - low) / step)) + 1
    context.noise_key = "snr_db"
    context.noise_values = [float(v) for v in np.linspace(low, high, count)]


@given('the Monte Carlo seed {seed:d} with {runs:d} runs')
def step_montecarlo(context, seed, runs):
    context.montecarlo = {"seed": seed, "n_runs": runs, "threads": 4}


@when('I predict the MSE')
def step_predict(context):
    supported = KIND_OUTPUTS[context.kind]["supported"]
    outputs = ["prediction"] + (["crlb"] if "crlb" in supported else [])
    _run(context, "sweep", outputs)


@when('I run the "{command}" command')
def step_command(context, command):
    _run(context, command, list(KIND_OUTPUTS[context.kind]["supported"]))


@when('I run the "{command}" command without Monte Carlo')
def step_command_without_mc(context, command):
    outputs = [name for name in KIND_OUTPUTS[context.kind]["supported"] if name != "montecarlo"]
    _run(context, command, outputs)


@then('the predicted MSE is {value:g} within {percent:g} percent')
def step_predicted_value(context, value, percent):
    for predicted in _column(context, "mse_pred"):
        assert abs(predicted - value) <= percent / 100.0 * abs(value), \
            f"predicted {predicted:.6e}, expected {value:.6e} within {percent}%"


@then('the predicted MSE is above the CRLB')
def step_above_crlb(context):
    for snr, predicted, crlb in _pairs(context, "mse_pred", "crlb"):
        assert predicted > crlb, f"{snr}: predicted {predicted:.6e} is not above CRLB {crlb:.6e}"


@then('the column "{first}" is at least the column "{second}"')
@then('the column "{first}" is at least the column "{second}" at every SNR')
def step_at_least(context, first, second):
    for snr, a, b in _pairs(context, first, second):
        assert a >= b * (1 - 1e-4), f"{snr}: {first}={a:.6e} < {second}={b:.6e}"


@then('the column "{first}" is at most the column "{second}"')
@then('the column "{first}" is at most the column "{second}" at every SNR')
def step_at_most(context, first, second):
    for snr, a, b in _pairs(context, first, second):
        assert a <= b * (1 + 1e-4), f"{snr}: {first}={a:.6e} > {second}={b:.6e}"


@then('the column "{first}" is within {percent:g} percent of the column "{second}"')
def step_within(context, first, second, percent):
    for snr, a, b in _pairs(context, first, second):
        assert abs(a - b) <= percent / 100.0 * abs(b), \
            f"{snr}: {first}={a:.6e} and {second}={b:.6e} differ by more than {percent}%"


@then('the column "{first}" exceeds the column "{second}" by at least {percent:g} percent at some SNR')
def step_exceeds_somewhere(context, first, second, percent):
    gaps = [(a - b) / abs(b) for _, a, b in _pairs(context, first, second)]
    assert max(gaps) >= percent / 100.0, \
        f"largest relative gap of {first} over {second} is {max(gaps):.3%}"
