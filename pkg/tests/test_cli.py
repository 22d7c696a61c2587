import math
import textwrap

import pytest
import yaml

from idepredict.cli import (
    ConfigLoader, cmd_bounds, cmd_list_scenarios, cmd_montecarlo, cmd_predict, cmd_sweep,
    cmd_validate, load_config, main
)
from idepredict.cli.commands import COLUMN_ORDER, SweepRow, ordered_columns
from idepredict.cli.config import KINDS
from idepredict.cli.main import TABLE_COMMANDS
from idepredict.utilities import ConfigurationError, ConvergenceError, CsvUtils, DomainError

csv = CsvUtils()


def _config(text, **overrides):
    return ConfigLoader().loads(textwrap.dedent(text)).with_overrides(**overrides)


FREQUENCY_MC = """
    [scenario]
    kind = "frequency"
    snr_db = [10, -5]
    outputs = ["prediction", "crlb", "montecarlo"]

    [grid]
    ml_points = 360

    [montecarlo]
    n_runs = 600
    seed = 5
"""


class TestConfig:

    @pytest.mark.parametrize("kind", KINDS)
    def test_builtin_scenarios_validate(self, kind):
        config = load_config(f"builtin:{kind}")
        assert config.kind == kind
        resolved = yaml.safe_load(cmd_validate(config))
        assert resolved["scenario"]["kind"] == kind
        assert resolved["scenario"]["snr_db"] == sorted(resolved["scenario"]["snr_db"])

    def test_misspelled_key_names_nearest(self):
        with pytest.raises(ConfigurationError) as info:
            _config("""
                [scenario]
                kind = "custom"
                sigm2 = [1.0]
            """)
        assert info.value.suggestion == "sigma2"
        assert "sigma2" in str(info.value)

    def test_unknown_section(self):
        with pytest.raises(ConfigurationError) as info:
            _config("""
                [scenario]
                kind = "frequency"
                snr_db = [0]
                [montecarl]
                seed = 1
            """)
        assert info.value.suggestion == "montecarlo"

    @pytest.mark.parametrize("scenario", [
        'snr_db = []',
        'snr_db = [0]\nsigma2 = [1.0]',
        'outputs = ["prediction"]',
        'sigma2 = [0.0]',
        'snr_db = [0]\noutputs = ["zzb"]',
        'snr_db = "loud"',
    ])
    def test_rejects_bad_scenario_section(self, scenario):
        text = '[scenario]\nkind = "frequency"\n' + scenario + "\n"
        with pytest.raises(ConfigurationError):
            ConfigLoader().loads(text)

    def test_model_key_of_other_kind(self):
        with pytest.raises(ConfigurationError) as info:
            _config("""
                [scenario]
                kind = "frequency"
                snr_db = [0]
                [model]
                radius = 2.0
            """)
        assert info.value.config_key == "model.radius"

    def test_unparseable_literal(self):
        with pytest.raises(ConfigurationError):
            ConfigLoader().loads('[scenario]\nkind = frequency\nsnr_db = [0]\n')

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_config(str(tmp_path / "absent.ini"))

    def test_sigma2_becomes_snr(self):
        config = _config("""
            [scenario]
            kind = "frequency"
            sigma2 = [1.0, 0.1]
            [model]
            amplitude = 2.0
        """)
        assert config.snr_db == pytest.approx([10 * math.log10(4.0), 10 * math.log10(40.0)])

    def test_overrides(self):
        config = _config(FREQUENCY_MC, seed=9, runs=50, threads=3, tol_rel=1e-7)
        assert config.montecarlo == {"n_runs": 50, "seed": 9, "threads": 3}
        assert config.tolerances().rel_tol == 1e-7
        with pytest.raises(ConfigurationError):
            config.with_overrides(runs=1)


class TestCommands:

    def test_frequency_example(self):
        config = _config("""
            [scenario]
            kind = "frequency"
            sigma2 = [1.0]
            outputs = ["prediction", "crlb"]
        """)
        row = csv.parse(cmd_sweep(config))[0]
        assert row["mse_pred"] == pytest.approx(6.417e-4, rel=0.01)
        assert row["crlb"] == pytest.approx(1 / 2480, rel=1e-3)
        assert "rmse_deg_pred" not in row

    def test_custom_identity_gives_half_noise(self):
        rows = csv.parse(cmd_predict(load_config("builtin:custom")))
        assert [r["snr_db"] for r in rows] == sorted(r["snr_db"] for r in rows)
        for row in rows:
            sigma2 = 10.0 ** (-row["snr_db"] / 10.0)
            assert row["mse_pred"] == pytest.approx(sigma2 / 2, rel=1e-4)

    def test_bounds_only_has_bound_columns(self):
        text = cmd_bounds(load_config("builtin:custom"))
        assert text.splitlines()[0] == "snr_db,crlb"

    def test_bounds_need_a_requested_bound(self):
        config = _config("""
            [scenario]
            kind = "custom"
            sigma2 = [1.0]
            outputs = ["prediction"]
        """)
        with pytest.raises(ConfigurationError):
            cmd_bounds(config)

    def test_montecarlo_needs_seed(self):
        with pytest.raises(ConfigurationError):
            cmd_montecarlo(load_config("builtin:custom"))

    def test_montecarlo_independent_of_threads(self):
        single = cmd_montecarlo(_config(FREQUENCY_MC, threads=1))
        pooled = cmd_montecarlo(_config(FREQUENCY_MC, threads=8))
        assert single == pooled
        assert single.splitlines()[0] == "snr_db,mc_mse,mc_stderr,n_runs"

    def test_sweep_columns_in_order(self, tmp_path):
        out = tmp_path / "sweep.csv"
        text = cmd_sweep(_config(FREQUENCY_MC), str(out))
        assert out.read_text(encoding="utf-8") == text
        header = text.splitlines()[0].split(",")
        assert header == ["snr_db", "mse_pred", "crlb", "mc_mse", "mc_stderr", "n_runs"]
        rows = csv.read_csv_file(str(out))
        assert [r["snr_db"] for r in rows] == [-5.0, 10.0]
        assert all(r["n_runs"] == 600 for r in rows)

    def test_angular_scenarios_report_degrees(self):
        config = _config("""
            [scenario]
            kind = "esprit-ula"
            snr_db = [20]
            outputs = ["prediction"]
        """)
        row = csv.parse(cmd_predict(config))[0]
        assert row["rmse_deg_pred"] == pytest.approx(math.degrees(math.sqrt(row["mse_pred"])))

    def test_list_scenarios(self):
        lines = cmd_list_scenarios().splitlines()
        assert [line.split()[0] for line in lines] == list(KINDS)


class TestRows:

    def test_rejects_negative_values(self):
        with pytest.raises(DomainError):
            SweepRow(0.0, {"mse_pred": -1.0})
        with pytest.raises(DomainError):
            SweepRow(0.0, {"crlb": math.nan})

    def test_ordered_columns(self):
        rows = [SweepRow(0.0, {"n_runs": 10, "crlb": 1.0, "mse_pred": 2.0})]
        assert ordered_columns(rows) == ["snr_db", "mse_pred", "crlb", "n_runs"]
        assert set(ordered_columns(rows)) <= set(COLUMN_ORDER)


class TestMain:

    def test_validate(self, capsys):
        assert main(["validate", "--config", "builtin:frequency"]) == 0
        assert yaml.safe_load(capsys.readouterr().out)["model"]["n_sensors"] == 16

    def test_configuration_error_exit_code(self, capsys, tmp_path):
        assert main(["predict", "--config", str(tmp_path / "absent.ini")]) == 2
        assert capsys.readouterr().err.splitlines()[-1].startswith("error:")

    def test_missing_seed_exit_code(self):
        assert main(["montecarlo", "--config", "builtin:custom"]) == 2

    def test_convergence_exit_code(self, mocker):
        def failing(config, out=None):
            raise ConvergenceError("budget exhausted")
        mocker.patch.dict(TABLE_COMMANDS, {"predict": (failing, "")})
        assert main(["predict", "--config", "builtin:custom"]) == 3

    def test_overrides_reach_the_command(self, mocker):
        command = mocker.Mock(return_value="snr_db\n")
        mocker.patch.dict(TABLE_COMMANDS, {"sweep": (command, "")})
        assert main(["sweep", "--config", "builtin:frequency", "--seed", "9", "--runs", "50",
                     "--threads", "2", "--tol-abs", "1e-9"]) == 0
        config, out = command.call_args.args
        assert config.montecarlo == {"n_runs": 50, "seed": 9, "threads": 2}
        assert config.prediction["abs_tol"] == 1e-9
        assert out is None

    def test_out_file_keeps_stdout_empty(self, capsys, tmp_path):
        out = tmp_path / "custom.csv"
        assert main(["predict", "--config", "builtin:custom", "--out", str(out)]) == 0
        assert capsys.readouterr().out == ""
        assert out.read_text(encoding="utf-8").startswith("snr_db,mse_pred\n")

    @pytest.mark.parametrize("seed", ["-1", str(2 ** 64)])
    def test_seed_must_be_u64(self, seed):
        with pytest.raises(SystemExit) as info:
            main(["montecarlo", "--config", "builtin:frequency", "--seed", seed])
        assert info.value.code == 2

    def test_list_scenarios(self, capsys):
        assert main(["list-scenarios"]) == 0
        assert "bayesian-ula" in capsys.readouterr().out
