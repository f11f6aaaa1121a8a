"""Tests for the config front end, file formats, and experiment runner.

Oracles: the config grammar is small enough to enumerate violations by
hand with their line numbers; CSV output at 17 significant digits must
round-trip float64 bit-exactly; and runs are deterministic, so byte
comparison across repeated and parallel runs is the ground truth for
the output contract.
"""

import json

import numpy as np
import pytest

from fastslow import IntegratorConfig, Trajectory
from fastslow.cli import (ConfigError, ExperimentConfig, emit_csv, emit_json,
                          load_config, main, parse_config, read_csv,
                          run_experiment, serialize_config,
                          shipped_config_text)
from fastslow.lie_poisson import EulerSystem, integrate_euler, so3

SO3_FILE_TEXT = "dim 3\n0 1 2 1.0\n1 2 0 1.0\n2 0 1 1.0\n"

EULER_FAST_CONFIG = """\
experiment = euler

[parameters]
algebra = so3
inertia = 1.0, 2.0, 3.0
xi0 = 0.1, 1.0, 0.1
horizon = 5.0

[output]
output_dir = out
"""

PARTICLE_SWEEP_TEMPLATE = """\
experiment = particle

[sweep]
epsilon_sweep = {sweep}

[output]
output_dir = out
"""


def small_trajectory():
    times = np.array([0.0, 0.5])
    values = np.array([[1.0, 2.0], [3.0, 4.0]])
    return Trajectory(
        times=times, values=values, state_labels=("a", "b"), kind="generic",
        dim_base=1,
        invariant_log={"energy": np.array([0.25, 0.125]),
                       "momentum": np.array([1.0, 1.0])})


class TestConfigParsing:
    def test_minimal_config_gets_defaults(self):
        config = parse_config("experiment = pendulum\n")
        assert config.experiment == "pendulum"
        assert config.epsilon_sweep == (1e-2, 5e-3, 2.5e-3)
        assert config.method == "implicit_midpoint"
        assert config.formats == ("csv", "json")
        assert config.newton_max_iter == 50

    def test_comments_and_blanks_ignored(self):
        text = ("# leading comment\n\nexperiment = particle  # inline\n"
                "[sweep]\nepsilon_sweep = 2e-2, 1e-2\n")
        config = parse_config(text)
        assert config.epsilon_sweep == (2e-2, 1e-2)

    def test_increasing_sweep_rejected(self):
        with pytest.raises(ConfigError,
                           match="epsilon_sweep must be strictly decreasing"):
            parse_config("experiment = pendulum\n[sweep]\n"
                         "epsilon_sweep = 1e-2, 2e-2\n")

    def test_every_violation_reported_with_line_numbers(self):
        text = ("experiment = particle\n"
                "pi = 3\n"
                "[warp]\n"
                "x = 1\n"
                "[parameters]\n"
                "bogus = 1.0\n"
                "trap = 2.0\n"
                "trap = 3.0\n"
                "[sweep]\n"
                "epsilon_sweep = 1e-2, 2e-2\n"
                "horizon_factor = 99.0\n"
                "[integrator]\n"
                "method = leapfrog\n"
                "newton_tol = 0.5\n"
                "broken line\n")
        with pytest.raises(ConfigError) as excinfo:
            parse_config(text)
        err = excinfo.value
        assert len(err.errors) == 10
        message = str(err)
        assert message.startswith("invalid config:")
        for fragment in (
                "line 2: unexpected top-level key 'pi'",
                "line 3: unknown section [warp]",
                "line 4: unknown key 'x' in section [warp]",
                "line 6: unknown parameter 'bogus'",
                "line 8: duplicate key 'trap' (first set on line 7)",
                "line 10: epsilon_sweep must be strictly decreasing",
                "line 11: horizon_factor must be a float in (0, 10]",
                "line 13: unknown method 'leapfrog'",
                "line 14: newton_tol must lie in (0, 1e-6]",
                "line 15: expected `key = value`"):
            assert fragment in message

    def test_unknown_experiment_rejected(self):
        with pytest.raises(ConfigError, match="unknown experiment 'warp'"):
            parse_config("experiment = warp\n")

    def test_missing_experiment_rejected(self):
        with pytest.raises(ConfigError, match="missing top-level"):
            parse_config("[sweep]\nepsilon_sweep = 1e-2\n")

    def test_bad_formats_rejected(self):
        with pytest.raises(ConfigError, match="nonempty subset"):
            parse_config("experiment = pendulum\n[output]\nformats = yaml\n")

    def test_full_config_round_trips(self):
        config = ExperimentConfig(
            experiment="particle",
            parameters={"trap": 1.5, "alpha": 0.6, "beta": 0.3, "mu": 1.2,
                        "x0": 0.5, "p0": 0.1},
            epsilon_sweep=(2e-2, 1e-2, 5e-3), horizon_factor=2.0,
            method="rk4", dt_full=5e-3, dt_reduced=2e-3, newton_tol=1e-10,
            newton_max_iter=40, output_dir="results", formats=("json",))
        text = serialize_config(config)
        assert parse_config(text) == config
        assert serialize_config(parse_config(text)) == text

    def test_shipped_configs_parse(self):
        for name in ("pendulum", "disk", "particle", "euler"):
            config = parse_config(shipped_config_text(name))
            assert config.experiment == name

    def test_unknown_shipped_config(self):
        with pytest.raises(FileNotFoundError, match="no shipped config"):
            shipped_config_text("warp")

    def test_load_config_reads_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(EULER_FAST_CONFIG)
        assert load_config(path).experiment == "euler"


class TestOutputFiles:
    def test_empty_trajectory_writes_header_only(self, tmp_path):
        empty = Trajectory(times=np.zeros(0), values=np.zeros((0, 2)),
                           state_labels=("a", "b"), kind="generic",
                           dim_base=1)
        path = tmp_path / "empty.csv"
        emit_csv(empty, path)
        assert path.read_text() == "t,a,b,energy,momentum\n"

    def test_two_step_trajectory_layout(self, tmp_path):
        path = tmp_path / "small.csv"
        emit_csv(small_trajectory(), path)
        lines = path.read_text().splitlines()
        assert len(lines) == 3
        assert lines[0] == "t,a,b,energy,momentum"
        assert lines[2] == ",".join(
            format(v, ".17g") for v in (0.5, 3.0, 4.0, 0.125, 1.0))

    def test_csv_round_trip_is_bit_exact(self, tmp_path):
        system = EulerSystem(algebra=so3(), inertia=np.diag([1.0, 2.0, 3.0]))
        traj = integrate_euler(
            system, np.array([0.1, 1.0, 0.1]), 2.0,
            IntegratorConfig(method="implicit_midpoint", dt=1e-2))
        path = tmp_path / "euler.csv"
        emit_csv(traj, path)
        cols = read_csv(path)
        assert np.array_equal(cols["t"], traj.times)
        for j, label in enumerate(traj.state_labels):
            assert np.array_equal(cols[label], traj.values[:, j])
        assert np.array_equal(cols["energy"], traj.invariant_log["energy"])
        assert np.array_equal(cols["momentum"],
                              traj.invariant_log["momentum"])

    def test_json_mirror(self, tmp_path):
        path = tmp_path / "small.json"
        emit_json(small_trajectory(), path, metadata={"note": "check"})
        doc = json.loads(path.read_text())
        assert doc["column_order"] == ["t", "a", "b", "energy", "momentum"]
        assert doc["columns"]["b"] == [2.0, 4.0]
        assert doc["kind"] == "generic"
        assert doc["metadata"] == {"note": "check"}


class TestRunExperiment:
    def test_shipped_euler_config_passes(self, tmp_path):
        config = parse_config(shipped_config_text("euler"))
        report = run_experiment(config, base_dir=tmp_path)
        assert report.overall
        assert {r.name for r in report.records} == {
            "jacobiator_max", "energy_drift", "casimir_drift",
            "shift_equivalence_sup"}
        out = tmp_path / config.output_dir
        assert (out / "euler.csv").exists()
        assert (out / "euler.json").exists()
        doc = json.loads((out / "report.json").read_text())
        assert doc["overall"] is True
        assert len(doc["records"]) == 4

    def test_runs_are_byte_deterministic(self, tmp_path):
        config = parse_config(EULER_FAST_CONFIG)
        outputs = []
        for sub in ("first", "second"):
            base = tmp_path / sub
            base.mkdir()
            run_experiment(config, base_dir=base)
            outputs.append((
                (base / "out" / "euler.csv").read_bytes(),
                (base / "out" / "report.json").read_bytes()))
        assert outputs[0] == outputs[1]

    def test_custom_algebra_file(self, tmp_path):
        (tmp_path / "my_algebra.alg").write_text(SO3_FILE_TEXT)
        config = parse_config(
            "experiment = custom\n"
            "[parameters]\n"
            "algebra_file = my_algebra.alg\n"
            "inertia = 1.0, 2.0, 3.0\n"
            "xi0 = 0.1, 1.0, 0.1\n"
            "horizon = 5.0\n")
        report = run_experiment(config, base_dir=tmp_path)
        assert report.overall
        doc = json.loads((tmp_path / "out" / "euler.json").read_text())
        assert doc["metadata"]["algebra"] == "my_algebra"

    def test_sweep_outputs_identical_serial_and_parallel(
            self, tmp_path, monkeypatch):
        config = parse_config(
            PARTICLE_SWEEP_TEMPLATE.format(sweep="0.02, 0.01"))
        outputs = []
        for sub, workers in (("serial", "1"), ("parallel", "2")):
            monkeypatch.setenv("FASTSLOW_THREADS", workers)
            base = tmp_path / sub
            base.mkdir()
            report = run_experiment(config, base_dir=base)
            assert report.overall
            out = base / "out"
            outputs.append(tuple(
                (out / name).read_bytes()
                for name in ("full_eps0.02.csv", "full_eps0.01.csv",
                             "reduced_eps0.02.csv", "reduced_eps0.01.csv",
                             "report.json")))
        assert outputs[0] == outputs[1]


class TestCommandLine:
    def test_run_exit_zero_on_pass(self, tmp_path, capsys):
        path = tmp_path / "euler.cfg"
        path.write_text(EULER_FAST_CONFIG)
        assert main(["run", str(path)]) == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out
        assert out.strip().endswith("overall: PASS")

    def test_run_exit_one_on_failed_check(self, tmp_path, capsys,
                                          monkeypatch):
        # A near-flat sweep cannot show the halving ratio: the error
        # shrinks by about 0.04/0.036, far below the 1.5 window floor.
        monkeypatch.setenv("FASTSLOW_THREADS", "1")
        path = tmp_path / "flat.cfg"
        path.write_text(
            PARTICLE_SWEEP_TEMPLATE.format(sweep="0.04, 0.036"))
        assert main(["run", str(path)]) == 1
        out = capsys.readouterr().out
        assert "[FAIL]" in out
        assert out.strip().endswith("overall: FAIL")

    def test_run_exit_two_on_bad_config(self, tmp_path, capsys):
        path = tmp_path / "bad.cfg"
        path.write_text("experiment = warp\n")
        assert main(["run", str(path)]) == 2
        assert "invalid config" in capsys.readouterr().err

    def test_run_exit_two_on_missing_file(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "absent.cfg")]) == 2
        assert capsys.readouterr().err

    def test_verify_shipped_euler(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["verify", "euler"]) == 0
        assert "overall: PASS" in capsys.readouterr().out
        assert (tmp_path / "out" / "euler" / "report.json").exists()

    def test_verify_unknown_experiment(self, capsys):
        assert main(["verify", "warp"]) == 2
        assert "no shipped config" in capsys.readouterr().err

    def test_list_prints_registry(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        for name in ("pendulum", "disk", "particle", "euler", "custom"):
            assert name in out
        assert "algebra_file" in out
        assert "available experiments:" in out
