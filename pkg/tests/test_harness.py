import csv
import json

import numpy as np
import pytest

from whaleswarm.cli import main
from whaleswarm.exceptions import ConfigError
from whaleswarm.harness import (
    ALGORITHM_DEFAULTS,
    FUNCTION_SETTINGS,
    WSA_ETA,
    ExperimentConfig,
    configs_from_settings,
    list_presets,
    load_config,
    run_experiment,
    run_experiments,
)
from whaleswarm.objective import get_objective, read_shift_records
from whaleswarm.swarm_core import EvalBudget, init_swarm, make_rng

# Literal transcription of the published settings tables.
TABLE_SETTINGS = """
F1 0.01 100 10000 40
F2 0.000001 100 10000 40
F3 0.05 100 10000 1.55
F4 0.001 100 10000 5.5
F5 0.05 300 100000 0.6
F6 0.002 200 20000 1.5
F7 0.001 100 500000 7.5E-3
F8 0.001 100 500000 2.2E-3
F9 0.001 100 500000 5E-3
F10 0.001 100 500000 6.5E-2
F11 0.001 100 500000 5E-3
F12 0.001 100 500000 6.5E-2
"""


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestPresets:
    def test_function_table(self):
        rows = [line.split() for line in TABLE_SETTINGS.strip().splitlines()]
        assert len(rows) == 12 == len(FUNCTION_SETTINGS)
        for fid, eps, pop, evals, eta in rows:
            assert FUNCTION_SETTINGS[fid] == (float(eps), int(pop), int(evals))
            assert WSA_ETA[fid] == float(eta)

    def test_algorithm_table(self):
        assert ALGORITHM_DEFAULTS["ga"]["crossover"] == 0.95
        assert ALGORITHM_DEFAULTS["ga"]["mutation"] == 0.05
        assert ALGORITHM_DEFAULTS["de"] == {"crossover": 0.7, "scale": 0.5}
        assert ALGORITHM_DEFAULTS["pso"] == {"inertia": 0.729844, "c1": 2.0, "c2": 2.0}

    def test_catalog(self):
        rows = {r["preset"]: r for r in list_presets()}
        assert sum(k.startswith("F") for k in rows) == 12
        assert rows["F5"]["pop_size"] == 300 and rows["F5"]["max_evals"] == 100_000
        assert rows["F7"]["wsa_eta"] == 7.5e-3
        assert all(r["source"] for r in rows.values())

    def test_resolved_fills_presets(self):
        cfg = ExperimentConfig("f3", "WSA").resolved()
        assert (cfg.function, cfg.algorithm) == ("F3", "wsa")
        assert (cfg.eps, cfg.pop_size, cfg.max_evals) == (0.05, 100, 10_000)
        assert cfg.params["eta"] == 1.55 and cfg.params["rho0"] == 2.0

    def test_override_kept(self):
        cfg = ExperimentConfig("F3", "wsa", pop_size=7, params={"eta": 3.0}).resolved()
        assert cfg.pop_size == 7 and cfg.params["eta"] == 3.0


class TestConfigErrors:
    @pytest.mark.parametrize("cfg", [
        ExperimentConfig("F13", "wsa"),
        ExperimentConfig("F3", "cmaes"),
        ExperimentConfig("F3", "wsa", runs=0),
        ExperimentConfig("F3", "wsa", eps=-1.0),
        ExperimentConfig("F3", "de", params={"eta": 1.0}),
        ExperimentConfig("F3", "wsa", pop_size=50, max_evals=10),
        ExperimentConfig("F3", "de", pop_size=3, max_evals=10),
    ])
    def test_invalid(self, cfg):
        with pytest.raises(ConfigError):
            run_experiments([cfg])

    def test_fixed_dimension(self):
        with pytest.raises(ConfigError):
            run_experiments([ExperimentConfig("F3", "wsa", dimension=5, runs=1)])

    def test_missing_key(self):
        with pytest.raises(ConfigError):
            configs_from_settings({"function": "F3"})

    def test_bad_files(self, tmp_path):
        path = tmp_path / "c.ini"
        with pytest.raises(ConfigError):
            load_config(tmp_path / "missing.ini")
        path.write_text("[experiment]\nfunction = F3\nbogus = 1\n")
        with pytest.raises(ConfigError):
            load_config(path)
        path.write_text("[experiment]\nruns = many\n")
        with pytest.raises(ConfigError):
            load_config(path)
        path.write_text("[tabu]\nx = 1\n")
        with pytest.raises(ConfigError):
            load_config(path)
        path.write_text("function = F3\n")
        with pytest.raises(ConfigError):
            load_config(path)


def test_load_config_round_trip(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text(
        "[experiment]\n"
        "function = F1, F2   ; two functions\n"
        "algorithm = wsa,de\n"
        "runs = 3\n"
        "seed = 10\n"
        "niche_radius =\n"
        "[wsa]\n"
        "eta = 12.5\n"
        "[de]\n"
        "scale = 0.4\n"
    )
    settings = load_config(path)
    configs = configs_from_settings(settings)
    assert [(c.function, c.algorithm) for c in configs] == [
        ("F1", "wsa"), ("F1", "de"), ("F2", "wsa"), ("F2", "de")]
    assert configs[0].params == {"eta": 12.5} and configs[1].params == {"scale": 0.4}
    assert configs[0].runs == 3 and configs[0].base_seed == 10
    assert configs[0].niche_radius is None


def test_budget_equals_pop_single_run():
    cfg = ExperimentConfig("F3", "wsa", pop_size=30, max_evals=30, runs=1, base_seed=8)
    rep = run_experiment(cfg).report
    init = init_swarm(get_objective("F3"), 30, make_rng(8), EvalBudget(30))
    assert rep.best_fitnesses[0] == init.fitness.min()


def test_reports_reproducible(tmp_path):
    cfgs = [ExperimentConfig("F3", a, pop_size=20, max_evals=600, runs=3) for a in ("wsa", "ga")]
    a = run_experiments(cfgs, out=tmp_path / "a")
    b = run_experiments(cfgs, out=tmp_path / "b")
    for name in ("summary.csv", "runs.csv", "convergence.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert b"\r\n" not in a.summary.read_bytes()
    rows = read_csv(a.summary)
    assert [r["algorithm"] for r in rows] == ["wsa", "ga"]
    meta = json.loads(a.summary_json.read_text())
    assert meta[0]["sr"] == a.reports[0].sr and "wall_time_s" in meta[0]


def test_jobs_match_sequential(tmp_path):
    cfg = dict(function="F4", algorithm="wsa", pop_size=20, max_evals=500, runs=4)
    seq = run_experiments([ExperimentConfig(**cfg)], out=tmp_path / "s", jobs=1)
    par = run_experiments([ExperimentConfig(**cfg)], out=tmp_path / "p", jobs=2)
    assert seq.runs.read_bytes() == par.runs.read_bytes()
    assert seq.summary.read_bytes() == par.summary.read_bytes()


def test_runs_csv_content(tmp_path):
    files = run_experiments([ExperimentConfig("F2", "wsa", pop_size=20, max_evals=200, runs=3,
                                              base_seed=5)], out=tmp_path)
    rows = read_csv(files.runs)
    assert [int(r["seed"]) for r in rows] == [5, 6, 7]
    assert all(int(r["evals_used"]) <= 200 for r in rows)
    for r, run in zip(rows, files.report.runs):
        assert float(r["best_fitness"]) == run.best_fitness


def test_convergence_file(tmp_path):
    files = run_experiments([ExperimentConfig("F3", "wsa", pop_size=20, max_evals=300, runs=1)],
                            out=tmp_path)
    rows = read_csv(files.convergence)
    evals = np.array([int(r["evals"]) for r in rows])
    assert np.all(np.diff(evals) > 0)
    run = files.report.runs[0]
    np.testing.assert_array_equal([float(r["mean_best"]) for r in rows], run.trace_best)
    np.testing.assert_array_equal([float(r["mean_pop_avg"]) for r in rows], run.trace_pop_mean)


def test_convergence_decimated(tmp_path):
    files = run_experiments([ExperimentConfig("F1", "de", pop_size=10, max_evals=25_000, runs=1)],
                            out=tmp_path)
    rows = read_csv(files.convergence)
    evals = np.array([int(r["evals"]) for r in rows])
    assert len(rows) <= 10_000 and evals[-1] == 25_000
    assert np.all(np.diff(evals) > 0)


def test_shifts_file(tmp_path):
    cfgs = [ExperimentConfig("F9", a, dimension=4, pop_size=10, max_evals=50, runs=1,
                             shift_seed=3) for a in ("wsa", "de")]
    files = run_experiments(cfgs, out=tmp_path)
    records = read_shift_records(files.shifts)
    assert len(records) == 1
    assert records[0].function_id == "F9" and records[0].seed == 3
    assert len(records[0].shift) == 4


class TestCli:
    def test_run(self, tmp_path, capsys):
        code = main(["run", "--function", "F1", "--algo", "wsa", "--pop", "20", "--evals", "400",
                     "--runs", "2", "--eta", "30", "--out", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "summary.csv").exists()
        assert "F1" in capsys.readouterr().out

    def test_config_and_override(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[experiment]\nfunction = F4\nalgorithm = pso\nruns = 1\n"
                        "pop_size = 10\nmax_evals = 100\n")
        assert main(["run", "--config", str(path), "--evals", "50",
                     "--out", str(tmp_path / "o")]) == 0
        row = read_csv(tmp_path / "o" / "summary.csv")[0]
        assert row["max_evals"] == "50" and row["algorithm"] == "pso"

    def test_config_error_exit(self, capsys):
        assert main(["run", "--function", "F99", "--algo", "wsa"]) == 2
        assert "F99" in capsys.readouterr().err

    def test_io_error_exit(self, tmp_path, capsys):
        blocker = tmp_path / "file"
        blocker.write_text("")
        code = main(["run", "--function", "F1", "--algo", "wsa", "--pop", "5", "--evals", "5",
                     "--runs", "1", "--out", str(blocker / "sub")])
        assert code == 3
        assert str(blocker) in capsys.readouterr().err

    def test_presets(self, capsys):
        assert main(["presets"]) == 0
        out = capsys.readouterr().out
        assert "F12" in out and "0.729844" in out

    def test_functions(self, capsys):
        assert main(["functions"]) == 0
        out = capsys.readouterr().out
        assert "Himmelblau" in out and "Rastrigin" in out
