"""Experiment orchestration: presets, config files, seeded batches and reports.

Config files are INI-style (parsed with :mod:`configparser`)::

    [experiment]
    function = F3          ; one id or a comma-separated list
    algorithm = wsa        ; wsa, de, pso, ga, or a comma-separated list
    pop_size = 100         ; optional, preset per function
    max_evals = 10000      ; optional, preset per function
    eps = 0.05             ; optional, preset per function
    runs = 25
    seed = 0               ; run k uses seed + k
    shift_seed = 0         ; F7-F12 only; shared by every algorithm
    dimension = 100        ; F7-F12 only
    jobs = 1
    out = results
    niche_radius =         ; optional extra gate for optima counting

    [wsa]
    eta = 1.55             ; optional, preset per function
    rho0 = 2

    [de]
    crossover = 0.7
    scale = 0.5

    [pso]
    inertia = 0.729844
    c1 = 2
    c2 = 2

    [ga]
    crossover = 0.95
    mutation = 0.05
    tournament_size = 2

Every key is optional except ``function`` and ``algorithm``; omitted values
come from the built-in presets.
"""
from __future__ import annotations

import configparser
import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .baselines import DeParams, GaParams, PsoParams, run_de_best_1_bin, run_ga, run_pso_inertia
from .exceptions import ConfigError, InvalidArgumentError, UnsupportedFunctionError
from .metrics import ExperimentReport, default_grid, summarize
from .objective import FUNCTIONS, ShiftRecord, get_objective, make_shifted, write_shift_records
from .wsa import WsaParams, run_wsa

__all__ = [
    "FUNCTION_SETTINGS",
    "WSA_ETA",
    "ALGORITHM_DEFAULTS",
    "ExperimentConfig",
    "ReportFiles",
    "list_presets",
    "load_config",
    "build_objective",
    "run_experiment",
    "run_experiments",
    "emit_convergence",
]

# (accuracy eps, population size, evaluation budget) per function.
FUNCTION_SETTINGS = {
    "F1": (0.01, 100, 10_000),
    "F2": (1e-6, 100, 10_000),
    "F3": (0.05, 100, 10_000),
    "F4": (0.001, 100, 10_000),
    "F5": (0.05, 300, 100_000),
    "F6": (0.002, 200, 20_000),
    "F7": (0.001, 100, 500_000),
    "F8": (0.001, 100, 500_000),
    "F9": (0.001, 100, 500_000),
    "F10": (0.001, 100, 500_000),
    "F11": (0.001, 100, 500_000),
    "F12": (0.001, 100, 500_000),
}

# Tuned attenuation coefficient per function.
WSA_ETA = {
    "F1": 40.0, "F2": 40.0, "F3": 1.55, "F4": 5.5, "F5": 0.6, "F6": 1.5,
    "F7": 7.5e-3, "F8": 2.2e-3, "F9": 5e-3, "F10": 6.5e-2, "F11": 5e-3, "F12": 6.5e-2,
}

ALGORITHM_DEFAULTS = {
    "wsa": {"rho0": 2.0},
    "de": {"crossover": 0.7, "scale": 0.5},
    "pso": {"inertia": 0.729844, "c1": 2.0, "c2": 2.0},
    "ga": {"crossover": 0.95, "mutation": 0.05, "tournament_size": 2},
}

_RUNNERS = {
    "wsa": (run_wsa, WsaParams),
    "de": (run_de_best_1_bin, DeParams),
    "pso": (run_pso_inertia, PsoParams),
    "ga": (run_ga, GaParams),
}

_PARAM_TYPES = {
    "eta": float, "rho0": float, "crossover": float, "scale": float, "inertia": float,
    "c1": float, "c2": float, "mutation": float, "tournament_size": int,
}


@dataclass
class ExperimentConfig:
    """One (function, algorithm) batch. ``None`` fields take preset values."""

    function: str
    algorithm: str
    pop_size: Optional[int] = None
    max_evals: Optional[int] = None
    eps: Optional[float] = None
    runs: int = 25
    base_seed: int = 0
    shift_seed: int = 0
    dimension: Optional[int] = None
    params: dict = field(default_factory=dict)
    niche_radius: Optional[float] = None
    jobs: int = 1
    out: Optional[Path] = None

    def resolved(self) -> "ExperimentConfig":
        """Copy with every preset default filled in and values validated."""
        fid = str(self.function).upper()
        algo = str(self.algorithm).lower()
        if fid not in FUNCTIONS:
            raise ConfigError(f"unknown function {self.function!r}; expected F1..F12")
        if algo not in _RUNNERS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of "
                              f"{', '.join(_RUNNERS)}")
        eps, pop, evals = FUNCTION_SETTINGS[fid]
        params = dict(ALGORITHM_DEFAULTS[algo])
        if algo == "wsa":
            params["eta"] = WSA_ETA[fid]
        unknown = set(self.params) - set(params) - ({"eta"} if algo == "wsa" else set())
        if unknown:
            raise ConfigError(f"unknown {algo} parameter(s): {', '.join(sorted(unknown))}")
        params.update(self.params)
        cfg = replace(
            self,
            function=fid,
            algorithm=algo,
            pop_size=int(self.pop_size if self.pop_size is not None else pop),
            max_evals=int(self.max_evals if self.max_evals is not None else evals),
            eps=float(self.eps if self.eps is not None else eps),
            params=params,
        )
        if cfg.runs < 1:
            raise ConfigError("runs must be >= 1")
        if cfg.eps <= 0:
            raise ConfigError("eps must be > 0")
        if cfg.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if cfg.pop_size < 1 or cfg.max_evals < cfg.pop_size:
            raise ConfigError(f"need 1 <= pop_size <= max_evals, got pop_size={cfg.pop_size}, "
                              f"max_evals={cfg.max_evals}")
        if algo == "de" and cfg.pop_size < 4:
            raise ConfigError("de needs pop_size >= 4")
        try:
            cfg.algorithm_params()
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from None
        return cfg

    def algorithm_params(self):
        _, param_cls = _RUNNERS[self.algorithm]
        return param_cls(pop_size=self.pop_size, max_evals=self.max_evals, **self.params)


@dataclass
class ReportFiles:
    reports: list
    summary: Optional[Path] = None
    summary_json: Optional[Path] = None
    runs: Optional[Path] = None
    convergence: Optional[Path] = None
    shifts: Optional[Path] = None

    @property
    def report(self) -> ExperimentReport:
        return self.reports[0]


def list_presets() -> list:
    """Catalog of built-in settings, one row per function and per algorithm."""
    rows = []
    for fid, (eps, pop, evals) in FUNCTION_SETTINGS.items():
        rows.append({
            "preset": fid,
            "eps": eps,
            "pop_size": pop,
            "max_evals": evals,
            "wsa_eta": WSA_ETA[fid],
            "source": "function settings + tuned eta",
        })
    for algo, params in ALGORITHM_DEFAULTS.items():
        rows.append({"preset": algo, **params, "source": "algorithm parameters"})
    return rows


def build_objective(cfg: ExperimentConfig):
    info = FUNCTIONS[cfg.function]
    try:
        if info.scalable:
            return make_shifted(cfg.function, cfg.dimension, cfg.shift_seed)
        if cfg.dimension not in (None, info.dimension):
            raise ConfigError(f"{cfg.function} is fixed at dimension {info.dimension}")
        return get_objective(cfg.function)
    except (InvalidArgumentError, UnsupportedFunctionError) as exc:
        raise ConfigError(str(exc)) from None


def _run_one(algorithm, obj, params, seed):
    runner, _ = _RUNNERS[algorithm]
    return runner(obj, params, seed)


def _execute(cfg: ExperimentConfig, obj, pool=None):
    params = cfg.algorithm_params()
    seeds = [cfg.base_seed + k for k in range(cfg.runs)]
    if pool is None:
        return [_run_one(cfg.algorithm, obj, params, s) for s in seeds]
    n = len(seeds)
    return list(pool.map(_run_one, [cfg.algorithm] * n, [obj] * n, [params] * n, seeds))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _write_csv(path: Path, header, rows):
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


SUMMARY_HEADER = [
    "function", "algorithm", "runs", "pop_size", "max_evals", "eps", "sr", "anof",
    "mpr_mean", "mpr_std", "mpr_missing", "best_mean", "best_std", "best_min",
    "best_median", "best_max",
]


def _summary_row(cfg: ExperimentConfig, report: ExperimentReport):
    best = report.best_fitnesses
    return [
        cfg.function, cfg.algorithm, cfg.runs, cfg.pop_size, cfg.max_evals, cfg.eps,
        report.sr, report.anof, report.mpr_mean, report.mpr_std, report.mpr_missing,
        float(best.mean()), float(best.std()), float(best.min()), float(np.median(best)),
        float(best.max()),
    ]


def emit_convergence(reports, path, max_points: int = 10_000) -> Path:
    """Write mean best-so-far and mean population-average fitness vs evaluations.

    Rows are grouped by (function, algorithm) and, within a group, strictly
    increasing in ``evals``. Curves longer than ``max_points`` are decimated.
    """
    if isinstance(reports, ExperimentReport):
        reports = [reports]
    rows = []
    for rep in reports:
        curve = rep.convergence
        evals = curve.evals
        if evals.size > max_points:
            keep = np.searchsorted(evals, default_grid(int(evals[-1]), max_points))
            keep = np.unique(np.minimum(keep, evals.size - 1))
        else:
            keep = np.arange(evals.size)
        for k in keep:
            rows.append([rep.function_id, rep.algorithm, int(evals[k]),
                         float(curve.mean_best[k]), float(curve.mean_pop_avg[k])])
    return _write_csv(Path(path),
                      ["function", "algorithm", "evals", "mean_best", "mean_pop_avg"], rows)


def _prepare_out(out) -> Path:
    out = Path(out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror or exc}") from exc
    return out


def run_experiments(configs: Sequence[ExperimentConfig], out=None,
                    jobs: int = 1) -> ReportFiles:
    """Run every config and, when ``out`` is given, write one combined report.

    Runs are independent seeded streams, so ``jobs > 1`` (a process pool)
    gives the same numbers as sequential execution.
    """
    configs = [c.resolved() for c in configs]
    objectives = [build_objective(c) for c in configs]
    if out is not None:
        out = _prepare_out(out)

    reports, timings = [], []
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for cfg, obj in zip(configs, objectives):
            t0 = time.perf_counter()
            runs = _execute(cfg, obj, pool)
            report = summarize(runs, obj, cfg.algorithm, eps=cfg.eps,
                               niche_radius=cfg.niche_radius,
                               grid=default_grid(cfg.max_evals))
            timings.append(time.perf_counter() - t0)
            reports.append(report)
    finally:
        if pool is not None:
            pool.shutdown()

    files = ReportFiles(reports)
    if out is None:
        return files

    files.summary = _write_csv(
        out / "summary.csv", SUMMARY_HEADER,
        [_summary_row(c, r) for c, r in zip(configs, reports)],
    )
    run_rows = []
    for cfg, rep in zip(configs, reports):
        for k, (r, cov, m) in enumerate(zip(rep.runs, rep.covered, rep.mprs)):
            run_rows.append([cfg.function, cfg.algorithm, k, r.seed, r.best_fitness, cov, m,
                             r.evals_used, r.stop_reason])
    files.runs = _write_csv(
        out / "runs.csv",
        ["function", "algorithm", "run", "seed", "best_fitness", "covered_optima", "mpr",
         "evals_used", "stop_reason"],
        run_rows,
    )
    files.convergence = emit_convergence(reports, out / "convergence.csv")

    shift_records, seen = [], set()
    for cfg, obj in zip(configs, objectives):
        if obj.shift is not None and cfg.function not in seen:
            seen.add(cfg.function)
            shift_records.append(ShiftRecord.from_objective(obj, cfg.shift_seed))
    try:
        files.shifts = write_shift_records(out / "shifts.txt", shift_records)
        meta = [
            {**_config_dict(c), "wall_time_s": round(t, 3), "sr": r.sr, "anof": r.anof,
             "mpr_mean": r.mpr_mean, "mpr_std": r.mpr_std}
            for c, r, t in zip(configs, reports, timings)
        ]
        files.summary_json = out / "summary.json"
        files.summary_json.write_text(json.dumps(meta, indent=2) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write report files in {out}: {exc.strerror or exc}") from exc
    return files


def _config_dict(cfg: ExperimentConfig) -> dict:
    return {
        "function": cfg.function, "algorithm": cfg.algorithm, "pop_size": cfg.pop_size,
        "max_evals": cfg.max_evals, "eps": cfg.eps, "runs": cfg.runs,
        "base_seed": cfg.base_seed, "shift_seed": cfg.shift_seed,
        "dimension": cfg.dimension, "params": cfg.params,
    }


def run_experiment(config: ExperimentConfig) -> ReportFiles:
    """Run one configured batch and write its report to ``config.out`` if set."""
    return run_experiments([config], out=config.out, jobs=config.jobs)


# --------------------------------------------------------------------------
# Config files
# --------------------------------------------------------------------------

_EXPERIMENT_KEYS = {
    "function": str, "algorithm": str, "pop_size": int, "max_evals": int, "eps": float,
    "runs": int, "seed": int, "shift_seed": int, "dimension": int, "jobs": int,
    "out": str, "niche_radius": float,
}


def _convert(key, raw, kind):
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind.__name__}") from None


def load_config(path) -> dict:
    """Parse a config file into a flat dict of experiment settings.

    Returns keys from the ``[experiment]`` section plus ``params``, a
    per-algorithm dict of parameter overrides.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None

    settings = {"params": {}}
    for section in parser.sections():
        name = section.lower()
        items = {k: v for k, v in parser.items(section) if v.strip() != ""}
        if name == "experiment":
            for key, raw in items.items():
                if key not in _EXPERIMENT_KEYS:
                    raise ConfigError(f"unknown key {key!r} in [experiment]")
                kind = _EXPERIMENT_KEYS[key]
                settings[key] = raw.strip() if kind is str else _convert(key, raw, kind)
        elif name in ALGORITHM_DEFAULTS:
            block = {}
            for key, raw in items.items():
                if key not in _PARAM_TYPES:
                    raise ConfigError(f"unknown key {key!r} in [{section}]")
                block[key] = _convert(key, raw, _PARAM_TYPES[key])
            settings["params"][name] = block
        else:
            raise ConfigError(f"unknown section [{section}]")
    return settings


def configs_from_settings(settings: dict) -> list:
    """Expand comma-separated function/algorithm lists into configs."""
    for key in ("function", "algorithm"):
        if not settings.get(key):
            raise ConfigError(f"missing required setting {key!r}")
    functions = [f.strip() for f in str(settings["function"]).split(",") if f.strip()]
    algorithms = [a.strip().lower() for a in str(settings["algorithm"]).split(",") if a.strip()]
    per_algo = settings.get("params", {})
    configs = []
    for fid in functions:
        for algo in algorithms:
            configs.append(ExperimentConfig(
                function=fid,
                algorithm=algo,
                pop_size=settings.get("pop_size"),
                max_evals=settings.get("max_evals"),
                eps=settings.get("eps"),
                runs=settings.get("runs", 25),
                base_seed=settings.get("seed", 0),
                shift_seed=settings.get("shift_seed", 0),
                dimension=settings.get("dimension"),
                params=dict(per_algo.get(algo, {})),
                niche_radius=settings.get("niche_radius"),
                jobs=settings.get("jobs", 1),
                out=Path(settings["out"]) if settings.get("out") else None,
            ))
    return configs
