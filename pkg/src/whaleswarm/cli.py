"""``bench`` command line: run experiments, list presets, describe functions."""
from __future__ import annotations

import argparse
import sys

from .exceptions import ConfigError
from .harness import configs_from_settings, list_presets, load_config, run_experiments
from .objective import describe

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Whale Swarm Algorithm and baseline benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a batch of seeded experiments")
    run.add_argument("--config", help="INI config file; flags override its values")
    run.add_argument("--function", help="function id(s), e.g. F3 or F1,F2")
    run.add_argument("--algo", dest="algorithm", help="wsa, de, pso, ga (comma-separated ok)")
    run.add_argument("--pop", dest="pop_size", type=int)
    run.add_argument("--evals", dest="max_evals", type=int)
    run.add_argument("--eps", type=float)
    run.add_argument("--eta", type=float, help="WSA attenuation coefficient")
    run.add_argument("--rho0", type=float, help="WSA intensity at the source")
    run.add_argument("--runs", type=int)
    run.add_argument("--seed", type=int, help="base seed; run k uses seed + k")
    run.add_argument("--shift-seed", dest="shift_seed", type=int)
    run.add_argument("--dimension", type=int, help="dimension of F7-F12")
    run.add_argument("--niche-radius", dest="niche_radius", type=float)
    run.add_argument("--jobs", type=int)
    run.add_argument("--out", help="output directory for the report files")

    sub.add_parser("presets", help="list built-in parameter presets")
    sub.add_parser("functions", help="list the benchmark functions")
    return parser


def _print_table(rows):
    if not rows:
        return
    keys = []
    for row in rows:
        keys += [k for k in row if k not in keys]
    cells = [[str(row.get(k, "")) for k in keys] for row in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    print("  ".join(k.ljust(w) for k, w in zip(keys, widths)))
    for c in cells:
        print("  ".join(v.ljust(w) for v, w in zip(c, widths)))


def _run(args) -> int:
    settings = load_config(args.config) if args.config else {"params": {}}
    for key in ("function", "algorithm", "pop_size", "max_evals", "eps", "runs", "seed",
                "shift_seed", "dimension", "niche_radius", "jobs", "out"):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    for key in ("eta", "rho0"):
        value = getattr(args, key)
        if value is not None:
            settings["params"].setdefault("wsa", {})[key] = value

    configs = configs_from_settings(settings)
    out = settings.get("out")
    files = run_experiments(configs, out=out, jobs=int(settings.get("jobs", 1)))
    rows = []
    for rep in files.reports:
        rows.append({
            "function": rep.function_id,
            "algorithm": rep.algorithm,
            "SR": f"{rep.sr:g}",
            "ANOF": f"{rep.anof:g}",
            "MPR": "-" if rep.mpr_mean is None else f"{rep.mpr_mean:.6g}",
            "best_mean": f"{rep.best_fitnesses.mean():.6g}",
        })
    _print_table(rows)
    if out is not None:
        print(f"reports written to {out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "presets":
            rows = list_presets()
            _print_table([r for r in rows if r["preset"].startswith("F")])
            print()
            _print_table([r for r in rows if not r["preset"].startswith("F")])
        elif args.command == "functions":
            _print_table(describe())
        else:
            return _run(args)
    except ConfigError as exc:
        print(f"bench: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"bench: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
