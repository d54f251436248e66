"""Command-line interface.

Subcommands mirror the experiment families; every run is reproducible from
``--seed`` and the printed CSV is byte-stable across ``--workers`` choices.
Parameter precedence: command-line flag, then ``--config`` JSON file, then
the built-in default.  Exit codes: 0 success, 2 usage or validation error,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import experiments

ENV_WORKERS = "MONOLAB_WORKERS"

_ALLOWED_KEYS = {
    "hiring": ("mode", "candidates", "firms", "noise_sd", "capacity",
               "runs", "seed", "workers", "out"),
    "bandit2": ("agents", "n0", "k", "runs", "seed", "workers", "out"),
    "hiring-bandit": ("arms", "rounds", "agents", "n0",
                      "runs", "seed", "workers", "out"),
    "enumerate": ("candidates", "firms", "seed", "out"),
    "order-sensitivity": ("rankings", "seed", "out"),
    "plot": ("csv", "kind", "out", "metric"),
}


def _parse_grid(text):
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    try:
        return tuple(int(part) for part in str(text).split(","))
    except ValueError:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}") from None


def _parse_rankings(value):
    # "A>B>C;A>C>B" - one firm per semicolon group, candidates best-first.
    if isinstance(value, (list, tuple)):
        return tuple(tuple(str(c) for c in ranking) for ranking in value)
    rankings = []
    for group in str(value).split(";"):
        ranking = tuple(c.strip() for c in group.split(">") if c.strip())
        if not ranking:
            raise ValueError(f"empty ranking in {value!r}")
        rankings.append(ranking)
    return tuple(rankings)


def _merge_params(args, command: str) -> dict:
    """File values under CLI flags; unknown file keys are rejected."""
    allowed = _ALLOWED_KEYS[command]
    params = {}
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as err:
                raise ValueError(f"{config_path}: not valid JSON: {err}") from None
        if not isinstance(data, dict):
            raise ValueError(f"{config_path}: config must be a JSON object")
        for key, value in data.items():
            if key not in allowed:
                raise ValueError(
                    f"{config_path}: unknown config key {key!r} for "
                    f"command {command!r} (allowed: {', '.join(allowed)})"
                )
            params[key] = value
    for key in allowed:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            params[key] = flag_value
    return params


def _resolve_workers(params: dict) -> int:
    if "workers" in params:
        workers = int(params["workers"])
    elif os.environ.get(ENV_WORKERS):
        raw = os.environ[ENV_WORKERS]
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_WORKERS}={raw!r} is not an integer") from None
    else:
        workers = 1
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return workers


def _emit(rows, out_path: str | None) -> None:
    if out_path:
        experiments.write_csv(rows, out_path)
        print(f"wrote {out_path} ({len(rows)} rows)")
    else:
        sys.stdout.write(experiments.rows_to_csv_text(rows))


def _cmd_hiring(args) -> int:
    params = _merge_params(args, "hiring")
    mode = params.get("mode", "sequential")
    capacity = params.get("capacity")
    if capacity is None:
        capacity = 1 if mode == "sequential" else 10
    cfg = experiments.HiringConfig(
        mode=mode,
        n_candidates=int(params.get("candidates", 1000)),
        firm_grid=_parse_grid(params.get("firms", "2,4,8,16,32,64")),
        noise_sd=float(params.get("noise_sd", 0.5)),
        capacity=int(capacity),
        n_runs=int(params.get("runs", 1000)),
        master_seed=int(params.get("seed", 0)),
        workers=_resolve_workers(params),
        out=params.get("out"),
    )
    _emit(experiments.run(cfg), cfg.out)
    return 0


def _cmd_bandit2(args) -> int:
    params = _merge_params(args, "bandit2")
    cfg = experiments.Bandit2Config(
        total_agents=int(params.get("agents", 1000)),
        n0_grid=_parse_grid(params.get("n0", "1,5,10")),
        k_grid=_parse_grid(params.get("k", "1,2,4,8")),
        n_runs=int(params.get("runs", 10000)),
        master_seed=int(params.get("seed", 0)),
        workers=_resolve_workers(params),
        out=params.get("out"),
    )
    _emit(experiments.run(cfg), cfg.out)
    return 0


def _cmd_hiring_bandit(args) -> int:
    params = _merge_params(args, "hiring-bandit")
    cfg = experiments.HiringBanditConfig(
        n_arms=int(params.get("arms", 100)),
        n_rounds=int(params.get("rounds", 200)),
        agent_grid=_parse_grid(params.get("agents", "2,4,8,16,32")),
        n0=int(params.get("n0", 5)),
        n_runs=int(params.get("runs", 1000)),
        master_seed=int(params.get("seed", 0)),
        workers=_resolve_workers(params),
        out=params.get("out"),
    )
    _emit(experiments.run(cfg), cfg.out)
    return 0


def _cmd_enumerate(args) -> int:
    params = _merge_params(args, "enumerate")
    cfg = experiments.EnumerateConfig(
        n_candidates=int(params.get("candidates", 3)),
        n_firms=int(params.get("firms", 2)),
        master_seed=int(params.get("seed", 0)),
        out=params.get("out"),
    )
    _emit(experiments.run(cfg), cfg.out)
    return 0


def _cmd_order_sensitivity(args) -> int:
    params = _merge_params(args, "order-sensitivity")
    if "rankings" not in params:
        raise ValueError("order-sensitivity requires --rankings (e.g. 'A>B>C;A>C>B')")
    cfg = experiments.OrderSensitivityConfig(
        rankings=_parse_rankings(params["rankings"]),
        master_seed=int(params.get("seed", 0)),
        out=params.get("out"),
    )
    _emit(experiments.run(cfg), cfg.out)
    return 0


def _cmd_plot(args) -> int:
    params = _merge_params(args, "plot")
    for required in ("csv", "kind", "out"):
        if not params.get(required):
            raise ValueError(f"plot requires --{required}")
    experiments.plot_csv(params["csv"], params["kind"], params["out"],
                         params.get("metric"))
    print(f"wrote {params['out']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monolab",
        description=(
            "Seeded simulations of monoculture, polyculture, and ensemble "
            "decision regimes in hiring markets and bandit exploration."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, grids=True):
        p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
        if grids:
            p.add_argument("--runs", type=int, default=None, help="replicates per cell")
            p.add_argument("--workers", type=int, default=None,
                           help=f"worker processes (default ${ENV_WORKERS} or 1)")
        p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
        p.add_argument("--config", default=None, help="JSON config file")

    p = sub.add_parser("hiring", help="noisy-score hiring market sweep over firm counts")
    p.add_argument("--mode", choices=("sequential", "simultaneous"), default=None,
                   help="sequential picks or deferred acceptance (default sequential)")
    p.add_argument("--candidates", type=int, default=None)
    p.add_argument("--firms", default=None, help="comma-separated firm counts")
    p.add_argument("--noise-sd", dest="noise_sd", type=float, default=None)
    p.add_argument("--capacity", type=int, default=None,
                   help="hires per firm (default 1 sequential, 10 simultaneous)")
    add_common(p)
    p.set_defaults(func=_cmd_hiring)

    p = sub.add_parser("bandit2", help="two-arm greedy bandit failure-rate sweep")
    p.add_argument("--agents", type=int, default=None, help="total decision budget")
    p.add_argument("--n0", default=None, help="comma-separated initial sample counts")
    p.add_argument("--k", default=None, help="comma-separated group counts")
    add_common(p)
    p.set_defaults(func=_cmd_bandit2)

    p = sub.add_parser("hiring-bandit", help="many-arm bandit with hiring externalities")
    p.add_argument("--arms", type=int, default=None)
    p.add_argument("--rounds", type=int, default=None)
    p.add_argument("--agents", default=None, help="comma-separated agent counts")
    p.add_argument("--n0", type=int, default=None, help="initial samples per arm")
    add_common(p)
    p.set_defaults(func=_cmd_hiring_bandit)

    p = sub.add_parser("enumerate", help="exact joblessness probabilities by enumeration")
    p.add_argument("--candidates", type=int, default=None)
    p.add_argument("--firms", type=int, default=None)
    add_common(p, grids=False)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("order-sensitivity",
                       help="does the unmatched set depend on the firm order?")
    p.add_argument("--rankings", default=None,
                   help="per-firm rankings, e.g. 'A>B>C;A>C>B'")
    add_common(p, grids=False)
    p.set_defaults(func=_cmd_order_sensitivity)

    p = sub.add_parser("plot", help="render a results CSV as an SVG line chart")
    p.add_argument("--csv", default=None, help="input results CSV")
    p.add_argument("--kind", default=None,
                   help="figure kind: hiring-seq, hiring-sim, bandit2, hiring-bandit, enumerate")
    p.add_argument("--metric", default=None, help="metric column to plot")
    p.add_argument("--out", default=None, help="output SVG path")
    p.add_argument("--config", default=None, help="JSON config file")
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else 2
    try:
        return args.func(args)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
