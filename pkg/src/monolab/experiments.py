"""Experiment drivers: seeded sweeps, replicate parallelism, CSV results.

Replicate r of any experiment derives its randomness from
``(master_seed, r)`` and nothing else, so results do not depend on the
worker count: workers only decide which process replays which replicate
range, and the reduction always assembles per-replicate values in
replicate order before aggregating.  Cells of a sweep re-derive the same
replicate streams, which pairs regimes (same market, same arm means) at
equal replicate indices.

CSV schema (one metric per row):
    kind, regime, param_name, param_value, metric, value, stderr, n_runs,
    seed, exact
where ``exact`` carries a num/den rational string for exact results and is
empty for Monte Carlo rows.  Files are written to a temporary name and
renamed into place, so an interrupted run never leaves a partial CSV.
"""

from __future__ import annotations

import csv
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bandit2, exact, hiring, hiring_bandit
from .streams import derive_stream, random_permutation
from .svg import Series, render_line_chart

CSV_HEADER = (
    "kind",
    "regime",
    "param_name",
    "param_value",
    "metric",
    "value",
    "stderr",
    "n_runs",
    "seed",
    "exact",
)

HIRING_REGIMES = ("mono", "poly", "ensemble")


# ---------------------------------------------------------------------------
# configs


@dataclass(frozen=True)
class HiringConfig:
    mode: str  # "sequential" or "simultaneous"
    n_candidates: int = 1000
    firm_grid: tuple = (2, 4, 8, 16, 32, 64)
    noise_sd: float = 0.5
    capacity: int = 1
    n_runs: int = 1000
    master_seed: int = 0
    workers: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.mode not in ("sequential", "simultaneous"):
            raise ValueError(
                f"mode must be 'sequential' or 'simultaneous', got {self.mode!r}"
            )
        _check_grid(self.firm_grid, "firms")
        _check_common(self.n_runs, self.workers)
        if self.noise_sd < 0:
            raise ValueError(f"noise_sd must be >= 0, got {self.noise_sd}")
        if self.capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {self.capacity}")
        if self.n_candidates < 1:
            raise ValueError(f"need at least one candidate, got {self.n_candidates}")
        if self.mode == "sequential":
            need = max(self.firm_grid) * self.capacity
            if self.n_candidates < need:
                raise ValueError(
                    f"sequential mode needs at least {need} candidates for "
                    f"{max(self.firm_grid)} firms with capacity {self.capacity}, "
                    f"got {self.n_candidates}"
                )

    @property
    def kind(self) -> str:
        return "hiring-seq" if self.mode == "sequential" else "hiring-sim"


@dataclass(frozen=True)
class Bandit2Config:
    total_agents: int = 1000
    n0_grid: tuple = (1, 5, 10)
    k_grid: tuple = (1, 2, 4, 8)
    n_runs: int = 10000
    master_seed: int = 0
    workers: int = 1
    out: str | None = None
    kind: str = "bandit2"

    def __post_init__(self):
        _check_grid(self.n0_grid, "n0")
        _check_grid(self.k_grid, "k")
        _check_common(self.n_runs, self.workers)
        if max(self.k_grid) > self.total_agents:
            raise ValueError(
                f"k={max(self.k_grid)} groups cannot split {self.total_agents} agents"
            )


@dataclass(frozen=True)
class HiringBanditConfig:
    n_arms: int = 100
    n_rounds: int = 200
    agent_grid: tuple = (2, 4, 8, 16, 32)
    n0: int = 5
    n_runs: int = 1000
    master_seed: int = 0
    workers: int = 1
    out: str | None = None
    kind: str = "hiring-bandit"

    def __post_init__(self):
        _check_grid(self.agent_grid, "agents")
        _check_common(self.n_runs, self.workers)
        if self.n0 < 0:
            raise ValueError(f"n0 must be >= 0, got {self.n0}")
        if max(self.agent_grid) >= self.n_arms:
            raise ValueError(
                f"need more arms than agents, got {self.n_arms} arms "
                f"for up to {max(self.agent_grid)} agents"
            )


@dataclass(frozen=True)
class EnumerateConfig:
    n_candidates: int = 3
    n_firms: int = 2
    master_seed: int = 0
    out: str | None = None
    kind: str = "enumerate"


@dataclass(frozen=True)
class OrderSensitivityConfig:
    rankings: tuple  # tuple of per-firm rankings over shared candidate labels
    master_seed: int = 0
    out: str | None = None
    kind: str = "order-sensitivity"


def _check_grid(grid, name: str) -> None:
    if not grid:
        raise ValueError(f"{name} grid must not be empty")
    if any(int(v) != v or v < 1 for v in grid):
        raise ValueError(f"{name} grid entries must be positive integers, got {grid}")


def _check_common(n_runs: int, workers: int) -> None:
    if n_runs < 1:
        raise ValueError(f"runs must be >= 1, got {n_runs}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")


# ---------------------------------------------------------------------------
# result rows


@dataclass(frozen=True)
class ResultRow:
    kind: str
    regime: str
    param_name: str
    param_value: float
    metric: str
    value: float
    stderr: float
    n_runs: int
    seed: int
    exact: str = ""


def _sample_se(values: np.ndarray) -> float:
    if len(values) < 2:
        return 0.0
    return float(values.std(ddof=1) / np.sqrt(len(values)))


# ---------------------------------------------------------------------------
# replicate-range simulators (top level so worker processes can import them)


def _hiring_range(cfg: HiringConfig, start: int, stop: int) -> dict:
    out = {
        (f, regime): np.empty(stop - start)
        for f in cfg.firm_grid
        for regime in HIRING_REGIMES
    }
    for i, r in enumerate(range(start, stop)):
        for f in cfg.firm_grid:
            for regime in HIRING_REGIMES:
                stream = derive_stream(cfg.master_seed, r)
                market = hiring.generate_market(cfg.n_candidates, stream)
                scores = hiring.score_regime(market, f, cfg.noise_sd, regime, stream)
                if cfg.mode == "sequential":
                    order = random_permutation(stream, f)
                    outcome = hiring.sequential_hire(scores, order, cfg.capacity)
                else:
                    prefs = hiring.generate_prefs(cfg.n_candidates, f, stream)
                    outcome = hiring.deferred_acceptance(scores, prefs, cfg.capacity)
                out[(f, regime)][i] = hiring.normalized_performance(outcome, market)
    return out


def _bandit2_range(cfg: Bandit2Config, start: int, stop: int) -> dict:
    return {
        (n0, k): bandit2.simulate_failures(
            n0, k, cfg.total_agents, cfg.master_seed, start, stop
        ).astype(float)
        for n0 in cfg.n0_grid
        for k in cfg.k_grid
    }


def _hiring_bandit_range(cfg: HiringBanditConfig, start: int, stop: int) -> dict:
    out = {}
    for agents in cfg.agent_grid:
        for regime in hiring_bandit.REGIMES:
            out[(agents, regime, "total_bayesian_regret")] = np.empty(stop - start)
            out[(agents, regime, "misclassification")] = np.empty(stop - start)
    for i, r in enumerate(range(start, stop)):
        for agents in cfg.agent_grid:
            for regime in hiring_bandit.REGIMES:
                rc = hiring_bandit.RegimeConfig(
                    regime, agents, cfg.n_arms, cfg.n_rounds, cfg.n0
                )
                result = hiring_bandit.simulate_run(rc, derive_stream(cfg.master_seed, r))
                out[(agents, regime, "total_bayesian_regret")][i] = result.regret
                out[(agents, regime, "misclassification")][i] = result.misclassification
    return out


_RANGE_FNS = {
    "hiring": _hiring_range,
    "bandit2": _bandit2_range,
    "hiring-bandit": _hiring_bandit_range,
}


def _range_task(args):
    fn_name, cfg, start, stop = args
    return _RANGE_FNS[fn_name](cfg, start, stop)


def _split_ranges(n_runs: int, workers: int) -> list[tuple[int, int]]:
    n_chunks = 1 if workers <= 1 else min(n_runs, workers * 4)
    bounds = np.linspace(0, n_runs, n_chunks + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _collect(fn_name: str, cfg, n_runs: int, workers: int) -> dict:
    """Run all replicates, possibly across processes, and reassemble in order."""
    tasks = [(fn_name, cfg, a, b) for a, b in _split_ranges(n_runs, workers)]
    if len(tasks) == 1 or workers <= 1:
        parts = [_range_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_range_task, tasks))
    keys = parts[0].keys()
    return {key: np.concatenate([p[key] for p in parts]) for key in keys}


# ---------------------------------------------------------------------------
# experiment entry points


def run_hiring(cfg: HiringConfig, keep_values: bool = False):
    values = _collect("hiring", cfg, cfg.n_runs, cfg.workers)
    rows = [
        ResultRow(
            cfg.kind,
            regime,
            "firms",
            float(f),
            "normalized_performance",
            float(values[(f, regime)].mean()),
            _sample_se(values[(f, regime)]),
            cfg.n_runs,
            cfg.master_seed,
        )
        for f in cfg.firm_grid
        for regime in HIRING_REGIMES
    ]
    return (rows, values) if keep_values else rows


def run_bandit2(cfg: Bandit2Config, keep_values: bool = False):
    values = _collect("bandit2", cfg, cfg.n_runs, cfg.workers)
    rows = []
    for n0 in cfg.n0_grid:
        for k in cfg.k_grid:
            fails = values[(n0, k)]
            rate = float(fails.mean())
            se = float(np.sqrt(rate * (1.0 - rate) / cfg.n_runs))
            rows.append(
                ResultRow(
                    cfg.kind, f"k={k}", "n0", float(n0), "failure_rate",
                    rate, se, cfg.n_runs, cfg.master_seed,
                )
            )
    return (rows, values) if keep_values else rows


def run_hiring_bandit(cfg: HiringBanditConfig, keep_values: bool = False):
    values = _collect("hiring-bandit", cfg, cfg.n_runs, cfg.workers)
    rows = []
    for agents in cfg.agent_grid:
        for regime in hiring_bandit.REGIMES:
            for metric in ("total_bayesian_regret", "misclassification"):
                vals = values[(agents, regime, metric)]
                rows.append(
                    ResultRow(
                        cfg.kind, regime, "agents", float(agents), metric,
                        float(vals.mean()), _sample_se(vals),
                        cfg.n_runs, cfg.master_seed,
                    )
                )
    return (rows, values) if keep_values else rows


def run_enumerate(cfg: EnumerateConfig):
    rows = []
    for regime in ("mono", "poly"):
        probs = exact.enumerate_sequential_outcomes(
            cfg.n_candidates, cfg.n_firms, regime
        )
        for cand, prob in enumerate(probs):
            rows.append(
                ResultRow(
                    cfg.kind, regime, "candidate", float(cand),
                    "jobless_probability", float(prob), 0.0, 1, cfg.master_seed,
                    exact=f"{prob.numerator}/{prob.denominator}",
                )
            )
    return rows


def run_order_sensitivity(cfg: OrderSensitivityConfig):
    result = exact.hiring_order_sensitivity(cfg.rankings)
    rows = []
    for i, (order, unmatched) in enumerate(sorted(result.unmatched_by_order.items())):
        rows.append(
            ResultRow(
                cfg.kind,
                "-".join(str(f) for f in order),
                "order_index",
                float(i),
                "n_unmatched",
                float(len(unmatched)),
                0.0,
                1,
                cfg.master_seed,
                exact="+".join(sorted(str(c) for c in unmatched)),
            )
        )
    rows.append(
        ResultRow(
            cfg.kind, "all", "order_index", -1.0, "sensitive",
            float(result.sensitive), 0.0, 1, cfg.master_seed,
        )
    )
    return rows


def run(config, keep_values: bool = False):
    """Dispatch a config to its experiment; returns result rows."""
    if isinstance(config, HiringConfig):
        return run_hiring(config, keep_values)
    if isinstance(config, Bandit2Config):
        return run_bandit2(config, keep_values)
    if isinstance(config, HiringBanditConfig):
        return run_hiring_bandit(config, keep_values)
    if isinstance(config, EnumerateConfig):
        return run_enumerate(config)
    if isinstance(config, OrderSensitivityConfig):
        return run_order_sensitivity(config)
    raise TypeError(f"unknown config type {type(config).__name__}")


# ---------------------------------------------------------------------------
# CSV and figures


def _fmt(v: float) -> str:
    return repr(float(v))


def rows_to_csv_text(rows: list[ResultRow]) -> str:
    lines = [",".join(CSV_HEADER)]
    for row in rows:
        lines.append(
            ",".join(
                (
                    row.kind,
                    row.regime,
                    row.param_name,
                    _fmt(row.param_value),
                    row.metric,
                    _fmt(row.value),
                    _fmt(row.stderr),
                    str(row.n_runs),
                    str(row.seed),
                    row.exact,
                )
            )
        )
    return "\n".join(lines) + "\n"


def atomic_write_text(text: str, path: str) -> None:
    """Write via a sibling temp file and rename, so readers never see partials."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(rows: list[ResultRow], path: str) -> None:
    atomic_write_text(rows_to_csv_text(rows), path)


def read_csv(path: str) -> list[ResultRow]:
    """Parse a results CSV, reporting the line number of any malformed row."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        if tuple(header) != CSV_HEADER:
            raise ValueError(
                f"{path}: line 1: bad header {header!r}, expected {list(CSV_HEADER)}"
            )
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(CSV_HEADER):
                raise ValueError(
                    f"{path}: line {lineno}: expected {len(CSV_HEADER)} fields, "
                    f"got {len(record)}"
                )
            try:
                rows.append(
                    ResultRow(
                        record[0], record[1], record[2], float(record[3]),
                        record[4], float(record[5]), float(record[6]),
                        int(record[7]), int(record[8]), record[9],
                    )
                )
            except ValueError as err:
                raise ValueError(f"{path}: line {lineno}: {err}") from None
    return rows


DEFAULT_PLOT_METRIC = {
    "hiring-seq": "normalized_performance",
    "hiring-sim": "normalized_performance",
    "bandit2": "failure_rate",
    "hiring-bandit": "total_bayesian_regret",
    "enumerate": "jobless_probability",
}


def plot_csv(csv_path: str, kind: str, out_path: str, metric: str | None = None) -> None:
    """Render one figure from a results CSV: one series per regime, +/-2 SE bars."""
    if kind not in DEFAULT_PLOT_METRIC:
        raise ValueError(
            f"unknown figure kind {kind!r}, expected one of {sorted(DEFAULT_PLOT_METRIC)}"
        )
    metric = metric or DEFAULT_PLOT_METRIC[kind]
    rows = [r for r in read_csv(csv_path) if r.kind == kind and r.metric == metric]
    if not rows:
        raise ValueError(f"{csv_path}: no rows with kind={kind!r} and metric={metric!r}")
    regimes = []
    for row in rows:
        if row.regime not in regimes:
            regimes.append(row.regime)
    series = []
    for regime in regimes:
        mine = [r for r in rows if r.regime == regime]
        mine.sort(key=lambda r: r.param_value)
        series.append(
            Series(
                regime,
                tuple(r.param_value for r in mine),
                tuple(r.value for r in mine),
                tuple(2.0 * r.stderr for r in mine),
            )
        )
    x_label = rows[0].param_name
    svg_text = render_line_chart(series, x_label, metric, title=kind)
    atomic_write_text(svg_text, out_path)
