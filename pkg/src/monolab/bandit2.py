"""Greedy two-arm bandit: monoculture vs. split exploration groups.

An environment draws two arm means i.i.d. Beta(2, 2) and relabels them so
arm 1 is the better arm.  All decision makers share an initial history of
n0 samples per arm, then follow the greedy rule: pull the arm with the
higher empirical mean, where the empirical mean pools the initial history
with the agent's own observed rewards.

A "regime" splits a budget of total_agents one-per-timestep decisions into
k independent groups that share only the initial history.  The failure
event asks whether the pooled record of all groups ranks the worse arm
strictly above the better one: pooled means count the initial history once
and sum every group's pulls.

Rewards are realized through per-arm pre-drawn schedules (the j-th pull of
an arm reads the j-th entry of that arm's schedule), which is
distributionally identical to drawing per pull and lets the sweep engine
replay many replicates in lockstep.  Empirical-mean comparisons use exact
integer cross-multiplication, so ties are exact and the documented
tie-break (arm 1, or a fair coin under ``tie_rule="random"``) is hit
reliably.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .streams import RngStream, derive_stream


@dataclass(frozen=True)
class TwoArmEnv:
    """Arm means with arm 1 strictly better."""

    mu1: float
    mu2: float

    def __post_init__(self):
        if not (0.0 <= self.mu2 < self.mu1 <= 1.0):
            raise ValueError(f"need 0 <= mu2 < mu1 <= 1, got mu1={self.mu1}, mu2={self.mu2}")


@dataclass(frozen=True)
class InitialHistory:
    """Shared pre-experiment record: s_j successes out of n0 pulls of arm j."""

    n0: int
    s1: int
    s2: int

    def __post_init__(self):
        if self.n0 < 1:
            raise ValueError(f"initial history needs n0 >= 1, got {self.n0}")
        if not (0 <= self.s1 <= self.n0 and 0 <= self.s2 <= self.n0):
            raise ValueError("success counts must lie in [0, n0]")


@dataclass(frozen=True)
class BanditTrace:
    """One group's run: chosen arm (1 or 2) and realized reward per step."""

    choices: np.ndarray
    rewards: np.ndarray
    n1: int
    z1: int
    n2: int
    z2: int

    def __len__(self) -> int:
        return len(self.choices)

    def prefix_means(self, h0: InitialHistory):
        """Empirical means of both arms after t = 0..T steps (arrays of length T+1)."""
        is1 = self.choices == 1
        n1 = np.concatenate(([0], np.cumsum(is1)))
        z1 = np.concatenate(([0], np.cumsum(np.where(is1, self.rewards, 0))))
        n2 = np.concatenate(([0], np.cumsum(~is1)))
        z2 = np.concatenate(([0], np.cumsum(np.where(is1, 0, self.rewards))))
        hat1 = (h0.s1 + z1) / (h0.n0 + n1)
        hat2 = (h0.s2 + z2) / (h0.n0 + n2)
        return hat1, hat2


def draw_environment(stream: RngStream) -> TwoArmEnv:
    """Two i.i.d. Beta(2, 2) means, relabeled so arm 1 is better; ties redrawn."""
    while True:
        a = stream.beta(2.0, 2.0)
        b = stream.beta(2.0, 2.0)
        if a != b:
            break
    return TwoArmEnv(max(a, b), min(a, b))


def draw_initial_history(env: TwoArmEnv, n0: int, stream: RngStream) -> InitialHistory:
    """n0 Bernoulli samples of each arm, better arm first."""
    if n0 < 1:
        raise ValueError(f"initial history needs n0 >= 1, got {n0}")
    s1 = stream.binomial(n0, env.mu1)
    s2 = stream.binomial(n0, env.mu2)
    return InitialHistory(n0, s1, s2)


def _greedy_choice(n0: int, s1: int, z1: int, n1: int, s2: int, z2: int, n2: int) -> int:
    # (s1+z1)/(n0+n1) >= (s2+z2)/(n0+n2), cross-multiplied to stay exact.
    if (s1 + z1) * (n0 + n2) >= (s2 + z2) * (n0 + n1):
        return 1
    return 2


def greedy_step(trace: BanditTrace, h0: InitialHistory) -> int:
    """Arm the greedy rule pulls next given the trace so far (ties go to arm 1)."""
    return _greedy_choice(h0.n0, h0.s1, trace.z1, trace.n1, h0.s2, trace.z2, trace.n2)


def run_group(
    env: TwoArmEnv,
    h0: InitialHistory,
    horizon: int,
    stream: RngStream,
    tie_rule: str = "lowest",
) -> BanditTrace:
    """One greedy group for `horizon` steps.

    Consumes the stream in a fixed order: the arm-1 reward schedule, the
    arm-2 schedule, then (only under ``tie_rule="random"``) one fair coin
    per tie in encounter order.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    if tie_rule not in ("lowest", "random"):
        raise ValueError(f"tie_rule must be 'lowest' or 'random', got {tie_rule!r}")
    sched1 = stream.bernoullis(horizon, env.mu1)
    sched2 = stream.bernoullis(horizon, env.mu2)
    choices = np.empty(horizon, dtype=np.int8)
    rewards = np.empty(horizon, dtype=np.int8)
    n0, s1, s2 = h0.n0, h0.s1, h0.s2
    n1 = z1 = n2 = z2 = 0
    for t in range(horizon):
        left = (s1 + z1) * (n0 + n2)
        right = (s2 + z2) * (n0 + n1)
        if left == right and tie_rule == "random":
            arm = 1 if stream.bernoulli(0.5) else 2
        else:
            arm = 1 if left >= right else 2
        if arm == 1:
            r = int(sched1[n1])
            n1 += 1
            z1 += r
        else:
            r = int(sched2[n2])
            n2 += 1
            z2 += r
        choices[t] = arm
        rewards[t] = r
    return BanditTrace(choices, rewards, n1, z1, n2, z2)


def group_sizes(total_agents: int, k_groups: int) -> list[int]:
    """Split total_agents into k_groups near-equal sizes, remainder first."""
    if k_groups < 1:
        raise ValueError(f"need at least one group, got {k_groups}")
    if total_agents < k_groups:
        raise ValueError(
            f"cannot split {total_agents} agents into {k_groups} non-empty groups"
        )
    base, rem = divmod(total_agents, k_groups)
    return [base + 1] * rem + [base] * (k_groups - rem)


def run_regime(
    env: TwoArmEnv,
    h0: InitialHistory,
    total_agents: int,
    k_groups: int,
    stream: RngStream,
    tie_rule: str = "lowest",
) -> list[BanditTrace]:
    """k independent greedy groups sharing h0, simulated in group order."""
    return [
        run_group(env, h0, size, stream, tie_rule)
        for size in group_sizes(total_agents, k_groups)
    ]


def pooled_failure(h0: InitialHistory, traces: list[BanditTrace]) -> bool:
    """True when the pooled record ranks arm 2 strictly above arm 1.

    Pooled means count the shared initial history once and sum pulls and
    rewards over all traces.  Exact ties are not failures.
    """
    n1 = sum(t.n1 for t in traces)
    z1 = sum(t.z1 for t in traces)
    n2 = sum(t.n2 for t in traces)
    z2 = sum(t.z2 for t in traces)
    return (h0.s2 + z2) * (h0.n0 + n1) > (h0.s1 + z1) * (h0.n0 + n2)


def lock_in_time(trace: BanditTrace) -> int | None:
    """First timestep (1-indexed) from which the chosen arm never changes.

    None for an empty trace.  A constant trace locks in at 1; a trace whose
    last switch lands at step t locks in at t.
    """
    horizon = len(trace.choices)
    if horizon == 0:
        return None
    t = horizon
    while t > 1 and trace.choices[t - 2] == trace.choices[t - 1]:
        t -= 1
    return t


def simulate_failures(
    n0: int,
    k_groups: int,
    total_agents: int,
    master_seed: int,
    rep_start: int,
    rep_stop: int,
) -> np.ndarray:
    """Pooled-failure indicator for replicates rep_start..rep_stop-1.

    Replicate r re-derives its stream from (master_seed, r) and consumes it
    exactly like the scalar path (draw_environment, draw_initial_history,
    then each group's two reward schedules), so the outcome vector does not
    depend on how replicates are batched across calls or worker processes.
    The greedy walk itself is replayed for all replicates in lockstep.
    """
    n_reps = rep_stop - rep_start
    if n_reps <= 0:
        return np.zeros(0, dtype=np.int64)
    sizes = group_sizes(total_agents, k_groups)

    s1 = np.empty(n_reps, dtype=np.int64)
    s2 = np.empty(n_reps, dtype=np.int64)
    sched1 = [np.empty((n_reps, m), dtype=np.int8) for m in sizes]
    sched2 = [np.empty((n_reps, m), dtype=np.int8) for m in sizes]
    for i in range(n_reps):
        stream = derive_stream(master_seed, rep_start + i)
        env = draw_environment(stream)
        h0 = draw_initial_history(env, n0, stream)
        s1[i] = h0.s1
        s2[i] = h0.s2
        for g, m in enumerate(sizes):
            sched1[g][i] = stream.bernoullis(m, env.mu1)
            sched2[g][i] = stream.bernoullis(m, env.mu2)

    pooled_n1 = np.zeros(n_reps, dtype=np.int64)
    pooled_z1 = np.zeros(n_reps, dtype=np.int64)
    pooled_n2 = np.zeros(n_reps, dtype=np.int64)
    pooled_z2 = np.zeros(n_reps, dtype=np.int64)
    rows = np.arange(n_reps)
    for g, m in enumerate(sizes):
        x1 = sched1[g]
        x2 = sched2[g]
        n1 = np.zeros(n_reps, dtype=np.int64)
        z1 = np.zeros(n_reps, dtype=np.int64)
        n2 = np.zeros(n_reps, dtype=np.int64)
        z2 = np.zeros(n_reps, dtype=np.int64)
        for _ in range(m):
            pick1 = (s1 + z1) * (n0 + n2) >= (s2 + z2) * (n0 + n1)
            r1 = x1[rows, n1]
            r2 = x2[rows, n2]
            z1 += np.where(pick1, r1, 0)
            z2 += np.where(pick1, 0, r2)
            n1 += pick1
            n2 += ~pick1
        pooled_n1 += n1
        pooled_z1 += z1
        pooled_n2 += n2
        pooled_z2 += z2

    failures = (s2 + pooled_z2) * (n0 + pooled_n1) > (s1 + pooled_z1) * (n0 + pooled_n2)
    return failures.astype(np.int64)


@dataclass(frozen=True)
class SweepCell:
    n0: int
    k_groups: int
    failure_rate: float
    stderr: float
    n_runs: int


def failure_rate_sweep(
    n0_grid,
    k_grid,
    total_agents: int,
    n_runs: int,
    master_seed: int,
) -> list[SweepCell]:
    """Failure rate with binomial standard error for every (n0, k) cell."""
    if n_runs < 1:
        raise ValueError(f"need at least one run, got {n_runs}")
    cells = []
    for n0 in n0_grid:
        for k in k_grid:
            fails = simulate_failures(n0, k, total_agents, master_seed, 0, n_runs)
            rate = float(fails.mean())
            se = float(np.sqrt(rate * (1.0 - rate) / n_runs))
            cells.append(SweepCell(n0, k, rate, se, n_runs))
    return cells
