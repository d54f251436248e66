"""Many-arm bandit with hiring externalities: agents claim distinct arms.

n_agents repeatedly choose among n_arms > n_agents arms whose true means
are drawn Beta(2, 2).  Each round the agents move in sequence and take the
unclaimed arm with the highest posterior mean (Beta-Bernoulli beliefs,
ties to the lowest arm index); an arm claimed earlier in the round is gone
for everyone after.  Pull results are public: at the end of each round all
agents update on every pull.

Regimes differ only in the initial n0 samples per arm and the move order:

* ``mono``         - every agent starts from the same sample set (agent 0's)
* ``poly_fixed``   - independent samples per agent, fixed order 0..n-1
* ``poly_random``  - independent samples per agent, order redrawn each round
* ``ensemble``     - every agent starts from the union of all agents' samples

All four regimes draw the same arm means and the same per-agent sample
tensor when run from identically derived streams, so cross-regime
comparisons at one replicate index are paired.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .streams import RngStream, derive_stream

REGIMES = ("mono", "poly_fixed", "poly_random", "ensemble")


@dataclass(frozen=True)
class RegimeConfig:
    regime: str
    n_agents: int
    n_arms: int
    n_rounds: int
    n0: int

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}, expected one of {REGIMES}")
        if self.n_agents < 1:
            raise ValueError(f"need at least one agent, got {self.n_agents}")
        if self.n_arms <= self.n_agents:
            raise ValueError(
                f"need more arms than agents, got {self.n_arms} arms "
                f"for {self.n_agents} agents"
            )
        if self.n_rounds < 1:
            raise ValueError(f"need at least one round, got {self.n_rounds}")
        if self.n0 < 0:
            raise ValueError(f"initial sample count must be >= 0, got {self.n0}")


@dataclass
class BeliefState:
    """Per-agent Beta(alpha, beta) beliefs over every arm."""

    alpha: np.ndarray  # shape (n_agents, n_arms), integer counts
    beta: np.ndarray

    def posterior_means(self) -> np.ndarray:
        return self.alpha / (self.alpha + self.beta)


@dataclass(frozen=True)
class ObserverPrior:
    """Initial information available to the impartial observer.

    Distinct initial sample sets counted once: under mono that is the one
    shared set (n0 pulls per arm), otherwise all n_agents * n0 pulls.
    """

    heads: np.ndarray  # shape (n_arms,), successes among initial samples
    total: int  # initial pulls per arm


def draw_arm_means(n_arms: int, stream: RngStream) -> np.ndarray:
    """True arm means, i.i.d. Beta(2, 2)."""
    if n_arms < 1:
        raise ValueError(f"need at least one arm, got {n_arms}")
    return stream.betas(n_arms, 2.0, 2.0)


def init_beliefs(
    true_means: np.ndarray,
    config: RegimeConfig,
    stream: RngStream,
) -> tuple[BeliefState, ObserverPrior]:
    """Draw the per-agent initial sample tensor and fold it into beliefs.

    The full independent-per-agent tensor is drawn under every regime (one
    binomial block, agent-major), which keeps identically derived streams
    aligned: mono keeps agent 0's row for everyone, ensemble pools all rows.
    """
    n, k = config.n_agents, config.n_arms
    p = np.broadcast_to(np.asarray(true_means, dtype=float), (n, k))
    heads = stream.binomials(config.n0, p)

    if config.regime == "mono":
        agent_heads = np.repeat(heads[:1], n, axis=0)
        per_agent_total = config.n0
        observer = ObserverPrior(heads[0].copy(), config.n0)
    elif config.regime == "ensemble":
        pooled = heads.sum(axis=0)
        agent_heads = np.tile(pooled, (n, 1))
        per_agent_total = n * config.n0
        observer = ObserverPrior(pooled, n * config.n0)
    else:
        agent_heads = heads
        per_agent_total = config.n0
        observer = ObserverPrior(heads.sum(axis=0), n * config.n0)

    alpha = 2 + agent_heads.astype(np.int64)
    beta = 2 + per_agent_total - agent_heads.astype(np.int64)
    return BeliefState(alpha, beta), observer


def play_round(beliefs: BeliefState, order: np.ndarray) -> list[tuple[int, int]]:
    """Claims for one round: (agent, arm) in move order.

    Each agent takes the unclaimed arm with the highest posterior mean;
    exact ties go to the lowest arm index.  Beliefs are read, not updated:
    information propagates only between rounds.
    """
    means = beliefs.posterior_means()
    claimed = np.zeros(means.shape[1], dtype=bool)
    pulls = []
    for agent in order:
        row = np.where(claimed, -1.0, means[agent])
        arm = int(np.argmax(row))
        claimed[arm] = True
        pulls.append((int(agent), arm))
    return pulls


def realize_rewards(
    pulls: list[tuple[int, int]],
    true_means: np.ndarray,
    stream: RngStream,
) -> list[tuple[int, int, int]]:
    """Bernoulli reward per claim, drawn as one uniform block in pull order."""
    draws = stream.uniforms(len(pulls))
    return [
        (agent, arm, int(draws[i] < true_means[arm]))
        for i, (agent, arm) in enumerate(pulls)
    ]


def observe_and_update(beliefs: BeliefState, round_log: list[tuple[int, int, int]]) -> None:
    """Public information: every agent updates on every pull of the round."""
    for _, arm, reward in round_log:
        if reward:
            beliefs.alpha[:, arm] += 1
        else:
            beliefs.beta[:, arm] += 1


def _top_n(values: np.ndarray, n: int) -> set[int]:
    # Descending value, ties broken toward the lower arm index.
    order = np.lexsort((np.arange(len(values)), -np.asarray(values, dtype=float)))
    return set(int(i) for i in order[:n])


def total_bayesian_regret(
    true_means: np.ndarray,
    logs: list[list[tuple[int, int, int]]],
    n_agents: int,
    n_rounds: int,
) -> float:
    """Shortfall of realized true means against always claiming the top n arms."""
    best = np.sort(np.asarray(true_means, dtype=float))[-n_agents:].sum()
    actual = 0.0
    for round_log in logs:
        for _, arm, _ in round_log:
            actual += float(true_means[arm])
    return n_rounds * float(best) - actual


def impartial_observer_misclassification(
    true_means: np.ndarray,
    observer: ObserverPrior,
    logs: list[list[tuple[int, int, int]]],
    n_agents: int,
) -> int:
    """How many of the observer's top-n arms are not truly top-n.

    The observer starts from Beta(2, 2), sees the initial samples (distinct
    sets counted once) and every round reward, and ranks arms by posterior
    mean with ties to the lower index.
    """
    k = len(true_means)
    reward_heads = np.zeros(k, dtype=np.int64)
    reward_total = np.zeros(k, dtype=np.int64)
    for round_log in logs:
        for _, arm, reward in round_log:
            reward_heads[arm] += reward
            reward_total[arm] += 1
    alpha = 2 + observer.heads + reward_heads
    beta = 2 + (observer.total - observer.heads) + (reward_total - reward_heads)
    means = alpha / (alpha + beta)
    return len(_top_n(means, n_agents) - _top_n(true_means, n_agents))


@dataclass(frozen=True)
class RunResult:
    regret: float
    misclassification: int


def simulate_run(config: RegimeConfig, stream: RngStream) -> RunResult:
    """One full run of one regime from a fresh stream.

    Stream consumption order: arm means, initial sample tensor, then per
    round an order permutation (poly_random only) followed by one uniform
    block for the round's rewards.
    """
    true_means = draw_arm_means(config.n_arms, stream)
    beliefs, observer = init_beliefs(true_means, config, stream)
    fixed_order = np.arange(config.n_agents)
    logs = []
    for _ in range(config.n_rounds):
        if config.regime == "poly_random":
            order = stream.permutation(config.n_agents)
        else:
            order = fixed_order
        pulls = play_round(beliefs, order)
        round_log = realize_rewards(pulls, true_means, stream)
        observe_and_update(beliefs, round_log)
        logs.append(round_log)
    regret = total_bayesian_regret(true_means, logs, config.n_agents, config.n_rounds)
    mis = impartial_observer_misclassification(true_means, observer, logs, config.n_agents)
    return RunResult(regret, mis)


@dataclass(frozen=True)
class RegimeSummary:
    regret_mean: float
    regret_se: float
    misclassification_mean: float
    misclassification_se: float
    n_runs: int


def run_experiment(config: RegimeConfig, n_runs: int, master_seed: int) -> RegimeSummary:
    """n_runs replicates of one regime; replicate r derives stream (master_seed, r)."""
    if n_runs < 1:
        raise ValueError(f"need at least one run, got {n_runs}")
    regrets = np.empty(n_runs)
    mis = np.empty(n_runs)
    for r in range(n_runs):
        result = simulate_run(config, derive_stream(master_seed, r))
        regrets[r] = result.regret
        mis[r] = result.misclassification
    def _se(x: np.ndarray) -> float:
        return float(x.std(ddof=1) / np.sqrt(len(x))) if len(x) > 1 else 0.0
    return RegimeSummary(
        float(regrets.mean()), _se(regrets), float(mis.mean()), _se(mis), n_runs
    )
