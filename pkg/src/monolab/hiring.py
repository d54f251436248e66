"""Hiring-market simulation: score tables, sequential hiring, deferred acceptance.

A market is a vector of objective candidate values.  Firms never see the
values directly; they see noisy scores arranged in a firm-by-candidate
table whose structure encodes the decision regime:

* ``mono``      - one shared noise draw per candidate, so every firm row
                  is identical and all firms agree on the ranking.
* ``poly``      - independent noise per (firm, candidate) cell.
* ``ensemble``  - every firm row equals the per-candidate mean of the poly
                  rows drawn from the same stream state, i.e. the firms
                  average the polyculture's independent estimates.

Stream consumption inside one simulated run is fixed: market values first,
then noise in candidate-major order, then preference or firm-order draws.
Because of that, regimes re-deriving the same stream share the market, and
``ensemble`` is the exact mean of the ``poly`` table drawn at the same
stream state.

Tie-breaks are deterministic everywhere: when scores are equal, the lowest
candidate index wins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .streams import RngStream

UNMATCHED = -1

REGIMES = ("mono", "poly", "ensemble")


@dataclass(frozen=True)
class HiringOutcome:
    """Assignment of candidates to firms; UNMATCHED (-1) means jobless."""

    assignment: np.ndarray  # shape (n_candidates,), firm id or UNMATCHED

    @property
    def matched_mask(self) -> np.ndarray:
        return self.assignment >= 0

    @property
    def n_matched(self) -> int:
        return int(np.count_nonzero(self.matched_mask))

    def hires_of(self, firm: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == firm)


def generate_market(n_candidates: int, stream: RngStream) -> np.ndarray:
    """Objective candidate values, i.i.d. standard normal."""
    if n_candidates < 1:
        raise ValueError(f"need at least one candidate, got {n_candidates}")
    return stream.gaussians(n_candidates, 0.0, 1.0)


def score_regime(
    market: np.ndarray,
    n_firms: int,
    noise_sd: float,
    regime: str,
    stream: RngStream,
) -> np.ndarray:
    """Noisy score table of shape (n_firms, n_candidates) for one regime."""
    if n_firms < 1:
        raise ValueError(f"need at least one firm, got {n_firms}")
    if noise_sd < 0:
        raise ValueError(f"noise sd must be >= 0, got {noise_sd}")
    n = len(market)
    if regime == "mono":
        noise = stream.gaussians(n, 0.0, noise_sd)
        return np.tile(market + noise, (n_firms, 1))
    if regime == "poly":
        noise = stream.gaussians((n, n_firms), 0.0, noise_sd)  # candidate-major
        return (market[:, None] + noise).T
    if regime == "ensemble":
        noise = stream.gaussians((n, n_firms), 0.0, noise_sd)
        row = (market[:, None] + noise).T.mean(axis=0)
        return np.tile(row, (n_firms, 1))
    raise ValueError(f"unknown regime {regime!r}, expected one of {REGIMES}")


def sequential_hire(
    scores: np.ndarray,
    firm_order,
    capacity: int = 1,
) -> HiringOutcome:
    """Firms move in the given order; each takes its top remaining candidates.

    With the default capacity of one, every firm hires exactly one candidate.
    Score ties go to the lowest candidate index.
    """
    scores = np.asarray(scores, dtype=float)
    n_firms, n_candidates = scores.shape
    order = [int(f) for f in firm_order]
    if sorted(order) != list(range(n_firms)):
        raise ValueError("firm_order must be a permutation of all firm indices")
    if capacity < 1:
        raise ValueError(f"capacity must be >= 1, got {capacity}")
    if n_candidates < n_firms * capacity:
        raise ValueError(
            f"{n_candidates} candidates cannot fill {n_firms} firms "
            f"with capacity {capacity}"
        )
    assignment = np.full(n_candidates, UNMATCHED, dtype=np.int64)
    available = np.ones(n_candidates, dtype=bool)
    for firm in order:
        row = scores[firm]
        for _ in range(capacity):
            masked = np.where(available, row, -np.inf)
            pick = int(np.argmax(masked))  # argmax returns the first (lowest) index on ties
            assignment[pick] = firm
            available[pick] = False
    return HiringOutcome(assignment)


def generate_prefs(n_candidates: int, n_firms: int, stream: RngStream) -> np.ndarray:
    """Per-candidate uniform random preference order over firms, best first.

    Drawn one candidate at a time in candidate order.
    """
    if n_candidates < 1 or n_firms < 1:
        raise ValueError("need at least one candidate and one firm")
    prefs = np.empty((n_candidates, n_firms), dtype=np.int64)
    for c in range(n_candidates):
        prefs[c] = stream.permutation(n_firms)
    return prefs


def _validate_prefs(prefs: np.ndarray, n_firms: int) -> np.ndarray:
    prefs = np.asarray(prefs)
    if prefs.ndim != 2 or prefs.shape[1] != n_firms:
        raise ValueError(
            f"preference matrix must have shape (n_candidates, {n_firms}), "
            f"got {prefs.shape}"
        )
    expected = np.arange(n_firms)
    if not np.array_equal(np.sort(prefs, axis=1), np.broadcast_to(expected, prefs.shape)):
        raise ValueError("each preference row must be a permutation of all firm indices")
    return prefs


def deferred_acceptance(
    scores: np.ndarray,
    prefs: np.ndarray,
    capacity: int,
) -> HiringOutcome:
    """Candidate-proposing deferred acceptance with per-firm capacity.

    Candidates propose down their preference lists; a firm holds its best
    proposers so far, ranked by score with ties to the lowest candidate
    index, and rejects the excess.  The result is the candidate-optimal
    stable matching and does not depend on the proposal processing order.
    """
    scores = np.asarray(scores, dtype=float)
    n_firms, n_candidates = scores.shape
    prefs = _validate_prefs(prefs, n_firms)
    if prefs.shape[0] != n_candidates:
        raise ValueError("preference matrix row count must equal candidate count")
    if capacity < 1:
        raise ValueError(f"capacity must be >= 1, got {capacity}")

    assignment = np.full(n_candidates, UNMATCHED, dtype=np.int64)
    next_choice = np.zeros(n_candidates, dtype=np.int64)
    held: list[list[int]] = [[] for _ in range(n_firms)]
    # Desirability key: higher score wins, equal scores prefer the lower index.
    key = lambda f, c: (scores[f, c], -c)

    pending = list(range(n_candidates - 1, -1, -1))
    while pending:
        c = pending.pop()
        if next_choice[c] >= n_firms:
            continue  # exhausted every firm, stays unmatched
        f = int(prefs[c, next_choice[c]])
        next_choice[c] += 1
        if len(held[f]) < capacity:
            held[f].append(c)
            assignment[c] = f
            continue
        worst = min(held[f], key=lambda x: key(f, x))
        if key(f, c) > key(f, worst):
            held[f].remove(worst)
            assignment[worst] = UNMATCHED
            pending.append(worst)
            held[f].append(c)
            assignment[c] = f
        else:
            pending.append(c)
    return HiringOutcome(assignment)


def serial_dictatorship(
    shared_scores: np.ndarray,
    prefs: np.ndarray,
    capacity: int,
) -> HiringOutcome:
    """Candidates pick firms in descending shared-score order.

    Each candidate takes their most preferred firm with spare capacity.
    Under a shared ranking (the mono regime) this reproduces the deferred
    acceptance outcome.
    """
    shared_scores = np.asarray(shared_scores, dtype=float)
    n_candidates = len(shared_scores)
    n_firms = prefs.shape[1]
    prefs = _validate_prefs(prefs, n_firms)
    if capacity < 1:
        raise ValueError(f"capacity must be >= 1, got {capacity}")
    assignment = np.full(n_candidates, UNMATCHED, dtype=np.int64)
    spare = np.full(n_firms, capacity, dtype=np.int64)
    # Descending score; equal scores give the lower index the earlier turn.
    order = np.lexsort((np.arange(n_candidates), -shared_scores))
    for c in order:
        for f in prefs[c]:
            if spare[f] > 0:
                assignment[c] = f
                spare[f] -= 1
                break
    return HiringOutcome(assignment)


def normalized_performance(outcome: HiringOutcome, market: np.ndarray) -> float:
    """(actual - worst) / (best - worst) over mean objective value of hires.

    Best and worst are the highest- and lowest-value groups of the same size
    as the actually hired set, so 1.0 means the hired set was the best
    possible and 0.0 the worst possible.
    """
    market = np.asarray(market, dtype=float)
    n = outcome.n_matched
    if n == 0:
        raise ValueError("no candidate was matched; performance is undefined")
    actual = float(market[outcome.matched_mask].mean())
    ordered = np.sort(market)
    worst = float(ordered[:n].mean())
    best = float(ordered[-n:].mean())
    if best == worst:
        raise ValueError("degenerate market: best and worst groups coincide")
    return (actual - worst) / (best - worst)
