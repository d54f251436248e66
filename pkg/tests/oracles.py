"""Independent reference implementations used only by the tests.

These deliberately use different algorithms from the library (exhaustive
search instead of deferred acceptance, forward scan instead of backward)
so agreement is evidence, not tautology.
"""

from __future__ import annotations

from itertools import product

import numpy as np


def firm_prefers(scores, f: int, c_new: int, c_old: int) -> bool:
    """Firm f strictly prefers c_new to c_old (score, then lower index)."""
    return (scores[f, c_new], -c_new) > (scores[f, c_old], -c_old)


def candidate_prefers(prefs, c: int, f_new: int, f_cur: int) -> bool:
    """Candidate c strictly prefers firm f_new to current firm f_cur (-1 = unmatched)."""
    if f_cur == -1:
        return True
    ranks = {int(f): i for i, f in enumerate(prefs[c])}
    return ranks[f_new] < ranks[f_cur]


def is_stable(assignment, scores, prefs, capacity: int) -> bool:
    """No blocking (firm, candidate) pair, scanned directly."""
    n_firms, n_candidates = scores.shape
    load = [0] * n_firms
    for c in range(n_candidates):
        if assignment[c] >= 0:
            load[assignment[c]] += 1
    for f in range(n_firms):
        held = [c for c in range(n_candidates) if assignment[c] == f]
        for c in range(n_candidates):
            if assignment[c] == f:
                continue
            if not candidate_prefers(prefs, c, f, int(assignment[c])):
                continue
            if load[f] < capacity:
                return False
            if any(firm_prefers(scores, f, c, held_c) for held_c in held):
                return False
    return True


def brute_force_stable_matchings(scores, prefs, capacity: int = 1):
    """Every stable assignment, found by filtering all feasible assignments."""
    n_firms, n_candidates = scores.shape
    options = list(range(-1, n_firms))
    stable = []
    for assignment in product(options, repeat=n_candidates):
        load = [0] * n_firms
        ok = True
        for f in assignment:
            if f >= 0:
                load[f] += 1
                if load[f] > capacity:
                    ok = False
                    break
        if ok and is_stable(assignment, scores, prefs, capacity):
            stable.append(tuple(assignment))
    return stable


def lock_in_forward_scan(choices) -> int | None:
    """Lock-in time by scanning forward for the last switch (1-indexed)."""
    choices = list(choices)
    if not choices:
        return None
    t = 1
    for i in range(1, len(choices)):
        if choices[i] != choices[i - 1]:
            t = i + 1
    return t


def random_small_instance(stream, max_firms: int = 4, max_candidates: int = 4):
    """A random tiny market: scores, prefs, drawn sizes; capacity 1."""
    n_firms = 1 + int(stream.gen.integers(max_firms))
    n_candidates = 1 + int(stream.gen.integers(max_candidates))
    scores = stream.gaussians((n_firms, n_candidates))
    if stream.bernoulli(0.2):
        # inject exact score ties so the index tie-break is exercised
        scores = np.round(scores)
    prefs = np.vstack([stream.permutation(n_firms) for _ in range(n_candidates)])
    return scores, prefs
