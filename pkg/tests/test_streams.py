"""Determinism and distribution checks for the random stream layer."""

from __future__ import annotations

import numpy as np
import pytest

from monolab.streams import (
    RngStream,
    derive_stream,
    random_permutation,
    sample_bernoulli,
    sample_beta,
    sample_gaussian,
)


def test_same_key_same_sequence():
    a = derive_stream(42, 0)
    b = derive_stream(42, 0)
    xs = [sample_gaussian(a, 0.0, 1.0) for _ in range(100)]
    ys = [sample_gaussian(b, 0.0, 1.0) for _ in range(100)]
    assert xs == ys


def test_different_stream_ids_diverge():
    a = derive_stream(42, 0)
    b = derive_stream(42, 1)
    assert a.gaussians(10).tolist() != b.gaussians(10).tolist()


def test_different_master_seeds_diverge():
    a = derive_stream(1, 7)
    b = derive_stream(2, 7)
    assert a.gaussians(10).tolist() != b.gaussians(10).tolist()


def test_mixed_draw_kinds_stay_deterministic():
    def consume(stream: RngStream):
        return (
            sample_gaussian(stream, 1.0, 2.0),
            sample_beta(stream, 2.0, 2.0),
            sample_bernoulli(stream, 0.3),
            tuple(random_permutation(stream, 5).tolist()),
            stream.binomial(10, 0.5),
        )

    assert consume(derive_stream(7, 3)) == consume(derive_stream(7, 3))


def test_zero_sd_returns_mean_exactly():
    s = derive_stream(0, 0)
    assert sample_gaussian(s, 0.0, 0.0) == 0.0
    assert sample_gaussian(s, 5.0, 0.0) == 5.0


def test_invalid_parameters_rejected():
    s = derive_stream(0, 0)
    with pytest.raises(ValueError):
        sample_gaussian(s, 0.0, -1.0)
    with pytest.raises(ValueError):
        sample_beta(s, 0.0, 1.0)
    with pytest.raises(ValueError):
        sample_beta(s, 1.0, -2.0)
    with pytest.raises(ValueError):
        sample_bernoulli(s, -0.1)
    with pytest.raises(ValueError):
        sample_bernoulli(s, 1.1)
    with pytest.raises(ValueError):
        s.permutation(-1)
    with pytest.raises(ValueError):
        s.binomial(-1, 0.5)


def test_seed_bounds_enforced():
    with pytest.raises(ValueError):
        derive_stream(-1, 0)
    with pytest.raises(ValueError):
        derive_stream(0, 2**64)
    with pytest.raises(TypeError):
        derive_stream(1.5, 0)
    # the extremes are valid keys
    derive_stream(2**64 - 1, 2**64 - 1)


def test_bernoulli_degenerate_probabilities():
    s = derive_stream(3, 0)
    assert all(sample_bernoulli(s, 1.0) == 1 for _ in range(200))
    assert all(sample_bernoulli(s, 0.0) == 0 for _ in range(200))


def test_gaussian_moments():
    s = derive_stream(11, 0)
    n = 100_000
    xs = s.gaussians(n, 2.0, 3.0)
    # mean SE = 3/sqrt(n); var of sample variance ~ 2 sd^4 / n
    assert abs(xs.mean() - 2.0) < 3 * 3.0 / np.sqrt(n)
    assert abs(xs.var(ddof=1) - 9.0) < 3 * np.sqrt(2 * 81.0 / n)


def test_beta_2_2_moments():
    s = derive_stream(12, 0)
    n = 100_000
    xs = s.betas(n, 2.0, 2.0)
    # Beta(2,2): mean 1/2, variance ab/((a+b)^2 (a+b+1)) = 4/80 = 0.05
    assert abs(xs.mean() - 0.5) < 3 * np.sqrt(0.05 / n)
    assert abs(xs.var(ddof=1) - 0.05) < 0.005


def test_bernoulli_frequency():
    s = derive_stream(13, 0)
    n = 100_000
    xs = s.bernoullis(n, 0.3)
    assert set(np.unique(xs)) <= {0, 1}
    assert abs(xs.mean() - 0.3) < 3 * np.sqrt(0.3 * 0.7 / n)


def test_permutations_uniform():
    s = derive_stream(14, 0)
    n_draws = 60_000
    counts = {}
    for _ in range(n_draws):
        key = tuple(random_permutation(s, 3).tolist())
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 6
    p = 1.0 / 6.0
    se = np.sqrt(p * (1 - p) / n_draws)
    for key, count in counts.items():
        assert abs(count / n_draws - p) < 3 * se, key


def test_permutation_is_permutation():
    s = derive_stream(15, 0)
    for n in (0, 1, 2, 17):
        assert sorted(random_permutation(s, n).tolist()) == list(range(n))


def test_streams_uncorrelated():
    n = 100_000
    xs = derive_stream(16, 0).gaussians(n)
    ys = derive_stream(16, 1).gaussians(n)
    r = np.corrcoef(xs, ys)[0, 1]
    assert abs(r) < 3.0 / np.sqrt(n)
