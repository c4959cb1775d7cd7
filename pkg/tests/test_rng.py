"""Seeded-generator behavior: determinism, stream independence, and
agreement between the sequential and vectorized forms."""

import numpy as np

from conet_probe.rng import (
    GOLDEN_GAMMA,
    MASK64,
    SplitMix64,
    derive_state,
    mix64,
    uniform_block,
)


def test_mix64_range_and_determinism():
    for z in (0, 1, 42, MASK64, GOLDEN_GAMMA):
        out = mix64(z)
        assert 0 <= out <= MASK64
        assert mix64(z) == out


def test_mix64_avalanche():
    # flipping one input bit should flip a lot of output bits
    base = mix64(123456789)
    flipped = mix64(123456789 ^ 1)
    assert bin(base ^ flipped).count("1") >= 16


def test_derive_state_is_stable_and_distinct():
    a = derive_state("shuffle", 0, "t01", 0)
    assert a == derive_state("shuffle", 0, "t01", 0)
    others = {
        derive_state("shuffle", 0, "t01", 1),
        derive_state("shuffle", 1, "t01", 0),
        derive_state("shuffle", 0, "t02", 0),
        derive_state("synthetic-embedding", 0, "t01", 0),
    }
    assert a not in others
    assert len(others) == 4


def test_derive_state_separator_prevents_collisions():
    assert derive_state("ab", "c") != derive_state("a", "bc")


def test_next_u64_matches_counter_form():
    state = derive_state("check", 7)
    stream = SplitMix64(state)
    for k in range(20):
        expected = mix64((state + (k + 1) * GOLDEN_GAMMA) & MASK64)
        assert stream.next_u64() == expected


def test_uniform_block_matches_sequential_stream():
    state = derive_state("uniforms", 3)
    block = uniform_block(state, 500)
    stream = SplitMix64(state)
    seq = np.array([(stream.next_u64() >> 11) * 2.0 ** -53 for _ in range(500)])
    assert np.array_equal(block, seq)
    assert block.min() >= 0.0 and block.max() < 1.0


def test_uniform_block_moments():
    block = uniform_block(derive_state("moments", 0), 200_000)
    assert abs(block.mean() - 0.5) < 0.005
    assert abs(block.var() - 1.0 / 12.0) < 0.002


def test_next_below_bounds_and_error():
    stream = SplitMix64(derive_state("bounds", 0))
    for _ in range(1000):
        assert 0 <= stream.next_below(7) < 7
    try:
        stream.next_below(0)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for bound 0")


def test_next_below_is_unbiased_over_small_range():
    stream = SplitMix64(derive_state("uniformity", 1))
    counts = [0, 0, 0]
    n = 90_000
    for _ in range(n):
        counts[stream.next_below(3)] += 1
    for c in counts:
        assert abs(c - n / 3) < 4 * (n / 3) ** 0.5 * 1.5


def test_shuffle_is_deterministic_per_state():
    items1 = list(range(30))
    items2 = list(range(30))
    SplitMix64(derive_state("s", 5)).shuffle(items1)
    SplitMix64(derive_state("s", 5)).shuffle(items2)
    assert items1 == items2
    assert sorted(items1) == list(range(30))


def test_shuffle_distribution_over_three_items():
    # with 3 items all 6 permutations should appear with equal frequency
    counts: dict[tuple[int, ...], int] = {}
    trials = 6000
    for seed in range(trials):
        items = [0, 1, 2]
        SplitMix64(derive_state("perm", seed)).shuffle(items)
        counts[tuple(items)] = counts.get(tuple(items), 0) + 1
    assert len(counts) == 6
    expected = trials / 6
    for c in counts.values():
        assert abs(c - expected) < 5 * expected ** 0.5


def test_distinct_states_give_distinct_streams():
    a = uniform_block(derive_state("stream", 0), 50)
    b = uniform_block(derive_state("stream", 1), 50)
    assert not np.array_equal(a, b)
