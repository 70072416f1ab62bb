"""Random input streams: determinism, shaping transforms, domain checks."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parksim.stochastic import (
    ArrivalProcess,
    ConfigError,
    DurationDistribution,
    RandomSource,
    VelocityRange,
    sample_duration,
    sample_interarrival,
    sample_velocity,
)


# RandomSource


def test_same_seed_same_stream():
    a = RandomSource(123)
    b = RandomSource(123)
    assert [a.uniform() for _ in range(50)] == [b.uniform() for _ in range(50)]


def test_different_seeds_diverge():
    a = [RandomSource(1).uniform() for _ in range(10)]
    b = [RandomSource(2).uniform() for _ in range(10)]
    assert a != b


def test_source_is_plain_mersenne_twister():
    # the wrapper adds no shaping of its own; this pins the underlying
    # generator so a seed means the same stream forever
    src = RandomSource(99)
    ref = random.Random(99)
    assert [src.uniform() for _ in range(20)] == [ref.random() for _ in range(20)]


def test_seed_must_be_int():
    with pytest.raises(ConfigError):
        RandomSource(1.5)


def test_spawn_reproducible_and_disjoint():
    root = RandomSource(7)
    again = RandomSource(7)
    s0, s1 = root.spawn(0), root.spawn(1)
    assert s0.seed == again.spawn(0).seed
    assert s0.seed != s1.seed
    assert s0.seed != root.seed
    # spawning does not consume from the parent stream
    assert root.uniform() == RandomSource(7).uniform()


# interarrival gaps


def test_interarrival_inverse_cdf_transform():
    # dual route: the public sampler against the raw transform on the
    # same underlying uniforms
    src = RandomSource(11)
    ref = random.Random(11)
    for _ in range(100):
        got = sample_interarrival(src, 0.2)
        assert got == -math.log(1.0 - ref.random()) / 0.2


def test_interarrival_positive_and_one_uniform_per_draw():
    src = RandomSource(3)
    gaps = [sample_interarrival(src, 0.5) for _ in range(1000)]
    assert all(g > 0 for g in gaps)
    # stream advanced exactly 1000 positions
    ref = random.Random(3)
    for _ in range(1000):
        ref.random()
    assert src.uniform() == ref.random()


@pytest.mark.parametrize("rate", [0.0, -1.0])
def test_interarrival_rejects_bad_rate(rate):
    with pytest.raises(ConfigError):
        sample_interarrival(RandomSource(0), rate)


# parking durations


def test_duration_box_muller_transform():
    # dual route: same uniforms through an independently written
    # Box-Muller rejection loop must give bit-equal durations
    src = RandomSource(21)
    ref = random.Random(21)
    for _ in range(100):
        got = sample_duration(src, 45.0, 15.0)
        while True:
            u1, u2 = ref.random(), ref.random()
            if u1 <= 0.0:
                u1 = 2.0**-53
            z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
            want = 45.0 + 15.0 * z
            if want > 0.0:
                break
        assert got == want


def test_duration_two_uniforms_per_attempt():
    src = RandomSource(4)
    n = 500
    attempts = 0
    ref = random.Random(4)
    for _ in range(n):
        sample_duration(src, 45.0, 15.0)
    # replay: count attempts the rejection loop must have made
    probe = random.Random(4)
    accepted = 0
    while accepted < n:
        u1, u2 = probe.random(), probe.random()
        attempts += 1
        if u1 <= 0.0:
            u1 = 2.0**-53
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
        if 45.0 + 15.0 * z > 0.0:
            accepted += 1
    for _ in range(2 * attempts):
        ref.random()
    assert src.uniform() == ref.random()


def test_duration_always_positive_even_for_hostile_mean():
    src = RandomSource(17)
    draws = [sample_duration(src, 1.0, 15.0) for _ in range(2000)]
    assert min(draws) > 0


def test_duration_rejection_cap_raises():
    # mean 40 standard deviations below zero: every draw rejects
    with pytest.raises(ConfigError, match="rejected"):
        sample_duration(RandomSource(0), -400.0, 10.0, max_attempts=50)


def test_duration_rejects_bad_std():
    with pytest.raises(ConfigError):
        sample_duration(RandomSource(0), 45.0, 0.0)


# velocities


@settings(max_examples=80, deadline=None)
@given(
    seed=st.integers(0, 2**32),
    low=st.floats(1.0, 500.0),
    width=st.floats(0.0, 900.0),
)
def test_velocity_within_bounds_property(seed, low, width):
    high = low + width
    v = sample_velocity(RandomSource(seed), low, high)
    assert low <= v <= high


def test_velocity_affine_transform():
    src = RandomSource(8)
    ref = random.Random(8)
    for _ in range(100):
        assert sample_velocity(src, 100.0, 700.0) == 100.0 + 600.0 * ref.random()


@pytest.mark.parametrize("low, high", [(0.0, 10.0), (-5.0, 10.0), (10.0, 5.0)])
def test_velocity_rejects_bad_range(low, high):
    with pytest.raises(ConfigError):
        sample_velocity(RandomSource(0), low, high)


# distribution wrappers


def test_wrappers_validate_eagerly():
    with pytest.raises(ConfigError):
        ArrivalProcess(0.0)
    with pytest.raises(ConfigError):
        DurationDistribution(45.0, -1.0)
    with pytest.raises(ConfigError):
        DurationDistribution(0.0, 15.0)
    with pytest.raises(ConfigError):
        VelocityRange(700.0, 100.0)


def test_wrappers_delegate_to_samplers():
    assert ArrivalProcess(0.2).sample_gap(RandomSource(5)) == sample_interarrival(
        RandomSource(5), 0.2
    )
    assert DurationDistribution(45.0, 15.0).sample(RandomSource(5)) == sample_duration(
        RandomSource(5), 45.0, 15.0
    )
    assert VelocityRange(100.0, 700.0).sample(RandomSource(5)) == sample_velocity(
        RandomSource(5), 100.0, 700.0
    )


# distribution sanity (small n here; the million-draw statistical gate
# lives in test_acceptance.py)


def test_interarrival_mean_tracks_rate():
    src = RandomSource(100)
    n = 20_000
    mean = sum(sample_interarrival(src, 0.25) for _ in range(n)) / n
    assert mean == pytest.approx(4.0, rel=0.05)


def test_duration_mean_near_untruncated_mean():
    src = RandomSource(100)
    n = 20_000
    mean = sum(sample_duration(src, 45.0, 15.0) for _ in range(n)) / n
    # truncation at zero barely moves a mean 3 sigma inside the domain
    assert mean == pytest.approx(45.0, rel=0.05)
