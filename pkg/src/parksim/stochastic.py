"""Seedable random inputs for simulated traffic.

Three distributions drive a run: exponential gaps between car arrivals,
normally distributed parking durations truncated to positive values, and
uniform cruising velocities. All draws go through RandomSource so that a
seed pins the entire stream: same seed, same cars, on any platform.

Every sampler documents exactly how many uniforms it consumes per draw.
That contract is what keeps the compiled and pure-Python simulation
kernels bit-identical: inputs are drawn once, up front, in one place.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass


class ConfigError(ValueError):
    """Raised for parameter values outside their documented domain."""


# A truncated normal with mean well inside the positive half axis almost
# never rejects; this cap only trips on degenerate configurations such as
# mean many standard deviations below zero, and turns what would be an
# endless loop into a diagnosable error.
MAX_TRUNCATION_ATTEMPTS = 10**6


class RandomSource:
    """Deterministic uniform stream, seeded once.

    Thin wrapper over random.Random (Mersenne Twister): 53-bit uniforms
    are reproducible across platforms and Python versions, which the
    NumPy bit generators do not promise for derived distributions. All
    shaping into target distributions happens in this module's samplers,
    never inside the generator.
    """

    def __init__(self, seed: int):
        if not isinstance(seed, int):
            raise ConfigError(f"seed must be an integer, got {type(seed).__name__}")
        self.seed = seed
        self._rng = random.Random(seed)

    def uniform(self) -> float:
        """Next uniform draw in [0, 1)."""
        return self._rng.random()

    def spawn(self, stream: int) -> "RandomSource":
        """Independent source for a named substream.

        Mixing the stream index into the seed with fixed odd multipliers
        keeps substreams disjoint for all practical purposes while staying
        reproducible from the (seed, stream) pair alone.
        """
        mixed = (
            self.seed * 0x9E3779B97F4A7C15 + (stream + 1) * 0xBF58476D1CE4E5B9
        ) % 2**63
        return RandomSource(mixed)


def sample_interarrival(source: RandomSource, rate: float) -> float:
    """Exponential gap (minutes) until the next arrival; mean 1/rate.

    Inverse-CDF transform, one uniform per draw: x = -ln(1 - u) / rate.
    u is in [0, 1) so 1 - u never reaches zero.
    """
    if rate <= 0:
        raise ConfigError(f"arrival rate must be positive, got {rate}")
    u = source.uniform()
    return -math.log(1.0 - u) / rate


def sample_duration(
    source: RandomSource,
    mean: float,
    std: float,
    max_attempts: int = MAX_TRUNCATION_ATTEMPTS,
) -> float:
    """Parking duration (minutes): normal(mean, std) truncated to > 0.

    Box-Muller with rejection. Each attempt consumes exactly two
    uniforms, whether accepted or not, so the stream position after a
    call depends only on the number of attempts. Draws that land at or
    below zero are rejected and retried; a run of max_attempts rejections
    raises ConfigError instead of looping forever.
    """
    if std <= 0:
        raise ConfigError(f"duration std must be positive, got {std}")
    for _ in range(max_attempts):
        u1 = source.uniform()
        u2 = source.uniform()
        # u1 == 0 would need log(0); push it to the adjacent representable
        # draw instead of consuming extra stream positions.
        if u1 <= 0.0:
            u1 = 2.0**-53
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
        x = mean + std * z
        if x > 0.0:
            return x
    raise ConfigError(
        f"truncated normal(mean={mean}, std={std}) rejected "
        f"{max_attempts} draws; mass above zero is negligible"
    )


def sample_velocity(source: RandomSource, low: float, high: float) -> float:
    """Cruising velocity (meters/minute), uniform on [low, high).

    One uniform per draw: v = low + (high - low) * u.
    """
    if not 0 < low <= high:
        raise ConfigError(f"need 0 < low <= high, got [{low}, {high})")
    u = source.uniform()
    return low + (high - low) * u


@dataclass(frozen=True)
class ArrivalProcess:
    """Poisson arrivals: exponential interarrival gaps at ``rate`` per minute."""

    rate: float

    def __post_init__(self):
        if self.rate <= 0:
            raise ConfigError(f"arrival rate must be positive, got {self.rate}")

    def sample_gap(self, source: RandomSource) -> float:
        return sample_interarrival(source, self.rate)


@dataclass(frozen=True)
class DurationDistribution:
    """Truncated normal parking durations, in minutes."""

    mean: float
    std: float

    def __post_init__(self):
        if self.std <= 0:
            raise ConfigError(f"duration std must be positive, got {self.std}")
        if self.mean <= 0:
            raise ConfigError(f"duration mean must be positive, got {self.mean}")

    def sample(self, source: RandomSource) -> float:
        return sample_duration(source, self.mean, self.std)


@dataclass(frozen=True)
class VelocityRange:
    """Uniform cruising velocities, meters per minute."""

    low: float
    high: float

    def __post_init__(self):
        if not 0 < self.low <= self.high:
            raise ConfigError(
                f"need 0 < low <= high, got [{self.low}, {self.high})"
            )

    def sample(self, source: RandomSource) -> float:
        return sample_velocity(source, self.low, self.high)
