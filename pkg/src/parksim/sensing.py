"""Detected free-space views under fixed or scheduled mobile sensing.

Fixed sensing (one sensor per spot) sees ground truth continuously. A
mobile sensing fleet instead sweeps the whole region once every
``schedule_ds`` minutes, so between passes the detected state is the last
scan, held. ``schedule_ds = 0`` means fixed sensing and both operations
collapse to the identity.

Scans are atomic over the region: one pass observes every spot at the
same instant. Queries earlier than the first scan have no data to stand
on and raise NoObservationError; the simulation engine maps that case to
"zero spaces detected" and flags the affected decisions as warm-up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stochastic import ConfigError
from .trace import OccupancyTrace


class NoObservationError(LookupError):
    """Query time precedes the first scan; no detected state exists yet."""


@dataclass(frozen=True)
class SensingConfig:
    """Detection schedule: a scan every schedule_ds minutes.

    ``schedule_ds = 0`` selects fixed sensing (continuous ground truth).
    ``scan_offset`` places the scan inside each period; the default 0
    scans the first minute of every period.
    """

    schedule_ds: int
    scan_offset: int = 0

    def __post_init__(self):
        if not isinstance(self.schedule_ds, int) or self.schedule_ds < 0:
            raise ConfigError(
                f"schedule_ds must be a non-negative integer, got {self.schedule_ds!r}"
            )
        if not isinstance(self.scan_offset, int) or not (
            0 <= self.scan_offset < max(self.schedule_ds, 1)
        ):
            raise ConfigError(
                f"scan_offset must lie in [0, {max(self.schedule_ds, 1)}), "
                f"got {self.scan_offset!r}"
            )

    @property
    def fixed(self) -> bool:
        return self.schedule_ds == 0


@dataclass(frozen=True)
class DetectedView:
    """What the sensing solution believes at one instant.

    ``bits[i]`` is the detected occupancy of ``spots[i]`` (True =
    occupied), all observed together at ``last_scan_time`` (a sample
    index, <= the queried time).
    """

    bits: np.ndarray
    last_scan_time: int

    @property
    def free_count(self) -> int:
        """Detected number of free spots (the D_r a driver is shown)."""
        return int(self.bits.size - np.count_nonzero(self.bits))


def _schedule_in_samples(trace: OccupancyTrace, cfg: SensingConfig) -> tuple[int, int]:
    """Convert the minute-based schedule to trace sample units."""
    res = trace.resolution
    if cfg.schedule_ds % res != 0 or cfg.scan_offset % res != 0:
        raise ConfigError(
            f"schedule_ds={cfg.schedule_ds} and scan_offset={cfg.scan_offset} "
            f"must be multiples of the trace resolution ({res} min)"
        )
    return cfg.schedule_ds // res, cfg.scan_offset // res


def last_scan_before(cfg_ds: int, offset: int, t: int) -> int:
    """Most recent scan instant at or before sample ``t``; -1 if none yet."""
    if t < offset:
        return -1
    return offset + ((t - offset) // cfg_ds) * cfg_ds


def detect(trace: OccupancyTrace, cfg: SensingConfig, t: int) -> DetectedView:
    """Detected occupancy at sample index ``t``.

    Fixed sensing returns ground truth at ``t``. Mobile sensing returns
    ground truth at the latest scan instant <= t. Raises IndexError for
    ``t`` outside the horizon and NoObservationError when ``t`` precedes
    the first scan.
    """
    if not 0 <= t < trace.n_samples:
        raise IndexError(f"sample index {t} outside trace horizon [0, {trace.n_samples})")
    if cfg.fixed:
        return DetectedView(bits=trace.occupancy[:, t].copy(), last_scan_time=t)
    ds, offset = _schedule_in_samples(trace, cfg)
    if t < offset:
        raise NoObservationError(
            f"no scan has happened by sample {t}; first scan is at {offset}"
        )
    s = offset + ((t - offset) // ds) * ds
    return DetectedView(bits=trace.occupancy[:, s].copy(), last_scan_time=s)


def downsample(trace: OccupancyTrace, cfg: SensingConfig) -> OccupancyTrace:
    """The trace as the sensing solution perceives it, same shape.

    Every sample is replaced by the ground truth at the most recent scan
    instant (scan-and-hold). Samples before the first scan carry no
    observation; they are filled as occupied, the conservative stance the
    engine also takes (it shows drivers zero detected spaces until the
    first pass). Fixed sensing returns the input unchanged. Idempotent
    for a fixed schedule: downsampling a downsampled trace is a no-op.
    """
    if cfg.fixed:
        return trace
    ds, offset = _schedule_in_samples(trace, cfg)
    n = trace.n_samples
    idx = np.arange(n)
    held = offset + ((idx - offset) // ds) * ds
    observed = idx >= offset
    src = np.where(observed, held, 0)
    bits = trace.occupancy[:, src]
    bits[:, ~observed] = True
    return OccupancyTrace(
        region_id=trace.region_id,
        start_time=trace.start_time,
        resolution=trace.resolution,
        spots=trace.spots,
        occupancy=bits,
    )
