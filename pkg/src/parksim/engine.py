"""Discrete-event evaluation of parking decisions against ground truth.

run() simulates drivers arriving at a single-lane parking region. Each
driver decides at the entrance, from the detected free-space count and
the visible competition, whether to park; the simulation then tracks the
car to the spots and scores the decision against what actually happened
there. Scores accumulate into confusion counts per aggregation window
(weekly by default) and an overall prediction accuracy.

Two modes:

  TraceDriven   ground truth is an external occupancy trace; simulated
                drivers are probes that never change it. This evaluates a
                sensing solution against recorded reality.
  ClosedLoop    the engine owns the occupancy: cars that park hold a spot
                for a drawn duration. This synthesizes ground truth from
                nothing and supports self-consistent experiments.

The hot loop lives in a compiled extension (parksim._kernel) with a pure
Python twin (parksim._kernel_py) used when the extension is unavailable
or PARKSIM_PURE_PYTHON=1. Both consume identical pre-drawn input arrays
and produce bit-identical outputs; everything in this module is shared
between them, so a run is reproducible regardless of which kernel ran it.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from datetime import datetime
from heapq import heappop, heappush
from typing import Iterator

import numpy as np

from . import _kernel_py
from .decision import Decision, DecisionInputs, decide
from .sensing import SensingConfig, downsample
from .stochastic import (
    ArrivalProcess,
    ConfigError,
    DurationDistribution,
    RandomSource,
    VelocityRange,
)
from .trace import OccupancyTrace

EVENT_LOG_HEADER = "time,event,car_id,n_c,d_r,v_c,v_min,d_m,outcome"

# Default trace start for synthesized ground truth: a Monday, so weekly
# aggregation windows align with calendar weeks.
DEFAULT_TRACE_START = datetime(2018, 11, 12)


def _use_pure_python() -> bool:
    return os.environ.get("PARKSIM_PURE_PYTHON", "") not in ("", "0")


if _use_pure_python():
    _kernel = _kernel_py
    KERNEL_IMPL = "python"
else:
    try:
        from . import _kernel  # type: ignore[no-redef]

        KERNEL_IMPL = "compiled"
    except ImportError:
        _kernel = _kernel_py
        KERNEL_IMPL = "python"


def active_kernel() -> str:
    """Which kernel run() dispatches to: "compiled" or "python"."""
    return KERNEL_IMPL


class Mode(enum.Enum):
    """Where ground truth comes from."""

    TRACE_DRIVEN = "trace"
    CLOSED_LOOP = "closed-loop"


class Outcome(enum.Enum):
    """What actually happened to a decision, and its confusion cell."""

    PARKED = "Parked"  # decided to park, found a spot: TP
    FAILED_TO_PARK = "FailedToPark"  # decided to park, no spot left: FP
    DECLINED_COULD_HAVE = "DeclinedCouldHave"  # passed, but a spot was there: FN
    DECLINED_CORRECTLY = "DeclinedCorrectly"  # passed, and rightly so: TN

    def __str__(self) -> str:
        return self.value

    @property
    def correct(self) -> bool:
        return self in (Outcome.PARKED, Outcome.DECLINED_CORRECTLY)


# Outcome codes used by the kernels, in confusion-cell order.
_OUTCOME_BY_CODE = (
    Outcome.PARKED,
    Outcome.FAILED_TO_PARK,
    Outcome.DECLINED_COULD_HAVE,
    Outcome.DECLINED_CORRECTLY,
)


class NoDataError(ValueError):
    """Accuracy requested over zero resolved decisions."""


@dataclass(frozen=True)
class ConfusionCounts:
    """Resolved-decision tallies: tp + tn + fp + fn decisions total."""

    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp,
            self.tn + other.tn,
            self.fp + other.fp,
            self.fn + other.fn,
        )


def accuracy(counts: ConfusionCounts) -> float:
    """Prediction accuracy (tp + tn) / total.

    An empty window has no accuracy; that is a NoDataError, never 0/0.
    """
    if counts.total == 0:
        raise NoDataError("no resolved decisions to score")
    return (counts.tp + counts.tn) / counts.total


def resolve_outcome(d_m: int, free_spaces: int, competitors_ahead: int = 0) -> Outcome:
    """Judge one decision at its (possibly hypothetical) spot-reach time.

    A parker gets a spot when more spaces are free than competitors stand
    ahead of it; a decliner is scored against the same test it would have
    faced. competitors_ahead counts searching cars with earlier effective
    reach times that have already claimed a space at this instant.
    """
    if free_spaces < 0 or competitors_ahead < 0:
        raise ValueError("free_spaces and competitors_ahead must be >= 0")
    would_park = free_spaces > competitors_ahead
    if d_m == 1:
        return Outcome.PARKED if would_park else Outcome.FAILED_TO_PARK
    if d_m == 0:
        return Outcome.DECLINED_COULD_HAVE if would_park else Outcome.DECLINED_CORRECTLY
    raise ValueError(f"d_m must be 0 or 1, got {d_m}")


def effective_spot_reach(
    entry_time: float, travel_time: float, predecessor_reach: float | None = None
) -> float:
    """When the car actually gets to the spots, single lane, no overtaking.

    Own reach is entry_time + travel_time; a predecessor still on its way
    clamps it from below, so effective reach times are non-decreasing in
    entry order.
    """
    reach = entry_time + travel_time
    if predecessor_reach is not None and reach < predecessor_reach:
        return predecessor_reach
    return reach


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a run needs besides the ground-truth trace itself.

    Rates are per minute, durations in minutes, lengths in meters,
    velocities in meters per minute. ``spots`` is the region capacity and
    belongs to ClosedLoop only; TraceDriven reads capacity from the
    trace. ``exclude_warmup`` drops decisions made before the first
    mobile scan from the accuracy counts (they stay in the event log).
    """

    arrival_rate: float = 0.2
    duration_mean: float = 45.0
    duration_std: float = 15.0
    sensing: SensingConfig = field(default_factory=lambda: SensingConfig(0))
    region_length: float = 200.0
    v_low: float = 100.0
    v_high: float = 700.0
    horizon: int = 110_880  # 11 weeks of minutes
    window: int = 10_080  # one week of minutes
    seed: int = 0
    mode: Mode = Mode.TRACE_DRIVEN
    spots: int | None = None
    exclude_warmup: bool = False

    def __post_init__(self):
        # the distribution types own the parameter domain checks
        ArrivalProcess(self.arrival_rate)
        DurationDistribution(self.duration_mean, self.duration_std)
        VelocityRange(self.v_low, self.v_high)
        if not isinstance(self.sensing, SensingConfig):
            raise ConfigError("sensing must be a SensingConfig")
        if self.region_length <= 0:
            raise ConfigError(f"region_length must be positive, got {self.region_length}")
        if not (
            isinstance(self.horizon, int)
            and isinstance(self.window, int)
            and self.horizon >= self.window >= 1
        ):
            raise ConfigError(
                f"need horizon >= window >= 1, got horizon={self.horizon} "
                f"window={self.window}"
            )
        if self.mode is Mode.CLOSED_LOOP:
            if not (isinstance(self.spots, int) and self.spots >= 1):
                raise ConfigError("ClosedLoop needs spots >= 1")
        elif self.spots is not None:
            raise ConfigError("spots is a ClosedLoop parameter; TraceDriven reads the trace")

    @property
    def n_windows(self) -> int:
        return -(-self.horizon // self.window)


@dataclass(frozen=True)
class ArrivalBatch:
    """Pre-drawn car stream: entry times (minutes), velocities (m/min),
    and parking durations (minutes, ClosedLoop only)."""

    entry_times: np.ndarray
    velocities: np.ndarray
    durations: np.ndarray | None = None

    def __post_init__(self):
        entry = np.ascontiguousarray(self.entry_times, dtype=np.float64)
        vel = np.ascontiguousarray(self.velocities, dtype=np.float64)
        if entry.ndim != 1 or vel.shape != entry.shape:
            raise ConfigError("entry_times and velocities must be 1-d, same length")
        if len(entry) and (np.any(np.diff(entry) < 0) or entry[0] < 0):
            raise ConfigError("entry_times must be non-negative and non-decreasing")
        if np.any(vel <= 0):
            raise ConfigError("velocities must be positive")
        object.__setattr__(self, "entry_times", entry)
        object.__setattr__(self, "velocities", vel)
        if self.durations is not None:
            dur = np.ascontiguousarray(self.durations, dtype=np.float64)
            if dur.shape != entry.shape:
                raise ConfigError("durations must match entry_times in length")
            if np.any(dur <= 0):
                raise ConfigError("durations must be positive")
            object.__setattr__(self, "durations", dur)

    def __len__(self) -> int:
        return len(self.entry_times)


def draw_arrivals(cfg: ScenarioConfig) -> ArrivalBatch:
    """Draw the car stream for a scenario from its seed.

    Per car, in this fixed order: interarrival gap, velocity, and (only
    in ClosedLoop) parking duration. The order is part of the
    reproducibility contract; changing it changes every seeded result.
    """
    source = RandomSource(cfg.seed)
    arrivals = ArrivalProcess(cfg.arrival_rate)
    velocity = VelocityRange(cfg.v_low, cfg.v_high)
    closed_loop = cfg.mode is Mode.CLOSED_LOOP
    duration = (
        DurationDistribution(cfg.duration_mean, cfg.duration_std)
        if closed_loop
        else None
    )
    entry: list[float] = []
    vel: list[float] = []
    dur: list[float] = []
    t = 0.0
    while True:
        t += arrivals.sample_gap(source)
        if t >= cfg.horizon:
            break
        entry.append(t)
        vel.append(velocity.sample(source))
        if duration is not None:
            dur.append(duration.sample(source))
    return ArrivalBatch(
        entry_times=np.asarray(entry),
        velocities=np.asarray(vel),
        durations=np.asarray(dur) if duration is not None else None,
    )


def _per_minute_free(trace: OccupancyTrace, cfg: ScenarioConfig):
    """(truth_free, det_free) per minute over cfg.horizon.

    det_free is the scan-and-hold view; minutes before the first mobile
    scan hold -1, the kernels' "no observation yet" marker.
    """
    if trace.horizon_minutes < cfg.horizon:
        raise ConfigError(
            f"trace covers {trace.horizon_minutes} min but the scenario "
            f"needs {cfg.horizon}"
        )
    free = (trace.n_spots - np.count_nonzero(trace.occupancy, axis=0)).astype(np.int32)
    truth = np.repeat(free, trace.resolution)[: cfg.horizon]
    detected = downsample(trace, cfg.sensing)
    det_free = (
        detected.n_spots - np.count_nonzero(detected.occupancy, axis=0)
    ).astype(np.int32)
    det = np.repeat(det_free, trace.resolution)[: cfg.horizon].copy()
    if not cfg.sensing.fixed:
        det[: cfg.sensing.scan_offset] = -1
    return np.ascontiguousarray(truth), np.ascontiguousarray(det)


@dataclass(frozen=True)
class CarRecords:
    """Per-car inputs and results, parallel arrays indexed by car id."""

    entry_times: np.ndarray
    velocities: np.ndarray
    durations: np.ndarray | None
    n_c: np.ndarray
    d_r: np.ndarray
    warmup: np.ndarray
    v_min: np.ndarray
    d_m: np.ndarray
    outcome: np.ndarray
    resolution_times: np.ndarray

    def __len__(self) -> int:
        return len(self.entry_times)


@dataclass(frozen=True)
class WindowStats:
    """One aggregation window's tallies; p_a is None when it saw no data."""

    index: int
    counts: ConfusionCounts

    @property
    def p_a(self) -> float | None:
        return accuracy(self.counts) if self.counts.total else None


@dataclass(frozen=True)
class AccuracyReport:
    """Per-window and overall confusion counts for one run."""

    windows: tuple[WindowStats, ...]
    overall: ConfusionCounts
    excluded_warmup: int = 0

    @property
    def overall_p_a(self) -> float | None:
        return accuracy(self.overall) if self.overall.total else None

    def require_p_a(self) -> float:
        return accuracy(self.overall)


@dataclass(frozen=True)
class RunResult:
    """Everything a finished run knows: report, audit trail, raw records."""

    config: ScenarioConfig
    report: AccuracyReport
    cars: CarRecords

    def event_log_rows(self) -> Iterator[tuple]:
        """Decision and resolution rows in event order.

        Events sharing an instant order resolutions before decisions,
        matching the simulation's own tie-breaking (SpotReach before
        Arrival), then by car id (push order in the kernels).
        """
        cars = self.cars
        merged = []
        for car in range(len(cars)):
            ev = "warmup_decision" if cars.warmup[car] else "decision"
            merged.append((float(cars.entry_times[car]), 3, car, ev))
            merged.append((float(cars.resolution_times[car]), 2, car, "resolution"))
        merged.sort(key=lambda rec: (rec[0], rec[1], rec[2]))
        for t, _, car, ev in merged:
            if ev == "resolution":
                yield (
                    t,
                    ev,
                    car,
                    None,
                    None,
                    None,
                    None,
                    int(cars.d_m[car]),
                    _OUTCOME_BY_CODE[cars.outcome[car]],
                )
            else:
                vmin = float(cars.v_min[car])
                yield (
                    t,
                    ev,
                    car,
                    int(cars.n_c[car]),
                    int(cars.d_r[car]),
                    float(cars.velocities[car]),
                    None if math.isnan(vmin) else vmin,
                    int(cars.d_m[car]),
                    None,
                )

    def event_log_csv(self) -> str:
        def fmt(v) -> str:
            if v is None:
                return ""
            if isinstance(v, float):
                return repr(v)
            return str(v)

        lines = [EVENT_LOG_HEADER]
        lines.extend(",".join(fmt(v) for v in row) for row in self.event_log_rows())
        lines.append("")
        return "\n".join(lines)

    def decisions(self) -> Iterator[tuple[int, DecisionInputs, Decision]]:
        """(car id, inputs the driver saw, decision replayed through decide()).

        The kernels inline the decision rule for speed; replaying the
        logged inputs through the public decide() and comparing d_m
        against cars.d_m is how tests hold the two routes together.
        """
        cars = self.cars
        for car in range(len(cars)):
            vmin = float(cars.v_min[car])
            inputs = DecisionInputs(
                n_c=int(cars.n_c[car]),
                d_r=int(cars.d_r[car]),
                v_c=float(cars.velocities[car]),
                v_min=None if math.isnan(vmin) else vmin,
            )
            yield car, inputs, decide(inputs)

    def occupancy_trace(
        self,
        start_time: datetime = DEFAULT_TRACE_START,
        region_id: str = "synthesized",
    ) -> OccupancyTrace:
        """Ground truth this ClosedLoop run produced, as a 1-min trace.

        Parked cars are assigned to the lowest-numbered free spot, the
        same order the live free count was consumed in, so the trace
        reproduces the run's occupancy exactly. A spot is occupied at
        minute m when some car's stay covers the instant m.
        """
        cfg = self.config
        if cfg.mode is not Mode.CLOSED_LOOP:
            raise ConfigError("occupancy_trace needs a ClosedLoop run")
        cars = self.cars
        stays = _kernel_py.parked_intervals(
            cars.d_m, cars.outcome, cars.resolution_times, cars.durations
        )
        bits = np.zeros((cfg.spots, cfg.horizon), dtype=bool)
        free_ids = list(range(cfg.spots))  # heap of free spot numbers
        busy: list[tuple[float, int]] = []  # (depart_time, spot)
        for _, park, depart in stays:
            while busy and busy[0][0] <= park:
                heappush(free_ids, heappop(busy)[1])
            spot = heappop(free_ids)
            heappush(busy, (depart, spot))
            lo = math.ceil(park)
            hi = min(math.ceil(depart), cfg.horizon)
            if lo < hi:
                bits[spot, lo:hi] = True
        width = max(2, len(str(cfg.spots - 1)))
        return OccupancyTrace(
            region_id=region_id,
            start_time=start_time,
            resolution=1,
            spots=tuple(f"s{i:0{width}d}" for i in range(cfg.spots)),
            occupancy=bits,
        )


def _aggregate(
    cfg: ScenarioConfig, entry_times: np.ndarray, outcome: np.ndarray, warmup: np.ndarray
) -> AccuracyReport:
    nw = cfg.n_windows
    excluded = 0
    if cfg.exclude_warmup:
        keep = warmup == 0
        excluded = int(len(entry_times) - np.count_nonzero(keep))
        entry_times = entry_times[keep]
        outcome = outcome[keep]
    widx = np.minimum((entry_times / cfg.window).astype(np.int64), nw - 1)
    cells = np.bincount(widx * 4 + outcome, minlength=nw * 4).reshape(nw, 4)
    windows = tuple(
        WindowStats(
            index=w,
            counts=ConfusionCounts(
                tp=int(cells[w, 0]),
                fp=int(cells[w, 1]),
                fn=int(cells[w, 2]),
                tn=int(cells[w, 3]),
            ),
        )
        for w in range(nw)
    )
    overall = ConfusionCounts(
        tp=int(cells[:, 0].sum()),
        fp=int(cells[:, 1].sum()),
        fn=int(cells[:, 2].sum()),
        tn=int(cells[:, 3].sum()),
    )
    return AccuracyReport(windows=windows, overall=overall, excluded_warmup=excluded)


def run(
    cfg: ScenarioConfig,
    trace: OccupancyTrace | None = None,
    arrivals: ArrivalBatch | None = None,
) -> RunResult:
    """Simulate one scenario and score every decision it produced.

    TraceDriven requires ``trace`` (ground truth to probe); ClosedLoop
    forbids it. ``arrivals`` overrides the seeded car stream, which tests
    use to replay hand-built scenarios; everyone else lets the seed draw
    it. Deterministic: identical (cfg, trace, arrivals) give identical
    results and event logs, whichever kernel is active.
    """
    if cfg.mode is Mode.TRACE_DRIVEN:
        if trace is None:
            raise ConfigError("TraceDriven requires a ground-truth trace")
    elif trace is not None:
        raise ConfigError("ClosedLoop owns its occupancy; no trace allowed")

    if arrivals is None:
        arrivals = draw_arrivals(cfg)
    if len(arrivals) and arrivals.entry_times[-1] >= cfg.horizon:
        raise ConfigError("entry times must fall inside the horizon")
    closed_loop = cfg.mode is Mode.CLOSED_LOOP
    if closed_loop and arrivals.durations is None and len(arrivals):
        raise ConfigError("ClosedLoop arrivals need durations")

    if closed_loop:
        n_c, d_r, warmup, v_min, d_m, outcome, rtime = _kernel.simulate_closed_loop(
            arrivals.entry_times,
            arrivals.velocities,
            arrivals.durations
            if arrivals.durations is not None
            else np.zeros(0, dtype=np.float64),
            cfg.spots,
            cfg.region_length,
            cfg.sensing.schedule_ds,
            cfg.sensing.scan_offset,
            cfg.horizon,
        )
    else:
        truth_free, det_free = _per_minute_free(trace, cfg)
        n_c, d_r, warmup, v_min, d_m, outcome, rtime = _kernel.simulate_trace_driven(
            arrivals.entry_times,
            arrivals.velocities,
            cfg.region_length,
            truth_free,
            det_free,
            cfg.horizon,
        )

    report = _aggregate(cfg, arrivals.entry_times, outcome, warmup)
    cars = CarRecords(
        entry_times=arrivals.entry_times,
        velocities=arrivals.velocities,
        durations=arrivals.durations,
        n_c=n_c,
        d_r=d_r,
        warmup=warmup,
        v_min=v_min,
        d_m=d_m,
        outcome=outcome,
        resolution_times=rtime,
    )
    return RunResult(config=cfg, report=report, cars=cars)
