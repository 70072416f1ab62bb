"""Pure-Python simulation kernel: the readable reference implementation.

parksim._kernel is the compiled twin of this module. Both consume
pre-drawn input arrays (arrival times, velocities, durations) and both
confine themselves to the same IEEE-754 arithmetic on them, so their
outputs agree bit for bit; the parity test suite holds them to that. Keep
the two in lockstep: a semantic change here without the mirror change
there (or vice versa) is a bug even if tests happen to pass.

Parity rules, shared with the compiled kernel:
  - minute lookups truncate with int(t) / a C long cast, never floor
    division on floats (Python's ``//`` rounds differently from C's
    ``(long)(a / b)`` in the last bit for some quotients);
  - every float that reaches an output array is produced by +, max and /
    on the inputs, in the same order in both kernels;
  - all randomness is drawn by the caller, up front.

Event model. Four event kinds, processed in time order; equal times are
broken by kind rank, then by push order:

    Departure(0) < Scan(1) < SpotReach(2) < Arrival(3)

Departures free spots before same-instant contenders claim them; scans
refresh the detected view before same-instant arrivals read it. Window
bookkeeping is not an event: decisions are attributed to windows by
entry time, in the aggregation layer.

A car's life: at its Arrival the decision inputs (n_c, d_r, v_c, v_min)
are read from the region state and the park-or-pass rule fires. A parker
joins the searching queue and physically reaches the spots at
max(own reach, predecessor's reach): single lane, no overtaking. A
decliner never enters, but a SpotReach-ranked probe event is still
scheduled at its unclamped hypothetical reach time so the decision can be
judged against what it passed up. At resolution, a parker finds out
whether a spot is actually free (Parked vs FailedToPark) and a decliner
whether one would have been (DeclinedCouldHave vs DeclinedCorrectly).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from heapq import heappop, heappush

import numpy as np

# Event kind codes double as the equal-time rank.
EV_DEPARTURE = 0
EV_SCAN = 1
EV_REACH = 2
EV_ARRIVAL = 3

# Outcome codes shared with the compiled kernel and the engine.
OUT_PARKED = 0  # true positive
OUT_FAILED_TO_PARK = 1  # false positive
OUT_DECLINED_COULD_HAVE = 2  # false negative
OUT_DECLINED_CORRECTLY = 3  # true negative


@dataclass
class RegionState:
    """Mutable state of the street while the simulation runs.

    ``searching`` holds the velocities of cars that committed to park and
    have not yet reached the spots, oldest first; removals happen in
    arrival order because effective reach times are non-decreasing under
    the no-overtake clamp. ``v_floor`` is the classic monotone min-queue
    over ``searching``: its head is always min(searching).
    """

    searching: deque = field(default_factory=deque)
    v_floor: deque = field(default_factory=deque)
    tail_reach: float = -math.inf  # latest effective reach among parkers
    occupied: int = 0  # ClosedLoop only
    inflow: int = 0  # cars that entered the region
    outflow: int = 0  # cars that left it (parked or failed)

    @property
    def n_searching(self) -> int:
        return len(self.searching)

    @property
    def v_min(self) -> float:
        return self.v_floor[0]

    def add_searcher(self, v: float) -> None:
        self.searching.append(v)
        while self.v_floor and self.v_floor[-1] > v:
            self.v_floor.pop()
        self.v_floor.append(v)
        self.inflow += 1

    def pop_searcher(self) -> None:
        v = self.searching.popleft()
        if self.v_floor[0] == v:
            self.v_floor.popleft()
        self.outflow += 1


def _alloc(n: int):
    return (
        np.zeros(n, dtype=np.int32),  # n_c
        np.zeros(n, dtype=np.int32),  # d_r (as shown to the driver)
        np.zeros(n, dtype=np.uint8),  # warmup flag
        np.full(n, math.nan),  # v_min (nan when n_c = 0)
        np.zeros(n, dtype=np.uint8),  # d_m
        np.zeros(n, dtype=np.uint8),  # outcome code
        np.zeros(n, dtype=np.float64),  # resolution time
    )


def simulate_trace_driven(
    entry_times: np.ndarray,
    velocities: np.ndarray,
    region_length: float,
    truth_free: np.ndarray,
    det_free: np.ndarray,
    horizon: int,
):
    """Probe drivers against a fixed ground-truth trace.

    truth_free and det_free are per-minute free-space counts of length
    ``horizon``; det_free uses -1 for minutes before the first scan (no
    observation yet: the driver is shown 0 and the decision is flagged
    warm-up). Probes are ghosts: they never change the trace, so
    same-instant resolution ties count how many earlier probes already
    claimed a space at that exact instant.
    """
    n = len(entry_times)
    n_c, d_r, warmup, v_min, d_m, outcome, rtime = _alloc(n)
    if n == 0:
        return n_c, d_r, warmup, v_min, d_m, outcome, rtime

    state = RegionState()
    heap: list[tuple[float, int, int, int]] = []
    seq = 0
    heappush(heap, (entry_times[0], EV_ARRIVAL, seq, 0))
    seq += 1

    last_res_time = math.nan
    claimed_here = 0  # spaces claimed at exactly last_res_time
    resolved = 0

    while heap:
        t, kind, _, car = heappop(heap)

        if kind == EV_ARRIVAL:
            if car + 1 < n:
                heappush(heap, (entry_times[car + 1], EV_ARRIVAL, seq, car + 1))
                seq += 1
            det = int(det_free[int(t)])
            warm = det < 0
            shown = 0 if warm else det
            nc = state.n_searching
            vmin = state.v_min if nc else math.nan
            # park-or-pass rule, inlined to keep the hot loop flat
            if nc >= shown:
                dm = 0
            elif nc > 0 and vmin > velocities[car]:
                dm = 0
            else:
                dm = 1
            n_c[car] = nc
            d_r[car] = shown
            warmup[car] = warm
            v_min[car] = vmin
            d_m[car] = dm
            t_c = region_length / velocities[car]
            if dm:
                reach = t + t_c
                if reach < state.tail_reach:
                    reach = state.tail_reach
                state.tail_reach = reach
                state.add_searcher(velocities[car])
                heappush(heap, (reach, EV_REACH, seq, car))
            else:
                heappush(heap, (t + t_c, EV_REACH, seq, car))
            seq += 1

        else:  # EV_REACH: real spot arrival or a decliner's probe
            if d_m[car]:
                state.pop_searcher()
            minute = int(t)
            if minute >= horizon:
                minute = horizon - 1
            free = int(truth_free[minute])
            if t != last_res_time:
                last_res_time = t
                claimed_here = 0
            ahead = claimed_here
            if d_m[car]:
                if free > ahead:
                    outcome[car] = OUT_PARKED
                    claimed_here += 1
                else:
                    outcome[car] = OUT_FAILED_TO_PARK
            else:
                if free > ahead:
                    outcome[car] = OUT_DECLINED_COULD_HAVE
                else:
                    outcome[car] = OUT_DECLINED_CORRECTLY
            rtime[car] = t
            resolved += 1
            if resolved == n:
                break

    return n_c, d_r, warmup, v_min, d_m, outcome, rtime


def simulate_closed_loop(
    entry_times: np.ndarray,
    velocities: np.ndarray,
    durations: np.ndarray,
    spots: int,
    region_length: float,
    schedule_ds: int,
    scan_offset: int,
    horizon: int,
):
    """Self-contained street: parked cars occupy spots for their duration.

    Detection: schedule_ds = 0 reads the live free count (fixed sensing);
    otherwise the count captured by the most recent scan event, with -1
    (no scan yet) shown as 0 and flagged warm-up. Live occupancy makes
    same-instant competition bookkeeping unnecessary: each Parked car
    decrements the free count before the next event is processed.
    """
    n = len(entry_times)
    n_c, d_r, warmup, v_min, d_m, outcome, rtime = _alloc(n)
    if n == 0:
        return n_c, d_r, warmup, v_min, d_m, outcome, rtime

    state = RegionState()
    heap: list[tuple[float, int, int, int]] = []
    seq = 0
    if schedule_ds > 0 and scan_offset < horizon:
        heappush(heap, (float(scan_offset), EV_SCAN, seq, -1))
        seq += 1
    heappush(heap, (entry_times[0], EV_ARRIVAL, seq, 0))
    seq += 1

    det_latest = -1  # last scanned free count; -1 before the first scan
    resolved = 0

    while heap:
        t, kind, _, car = heappop(heap)

        if kind == EV_ARRIVAL:
            if car + 1 < n:
                heappush(heap, (entry_times[car + 1], EV_ARRIVAL, seq, car + 1))
                seq += 1
            if schedule_ds == 0:
                det = spots - state.occupied
            else:
                det = det_latest
            warm = det < 0
            shown = 0 if warm else det
            nc = state.n_searching
            vmin = state.v_min if nc else math.nan
            if nc >= shown:
                dm = 0
            elif nc > 0 and vmin > velocities[car]:
                dm = 0
            else:
                dm = 1
            n_c[car] = nc
            d_r[car] = shown
            warmup[car] = warm
            v_min[car] = vmin
            d_m[car] = dm
            t_c = region_length / velocities[car]
            if dm:
                reach = t + t_c
                if reach < state.tail_reach:
                    reach = state.tail_reach
                state.tail_reach = reach
                state.add_searcher(velocities[car])
                heappush(heap, (reach, EV_REACH, seq, car))
            else:
                heappush(heap, (t + t_c, EV_REACH, seq, car))
            seq += 1

        elif kind == EV_REACH:
            if d_m[car]:
                state.pop_searcher()
            free = spots - state.occupied
            if d_m[car]:
                if free > 0:
                    outcome[car] = OUT_PARKED
                    state.occupied += 1
                    heappush(heap, (t + durations[car], EV_DEPARTURE, seq, car))
                    seq += 1
                else:
                    outcome[car] = OUT_FAILED_TO_PARK
            else:
                if free > 0:
                    outcome[car] = OUT_DECLINED_COULD_HAVE
                else:
                    outcome[car] = OUT_DECLINED_CORRECTLY
            rtime[car] = t
            resolved += 1
            if resolved == n:
                break

        elif kind == EV_SCAN:
            det_latest = spots - state.occupied
            nxt = t + schedule_ds
            if nxt < horizon:
                heappush(heap, (nxt, EV_SCAN, seq, -1))
                seq += 1

        else:  # EV_DEPARTURE
            state.occupied -= 1

    return n_c, d_r, warmup, v_min, d_m, outcome, rtime


def parked_intervals(d_m, outcome, rtime, durations):
    """(car, park_time, depart_time) for every car that parked, by park time.

    Shared post-processing for trace synthesis; spot assignment happens in
    the engine, not here.
    """
    out = []
    for car in range(len(d_m)):
        if d_m[car] and outcome[car] == OUT_PARKED:
            out.append((car, float(rtime[car]), float(rtime[car] + durations[car])))
    out.sort(key=lambda rec: (rec[1], rec[0]))
    return out
