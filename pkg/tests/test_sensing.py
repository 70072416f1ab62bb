"""Scan-and-hold detection: schedules, staleness, and downsampling."""

from __future__ import annotations

from datetime import datetime

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parksim.sensing import (
    DetectedView,
    NoObservationError,
    SensingConfig,
    detect,
    downsample,
    last_scan_before,
)
from parksim.stochastic import ConfigError
from parksim.trace import OccupancyTrace

START = datetime(2018, 11, 12)


def bit_trace(pattern: str, resolution: int = 1) -> OccupancyTrace:
    """Single-spot trace from a string of 0/1 characters."""
    bits = np.array([[c == "1" for c in pattern]])
    return OccupancyTrace("t", START, resolution, ("s00",), bits)


def pattern_of(trace: OccupancyTrace, spot: int = 0) -> str:
    return "".join("1" if b else "0" for b in trace.occupancy[spot])


# SensingConfig


def test_config_fixed_flag():
    assert SensingConfig(0).fixed
    assert not SensingConfig(15).fixed


@pytest.mark.parametrize(
    "ds, offset",
    [(-1, 0), (10, -1), (10, 10), (10, 11), (0, 1), (2.5, 0), (10, 0.5)],
)
def test_config_rejects_bad_schedule(ds, offset):
    with pytest.raises(ConfigError):
        SensingConfig(ds, offset)


def test_config_offset_zero_allowed_for_fixed():
    assert SensingConfig(0, 0).scan_offset == 0


# last_scan_before


def test_last_scan_before():
    assert last_scan_before(10, 0, 0) == 0
    assert last_scan_before(10, 0, 9) == 0
    assert last_scan_before(10, 0, 10) == 10
    assert last_scan_before(10, 3, 2) == -1
    assert last_scan_before(10, 3, 3) == 3
    assert last_scan_before(10, 3, 12) == 3
    assert last_scan_before(10, 3, 13) == 13


# detect


def test_detect_fixed_is_truth():
    tr = bit_trace("0101")
    for t in range(4):
        view = detect(tr, SensingConfig(0), t)
        assert view.last_scan_time == t
        assert view.bits.tolist() == [t % 2 == 1]


def test_detect_holds_last_scan():
    tr = bit_trace("1110010001")
    cfg = SensingConfig(4)
    # scans at 0 (occupied) and 4 (free) and 8 (free)
    for t, want in [(0, 1), (3, 1), (4, 0), (7, 0), (8, 0), (9, 0)]:
        view = detect(tr, cfg, t)
        assert view.bits.tolist() == [bool(want)]
        assert view.last_scan_time == (t // 4) * 4


def test_detect_scan_instants_are_exact():
    tr = bit_trace("0110100110")
    cfg = SensingConfig(3, 1)
    for t in (1, 4, 7):
        assert detect(tr, cfg, t).bits.tolist() == [tr.occupancy[0, t]]
        assert detect(tr, cfg, t).last_scan_time == t


def test_detect_before_first_scan_raises():
    tr = bit_trace("0000000000")
    with pytest.raises(NoObservationError):
        detect(tr, SensingConfig(5, 3), 2)
    # fixed sensing has no blind window
    assert detect(tr, SensingConfig(0), 0).free_count == 1


def test_detect_out_of_horizon_raises():
    tr = bit_trace("01")
    with pytest.raises(IndexError):
        detect(tr, SensingConfig(0), 2)
    with pytest.raises(IndexError):
        detect(tr, SensingConfig(0), -1)


def test_detect_free_count_over_spots():
    bits = np.array([[True, False], [False, False], [True, True]])
    tr = OccupancyTrace("t", START, 1, ("a", "b", "c"), bits)
    assert detect(tr, SensingConfig(0), 0).free_count == 1
    assert detect(tr, SensingConfig(0), 1).free_count == 2


def test_detect_misaligned_resolution_rejected():
    tr = bit_trace("0101", resolution=5)
    with pytest.raises(ConfigError):
        detect(tr, SensingConfig(7), 0)
    with pytest.raises(ConfigError):
        detect(tr, SensingConfig(10, 3), 0)  # offset 3 min is 0.6 samples
    # aligned works, in sample units
    assert detect(tr, SensingConfig(10), 3).last_scan_time == 2
    assert detect(tr, SensingConfig(10, 5), 1).last_scan_time == 1


def test_view_free_count():
    assert DetectedView(np.array([True, False, False]), 0).free_count == 2


# downsample


def test_downsample_whole_window_hold():
    # a single scan at t=0 sees an occupied spot; held for the rest
    assert pattern_of(downsample(bit_trace("1110010001"), SensingConfig(10))) == (
        "1111111111"
    )


def test_downsample_two_minute_schedule():
    # scans read 1,1,0,0,0 at t=0,2,4,6,8; each held for two samples
    assert pattern_of(downsample(bit_trace("1110010001"), SensingConfig(2))) == (
        "1111000000"
    )


def test_downsample_offset_fills_blind_window_occupied():
    out = downsample(bit_trace("0000000000"), SensingConfig(4, 2))
    # samples 0,1 precede the first scan: conservatively occupied
    assert pattern_of(out) == "1100000000"


def test_downsample_fixed_is_identity_object():
    tr = bit_trace("0101")
    assert downsample(tr, SensingConfig(0)) is tr


def test_downsample_preserves_shape_and_metadata():
    tr = bit_trace("0101100110", resolution=1)
    out = downsample(tr, SensingConfig(5))
    assert out.spots == tr.spots
    assert out.start_time == tr.start_time
    assert out.resolution == tr.resolution
    assert out.n_samples == tr.n_samples


def test_downsample_does_not_mutate_input():
    tr = bit_trace("0000000000")
    downsample(tr, SensingConfig(4, 2))
    assert pattern_of(tr) == "0000000000"


traces = st.builds(
    bit_trace,
    st.text(alphabet="01", min_size=1, max_size=40),
)


@settings(max_examples=100, deadline=None)
@given(trace=traces, ds=st.integers(1, 12), offset=st.data())
def test_downsample_matches_detect_pointwise(trace, ds, offset):
    off = offset.draw(st.integers(0, ds - 1))
    cfg = SensingConfig(ds, off)
    out = downsample(trace, cfg)
    for t in range(trace.n_samples):
        if t < off:
            assert out.occupancy[0, t]  # blind window reads occupied
        else:
            assert out.occupancy[0, t] == detect(trace, cfg, t).bits[0]


@settings(max_examples=100, deadline=None)
@given(trace=traces, ds=st.integers(1, 12))
def test_downsample_idempotent(trace, ds):
    cfg = SensingConfig(ds)
    once = downsample(trace, cfg)
    again = downsample(once, cfg)
    assert again == once


@settings(max_examples=100, deadline=None)
@given(trace=traces)
def test_downsample_ds0_identity(trace):
    assert downsample(trace, SensingConfig(0)) == trace


@settings(max_examples=100, deadline=None)
@given(trace=traces, ds=st.integers(1, 12), t=st.data())
def test_detect_staleness_bound(trace, ds, t):
    cfg = SensingConfig(ds)
    at = t.draw(st.integers(0, trace.n_samples - 1))
    view = detect(trace, cfg, at)
    # the held view is never older than one full period
    assert 0 <= at - view.last_scan_time < ds
    assert view.bits.tolist() == trace.occupancy[:, view.last_scan_time].tolist()
