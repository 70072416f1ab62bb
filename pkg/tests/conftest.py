"""Shared fixtures: tiny hand-checkable traces and the committed day trace."""

from __future__ import annotations

import pathlib
from datetime import datetime

import numpy as np
import pytest

from parksim.trace import OccupancyTrace, load_trace

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> pathlib.Path:
    return DATA_DIR


@pytest.fixture()
def micro_trace() -> OccupancyTrace:
    """One always-free spot for eleven minutes."""
    return OccupancyTrace(
        region_id="micro",
        start_time=datetime(2018, 11, 12),
        resolution=1,
        spots=("s00",),
        occupancy=np.zeros((1, 11), dtype=bool),
    )


@pytest.fixture(scope="session")
def day_trace() -> OccupancyTrace:
    """Committed one-day 4-spot trace (tests/data/street_day.csv)."""
    return load_trace(DATA_DIR / "street_day.csv")
