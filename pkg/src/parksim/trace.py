"""Ground-truth parking occupancy traces.

A trace is a rectangular grid of boolean occupancy samples: one row per
parking spot, one column per sample instant, at a fixed resolution in
minutes. Traces are the ground truth that sensing solutions are scored
against; they are immutable after construction and safe to share between
concurrent runs.

File format (long form, one sample per row)::

    timestamp,spot_id,occupied
    2018-11-12T08:00,s00,1
    2018-11-12T08:00,s01,0
    ...

Timestamps are ISO-8601 at minute precision, ``occupied`` is 0 (free) or
1 (occupied), the cadence must be uniform for every spot and identical
across spots. Row order does not matter. Missing samples are an error,
never interpolated: silently filling gaps would corrupt the ground truth.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import datetime, timedelta

import numpy as np

TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M"
CSV_HEADER = "timestamp,spot_id,occupied"

# Reference instant for integer minute arithmetic on naive timestamps.
# Pure datetime subtraction keeps parsing independent of the host timezone.
_EPOCH = datetime(2000, 1, 1)


def _to_minute(ts: datetime) -> int:
    return (ts - _EPOCH) // timedelta(minutes=1)


def _from_minute(minute: int) -> datetime:
    return _EPOCH + timedelta(minutes=minute)


class TraceParseError(ValueError):
    """Raised for malformed or inconsistent trace documents.

    ``line`` is the 1-based line number of the offending row when one can
    be pinpointed, else None.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class OccupancyTrace:
    """Per-spot boolean occupancy series at fixed resolution.

    ``occupancy[i, k]`` is True when spot ``spots[i]`` is occupied at
    sample ``k``, i.e. at ``start_time + k * resolution`` minutes. Spot
    ids are normalized to lexicographic order at construction so that a
    trace's identity does not depend on file row order.
    """

    region_id: str
    start_time: datetime
    resolution: int  # minutes per sample
    spots: tuple[str, ...]
    occupancy: np.ndarray  # bool, shape (len(spots), n_samples)

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError(f"resolution must be >= 1 minute, got {self.resolution}")
        if not self.spots:
            raise ValueError("trace needs at least one spot")
        if len(set(self.spots)) != len(self.spots):
            raise ValueError("spot identifiers must be unique")
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.ndim != 2 or occ.shape[0] != len(self.spots):
            raise ValueError(
                f"occupancy shape {occ.shape} does not match {len(self.spots)} spots"
            )
        if occ.shape[1] < 1:
            raise ValueError("every spot needs at least one sample")
        order = sorted(range(len(self.spots)), key=lambda i: self.spots[i])
        occ = np.ascontiguousarray(occ[order])
        occ.setflags(write=False)
        object.__setattr__(self, "spots", tuple(self.spots[i] for i in order))
        object.__setattr__(self, "occupancy", occ)

    @property
    def n_spots(self) -> int:
        return len(self.spots)

    @property
    def n_samples(self) -> int:
        return self.occupancy.shape[1]

    @property
    def horizon_minutes(self) -> int:
        """Total span covered by the trace, in minutes."""
        return self.n_samples * self.resolution

    def timestamp_at(self, index: int) -> datetime:
        return self.start_time + timedelta(minutes=index * self.resolution)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OccupancyTrace):
            return NotImplemented
        return (
            self.region_id == other.region_id
            and self.start_time == other.start_time
            and self.resolution == other.resolution
            and self.spots == other.spots
            and np.array_equal(self.occupancy, other.occupancy)
        )


def free_spaces_at(trace: OccupancyTrace, t: int) -> int:
    """Number of free spots at sample index ``t``.

    ``t`` counts samples since trace start; with the usual 1-minute
    resolution it is simply minutes since start.
    """
    if not 0 <= t < trace.n_samples:
        raise IndexError(
            f"sample index {t} outside trace horizon [0, {trace.n_samples})"
        )
    return int(trace.n_spots - np.count_nonzero(trace.occupancy[:, t]))


def _parse_timestamp(text: str, line: int) -> datetime:
    try:
        return datetime.strptime(text, TIMESTAMP_FORMAT)
    except ValueError:
        raise TraceParseError(
            f"bad timestamp {text!r}, expected {TIMESTAMP_FORMAT}", line
        ) from None


def parse_trace(document: str, region_id: str = "") -> OccupancyTrace:
    """Parse a trace CSV document (see module docstring for the format).

    Row order in the document is irrelevant: rows are keyed by
    (timestamp, spot). Raises TraceParseError, with a line number, for a
    malformed row, a duplicate (timestamp, spot) pair, a cadence gap, or
    an empty document.
    """
    reader = csv.reader(io.StringIO(document))
    try:
        header = next(reader)
    except StopIteration:
        raise TraceParseError("empty document", 1) from None
    if [h.strip() for h in header] != CSV_HEADER.split(","):
        raise TraceParseError(f"expected header {CSV_HEADER!r}", 1)

    # spot -> {timestamp_minutes: (occupied, line)}
    samples: dict[str, dict[int, bool]] = {}
    lines: dict[str, dict[int, int]] = {}
    for row in reader:
        line = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # tolerate blank lines
        if len(row) != 3:
            raise TraceParseError(f"expected 3 fields, got {len(row)}", line)
        ts_text, spot, occ_text = (f.strip() for f in row)
        ts = _parse_timestamp(ts_text, line)
        minute = _to_minute(ts)
        if not spot:
            raise TraceParseError("empty spot_id", line)
        if occ_text not in ("0", "1"):
            raise TraceParseError(
                f"occupied must be 0 or 1, got {occ_text!r}", line
            )
        per_spot = samples.setdefault(spot, {})
        if minute in per_spot:
            raise TraceParseError(
                f"duplicate sample for spot {spot!r} at {ts_text}", line
            )
        per_spot[minute] = occ_text == "1"
        lines.setdefault(spot, {})[minute] = line

    if not samples:
        raise TraceParseError("empty document: no data rows", 1)

    start_minute = min(min(per_spot) for per_spot in samples.values())
    start_time = _from_minute(start_minute)

    # Establish the sample grid from the first spot, then hold every spot
    # to it. A gap inside any spot's series is a cadence error naming the
    # first missing instant.
    counts = {spot: len(per_spot) for spot, per_spot in samples.items()}
    resolution = None
    for spot in sorted(samples):
        instants = sorted(samples[spot])
        if len(instants) >= 2:
            step = instants[1] - instants[0]
            for prev, cur in zip(instants, instants[1:]):
                if cur - prev != step:
                    missing = _from_minute(prev + step)
                    raise TraceParseError(
                        f"cadence gap for spot {spot!r}: missing sample at "
                        f"{missing.strftime(TIMESTAMP_FORMAT)}",
                        lines[spot][cur],
                    )
            if resolution is None:
                resolution = step
            elif step != resolution:
                raise TraceParseError(
                    f"spot {spot!r} cadence is {step} min but other spots use "
                    f"{resolution} min",
                    lines[spot][instants[1]],
                )
    if resolution is None:
        resolution = 1  # single-sample spots only

    n_samples = max(counts.values())
    grid = [start_minute + k * resolution for k in range(n_samples)]
    spot_ids = sorted(samples)
    occupancy = np.zeros((len(spot_ids), n_samples), dtype=bool)
    for i, spot in enumerate(spot_ids):
        per_spot = samples[spot]
        if len(per_spot) != n_samples or sorted(per_spot) != grid:
            expected = set(grid)
            missing = sorted(expected - set(per_spot))
            extra = sorted(set(per_spot) - expected)
            if missing:
                when = _from_minute(missing[0])
                raise TraceParseError(
                    f"spot {spot!r} misses sample at "
                    f"{when.strftime(TIMESTAMP_FORMAT)}"
                )
            when = _from_minute(extra[0])
            raise TraceParseError(
                f"spot {spot!r} has off-grid sample at "
                f"{when.strftime(TIMESTAMP_FORMAT)}",
                lines[spot][extra[0]],
            )
        for k, minute in enumerate(grid):
            occupancy[i, k] = per_spot[minute]

    return OccupancyTrace(
        region_id=region_id,
        start_time=start_time,
        resolution=int(resolution),
        spots=tuple(spot_ids),
        occupancy=occupancy,
    )


def serialize_trace(trace: OccupancyTrace) -> str:
    """Render a trace back to its CSV document form.

    Rows come out time-major (all spots for a timestamp, then the next
    timestamp), LF line endings, so serializing the same trace twice is
    byte-identical. The region label is sidecar metadata and is not part
    of the file format; parse_trace takes it as an argument instead.
    """
    stamps = [
        trace.timestamp_at(k).strftime(TIMESTAMP_FORMAT)
        for k in range(trace.n_samples)
    ]
    bits = trace.occupancy
    out = [CSV_HEADER]
    for k, stamp in enumerate(stamps):
        for i, spot in enumerate(trace.spots):
            out.append(f"{stamp},{spot},{1 if bits[i, k] else 0}")
    out.append("")
    return "\n".join(out)


def load_trace(path, region_id: str | None = None) -> OccupancyTrace:
    """Read and parse a trace file; region label defaults to the file stem."""
    from pathlib import Path

    p = Path(path)
    if region_id is None:
        region_id = p.stem
    return parse_trace(p.read_text(encoding="utf-8"), region_id=region_id)


def save_trace(trace: OccupancyTrace, path) -> None:
    from pathlib import Path

    Path(path).write_text(serialize_trace(trace), encoding="utf-8", newline="\n")
