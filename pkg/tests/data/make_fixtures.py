"""Regenerate the committed test fixtures in this directory.

Run from the repository root after an intentional behavior change:

    python tests/data/make_fixtures.py

golden_micro_log.csv is NOT regenerated here: it was derived by hand
(two cars, one spot, all-free trace, v=100 m/min over 200 m so travel
takes exactly 2 minutes) and freezes the event-log byte format. If the
engine stops reproducing it, that is a finding, not a fixture update.
"""

from __future__ import annotations

import pathlib

from parksim.cli import main as cli_main
from parksim.experiments import synthesize_trace
from parksim.trace import save_trace

HERE = pathlib.Path(__file__).parent


def main() -> None:
    # one day on a quiet 4-spot street: small enough to commit, busy
    # enough that both outcomes of both decisions occur
    trace = synthesize_trace(
        spots=4, arrival_rate=0.1, horizon=1440, seed=42, region_id="street-day"
    )
    save_trace(trace, HERE / "street_day.csv")

    # full CLI run over that day, frozen results.csv
    out = HERE / "_golden_tmp"
    rc = cli_main([
        "run", "--mode", "trace", "--trace", str(HERE / "street_day.csv"),
        "--ds", "15", "--horizon", "1440", "--window", "1440",
        "--seed", "0", "--out", str(out),
    ])
    if rc != 0:
        raise SystemExit(f"golden run failed with exit code {rc}")
    (HERE / "golden_results.csv").write_bytes((out / "results.csv").read_bytes())
    for p in sorted(out.iterdir()):
        p.unlink()
    out.rmdir()
    print("fixtures written to", HERE)


if __name__ == "__main__":
    main()
