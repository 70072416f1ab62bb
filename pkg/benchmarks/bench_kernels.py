"""Benchmark the compiled simulation kernel against its pure-Python twin.

Runs the same pre-drawn workload through parksim._kernel (compiled) and
parksim._kernel_py (reference), checks the outputs are bit-identical, and
reports best-of-N wall times and the speedup. Usage:

    python benchmarks/bench_kernels.py [--horizon MIN] [--repeat N]
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from parksim.engine import Mode, ScenarioConfig, _per_minute_free, draw_arrivals, run
from parksim.sensing import SensingConfig

try:
    from parksim import _kernel as compiled
except ImportError:
    compiled = None
from parksim import _kernel_py as pure


def best_of(repeat: int, fn, *args) -> tuple[float, tuple]:
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def check_identical(a: tuple, b: tuple) -> None:
    names = ("n_c", "d_r", "warmup", "v_min", "d_m", "outcome", "rtime")
    for x, y, name in zip(a, b, names):
        equal_nan = x.dtype == np.float64
        if not np.array_equal(x, y, equal_nan=equal_nan):
            raise AssertionError(f"kernel outputs differ in {name}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--horizon", type=int, default=110_880,
                    help="simulated minutes (default 110880 = 11 weeks)")
    ap.add_argument("--repeat", type=int, default=5,
                    help="timing repetitions, best is reported (default 5)")
    args = ap.parse_args(argv)

    if compiled is None:
        print("compiled kernel unavailable; build it first (pip install -e .)")
        return 1

    print(f"horizon: {args.horizon} min, best of {args.repeat}\n")

    # stream of cars on a busy self-contained street
    cl_cfg = ScenarioConfig(mode=Mode.CLOSED_LOOP, spots=20, arrival_rate=0.45,
                            sensing=SensingConfig(15), horizon=args.horizon,
                            window=args.horizon, seed=3)
    batch = draw_arrivals(cl_cfg)
    cl_args = (batch.entry_times, batch.velocities, batch.durations,
               cl_cfg.spots, cl_cfg.region_length, 15, 0, cl_cfg.horizon)
    t_c, out_c = best_of(args.repeat, compiled.simulate_closed_loop, *cl_args)
    t_p, out_p = best_of(args.repeat, pure.simulate_closed_loop, *cl_args)
    check_identical(out_c, out_p)
    print(f"closed-loop  {len(batch):>7} cars  compiled {t_c * 1e3:8.2f} ms  "
          f"python {t_p * 1e3:8.2f} ms  speedup {t_p / t_c:5.1f}x")

    # probe drivers over a synthesized ground-truth trace
    trace = run(cl_cfg).occupancy_trace()
    td_cfg = ScenarioConfig(mode=Mode.TRACE_DRIVEN, sensing=SensingConfig(15),
                            horizon=args.horizon, window=args.horizon, seed=9)
    probes = draw_arrivals(td_cfg)
    truth, det = _per_minute_free(trace, td_cfg)
    td_args = (probes.entry_times, probes.velocities, td_cfg.region_length,
               truth, det, td_cfg.horizon)
    t_c, out_c = best_of(args.repeat, compiled.simulate_trace_driven, *td_args)
    t_p, out_p = best_of(args.repeat, pure.simulate_trace_driven, *td_args)
    check_identical(out_c, out_p)
    print(f"trace-driven {len(probes):>7} cars  compiled {t_c * 1e3:8.2f} ms  "
          f"python {t_p * 1e3:8.2f} ms  speedup {t_p / t_c:5.1f}x")

    print("\noutputs bit-identical across kernels")
    return 0


if __name__ == "__main__":
    sys.exit(main())
