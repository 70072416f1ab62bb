"""Command line front end: single runs, sweeps, and trace synthesis.

    parksim run    one scenario; writes results.csv, events.csv, config.json
    parksim sweep  detection-schedule x seed grid; adds overall.csv,
                   means.csv and an optional SVG chart
    parksim synth  synthesize a ground-truth trace CSV from a busy
                   self-contained street

Exit codes: 0 success, 1 runtime failure (bad file, impossible config),
2 usage error (bad flags).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .chart import save_chart
from .engine import Mode, ScenarioConfig, active_kernel, run
from .experiments import (
    RESULTS_HEADER,
    SYNTH_ARRIVAL_RATE,
    SYNTH_SEED,
    SYNTH_SPOTS,
    SweepSpec,
    config_payload,
    mean_series,
    results_rows,
    run_sweep,
    synthesize_trace,
    write_config,
    write_csv,
    write_sweep_outputs,
)
from .sensing import NoObservationError, SensingConfig
from .stochastic import ConfigError
from .trace import TraceParseError, load_trace, save_trace

DEFAULT_DS_SWEEP = (0, 15, 35, 50)
DEFAULT_SEED_SWEEP = tuple(range(20))


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _pos_int(text: str) -> int:
    value = _nonneg_int(text)
    if value == 0:
        raise argparse.ArgumentTypeError("must be >= 1, got 0")
    return value


def _pos_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _int_list(text: str) -> tuple[int, ...]:
    """Comma-separated integers; 'a-b' spans an inclusive range: 0-4,7."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise argparse.ArgumentTypeError("empty list element")
        if "-" in part[1:]:
            lo_text, hi_text = part.split("-", 1) if not part.startswith("-") else (
                part[: part.index("-", 1)],
                part[part.index("-", 1) + 1 :],
            )
            try:
                lo, hi = int(lo_text), int(hi_text)
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad range: {part!r}") from None
            if hi < lo:
                raise argparse.ArgumentTypeError(f"descending range: {part!r}")
            values.extend(range(lo, hi + 1))
        else:
            try:
                values.append(int(part))
            except ValueError:
                raise argparse.ArgumentTypeError(f"not an integer: {part!r}") from None
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("values must be >= 0")
    return tuple(values)


def _add_scenario_args(p: argparse.ArgumentParser, rate_default: float, seed_default):
    p.add_argument("--lambda", dest="arrival_rate", type=_pos_float,
                   default=rate_default, metavar="R",
                   help=f"arrivals per minute (default {rate_default})")
    p.add_argument("--mu", type=_pos_float, default=45.0, metavar="R",
                   help="mean parking duration, minutes (default 45)")
    p.add_argument("--sigma", type=_pos_float, default=15.0, metavar="R",
                   help="parking duration std dev, minutes (default 15)")
    p.add_argument("--region-length", type=_pos_float, default=200.0, metavar="R",
                   help="entrance-to-spots distance, meters (default 200)")
    p.add_argument("--v-lo", type=_pos_float, default=100.0, metavar="R",
                   help="lowest cruising velocity, m/min (default 100)")
    p.add_argument("--v-hi", type=_pos_float, default=700.0, metavar="R",
                   help="highest cruising velocity, m/min (default 700)")
    p.add_argument("--horizon", type=_pos_int, default=110_880, metavar="MIN",
                   help="simulated minutes (default 110880 = 11 weeks)")
    return seed_default


def _add_eval_args(p: argparse.ArgumentParser, ds_type, ds_default, seed_type,
                   seed_default, list_flags: bool):
    _add_scenario_args(p, rate_default=0.2, seed_default=seed_default)
    p.add_argument("--window", type=_pos_int, default=10_080, metavar="MIN",
                   help="accuracy aggregation window, minutes (default 10080 = 1 week)")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.TRACE_DRIVEN.value,
                   help="ground truth source (default trace)")
    p.add_argument("--trace", metavar="PATH", help="ground-truth trace CSV (trace mode)")
    p.add_argument("--spots", type=_pos_int, default=None, metavar="N",
                   help="region capacity (closed-loop mode, default 20)")
    p.add_argument("--ds", type=ds_type, default=ds_default,
                   metavar="LIST" if list_flags else "MIN",
                   help="detection schedule in minutes; 0 = fixed sensing"
                        + (" (comma list, a-b ranges)" if list_flags else ""))
    p.add_argument("--seed", type=seed_type, default=seed_default,
                   metavar="LIST" if list_flags else "N")
    p.add_argument("--out", type=Path, default=Path("parksim-out"), metavar="DIR",
                   help="output directory (default parksim-out)")
    p.add_argument("--exclude-warmup", action="store_true",
                   help="drop decisions made before the first scan from accuracy")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parksim",
        description="Evaluate parking detection solutions from the driver's side.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario")
    _add_eval_args(p_run, ds_type=_nonneg_int, ds_default=0,
                   seed_type=int, seed_default=0, list_flags=False)

    p_sweep = sub.add_parser("sweep", help="run a ds x seed grid")
    _add_eval_args(p_sweep, ds_type=_int_list, ds_default=DEFAULT_DS_SWEEP,
                   seed_type=_int_list, seed_default=DEFAULT_SEED_SWEEP,
                   list_flags=True)
    p_sweep.add_argument("--plot", type=Path, default=None, metavar="PATH.svg",
                         help="also render the per-ds mean accuracy chart")
    p_sweep.add_argument("--jobs", type=_pos_int, default=1, metavar="N",
                         help="worker processes (default 1)")

    p_synth = sub.add_parser("synth", help="synthesize a ground-truth trace")
    _add_scenario_args(p_synth, rate_default=SYNTH_ARRIVAL_RATE, seed_default=SYNTH_SEED)
    p_synth.add_argument("--seed", type=int, default=SYNTH_SEED, metavar="N")
    p_synth.add_argument("--spots", type=_pos_int, default=SYNTH_SPOTS, metavar="N",
                         help=f"region capacity (default {SYNTH_SPOTS})")
    p_synth.add_argument("--trace", type=Path, required=True, metavar="PATH",
                         help="where to write the trace CSV")
    p_synth.add_argument("--region-id", default="synthesized", metavar="NAME")

    return parser


def _scenario_from_args(args, parser, ds: int, seed: int) -> ScenarioConfig:
    mode = Mode(args.mode)
    spots = args.spots
    if mode is Mode.TRACE_DRIVEN:
        if not args.trace:
            parser.error("trace mode needs --trace PATH")
        if spots is not None:
            parser.error("--spots applies to closed-loop mode only")
    else:
        if args.trace:
            parser.error("closed-loop mode owns its occupancy; drop --trace")
        if spots is None:
            spots = 20
    return ScenarioConfig(
        arrival_rate=args.arrival_rate,
        duration_mean=args.mu,
        duration_std=args.sigma,
        sensing=SensingConfig(ds),
        region_length=args.region_length,
        v_low=args.v_lo,
        v_high=args.v_hi,
        horizon=args.horizon,
        window=args.window,
        seed=seed,
        mode=mode,
        spots=spots,
        exclude_warmup=args.exclude_warmup,
    )


def _cmd_run(args, parser) -> int:
    cfg = _scenario_from_args(args, parser, ds=args.ds, seed=args.seed)
    trace = None
    if cfg.mode is Mode.TRACE_DRIVEN:
        trace = load_trace(args.trace)
    result = run(cfg, trace=trace)
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "results.csv", RESULTS_HEADER,
              results_rows({(args.ds, args.seed): result}))
    (out / "events.csv").write_text(result.event_log_csv(), encoding="utf-8",
                                    newline="\n")
    write_config(out / "config.json", config_payload(cfg))
    print(f"kernel: {active_kernel()}")
    print(f"cars: {len(result.cars)}")
    pa = result.report.overall_p_a
    print(f"overall P_a: {pa:.6f}" if pa is not None else "overall P_a: no data")
    print(f"wrote {out / 'results.csv'}")
    return 0


def _cmd_sweep(args, parser) -> int:
    base = _scenario_from_args(args, parser, ds=0, seed=0)
    trace = None
    if base.mode is Mode.TRACE_DRIVEN:
        trace = load_trace(args.trace)
    spec = SweepSpec(base=base, ds_values=tuple(args.ds), seeds=tuple(args.seed),
                     out_dir=args.out)
    results = run_sweep(spec, trace=trace, jobs=args.jobs)
    paths = write_sweep_outputs(spec, results)
    print(f"kernel: {active_kernel()}")
    for ds in spec.ds_values:
        vals = [
            results[(ds, seed)].report.overall_p_a
            for seed in spec.seeds
            if results[(ds, seed)].report.overall_p_a is not None
        ]
        if vals:
            print(f"ds={ds}: mean overall P_a {sum(vals) / len(vals):.6f} "
                  f"over {len(vals)} seeds")
        else:
            print(f"ds={ds}: no data")
    if args.plot is not None:
        save_chart(mean_series(results), args.plot)
        print(f"wrote {args.plot}")
    print(f"wrote {paths['results']}")
    return 0


def _cmd_synth(args, parser) -> int:
    trace = synthesize_trace(
        spots=args.spots,
        arrival_rate=args.arrival_rate,
        duration_mean=args.mu,
        duration_std=args.sigma,
        region_length=args.region_length,
        v_low=args.v_lo,
        v_high=args.v_hi,
        horizon=args.horizon,
        seed=args.seed,
        region_id=args.region_id,
    )
    args.trace.parent.mkdir(parents=True, exist_ok=True)
    save_trace(trace, args.trace)
    occ = float(trace.occupancy.mean())
    print(f"wrote {args.trace}: {trace.n_spots} spots x {trace.n_samples} min, "
          f"mean occupancy {occ:.3f}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"run": _cmd_run, "sweep": _cmd_sweep, "synth": _cmd_synth}[args.command]
    try:
        return handler(args, parser)
    except (ConfigError, TraceParseError, NoObservationError, OSError) as exc:
        print(f"parksim: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
