"""Discrete-event evaluation of parking detection solutions.

Simulates drivers who decide, from detected free-space counts and visible
competition, whether to park in a single-lane region, then scores each
decision against ground truth. Comparing fixed sensing (continuous) with
scheduled mobile sensing (scan every D_s minutes) yields the prediction
accuracy a driver actually experiences under each solution.
"""

from .decision import Decision, DecisionInputs, Reason, decide
from .engine import (
    AccuracyReport,
    ArrivalBatch,
    CarRecords,
    ConfusionCounts,
    EVENT_LOG_HEADER,
    Mode,
    NoDataError,
    Outcome,
    RunResult,
    ScenarioConfig,
    WindowStats,
    accuracy,
    active_kernel,
    draw_arrivals,
    effective_spot_reach,
    resolve_outcome,
    run,
)
from .sensing import DetectedView, NoObservationError, SensingConfig, detect, downsample
from .stochastic import (
    ArrivalProcess,
    ConfigError,
    DurationDistribution,
    RandomSource,
    VelocityRange,
    sample_duration,
    sample_interarrival,
    sample_velocity,
)
from .trace import (
    OccupancyTrace,
    TraceParseError,
    free_spaces_at,
    load_trace,
    parse_trace,
    save_trace,
    serialize_trace,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "ArrivalBatch",
    "ArrivalProcess",
    "CarRecords",
    "ConfigError",
    "ConfusionCounts",
    "Decision",
    "DecisionInputs",
    "DetectedView",
    "DurationDistribution",
    "EVENT_LOG_HEADER",
    "Mode",
    "NoDataError",
    "NoObservationError",
    "OccupancyTrace",
    "Outcome",
    "RandomSource",
    "Reason",
    "RunResult",
    "ScenarioConfig",
    "SensingConfig",
    "TraceParseError",
    "VelocityRange",
    "WindowStats",
    "accuracy",
    "active_kernel",
    "decide",
    "detect",
    "downsample",
    "draw_arrivals",
    "effective_spot_reach",
    "free_spaces_at",
    "load_trace",
    "parse_trace",
    "resolve_outcome",
    "run",
    "sample_duration",
    "sample_interarrival",
    "sample_velocity",
    "save_trace",
    "serialize_trace",
    "__version__",
]
