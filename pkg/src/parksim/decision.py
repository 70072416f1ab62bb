"""The driver's park-or-pass decision at the region entrance.

A driver arriving at the entrance weighs the competition already cruising
inside against the number of spaces the sensing solution reports free.
Competition is counted first: with at least as many searching cars as
detected spaces there is no point entering. With spaces to spare the
driver still passes when strictly slower than every competitor, because
the competitors would reach the spaces first. Otherwise the driver
commits to park. A lone driver facing at least one detected space always
commits; there is nobody to lose a race against.

The decision is deliberately myopic: it uses only the entrance-time
snapshot (n_c, d_r, v_c, v_min) and never re-evaluates once the car is
inside. Whether it was RIGHT is judged later, by the simulation engine,
against what actually happened at the spot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Reason(enum.Enum):
    """Which branch of the decision rule fired."""

    INSUFFICIENT_SPACES = "InsufficientSpaces"  # n_c >= d_r: outnumbered
    TOO_SLOW = "TooSlow"  # spaces exist but every competitor is faster
    FAVORABLE = "Favorable"  # spaces exist and some competitor is no faster
    NO_COMPETITION = "NoCompetition"  # nobody else searching, d_r >= 1

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DecisionInputs:
    """Entrance-time snapshot the driver decides from.

    n_c counts cars currently searching for a spot, excluding the
    deciding car. v_min is the slowest searching car's velocity and
    exists exactly when n_c > 0.
    """

    n_c: int
    d_r: int
    v_c: float
    v_min: float | None = None

    def __post_init__(self):
        if self.n_c < 0:
            raise ValueError(f"n_c must be >= 0, got {self.n_c}")
        if self.d_r < 0:
            raise ValueError(f"d_r must be >= 0, got {self.d_r}")
        if not self.v_c > 0:
            raise ValueError(f"v_c must be positive, got {self.v_c}")
        if self.n_c > 0:
            if self.v_min is None:
                raise ValueError("v_min required when n_c > 0")
            if not self.v_min > 0:
                raise ValueError(f"v_min must be positive, got {self.v_min}")
        elif self.v_min is not None:
            raise ValueError("v_min must be absent when n_c = 0")


@dataclass(frozen=True)
class Decision:
    """The driver's verdict: d_m = 1 parks, 0 passes; reason tags the branch."""

    d_m: int
    reason: Reason

    def __post_init__(self):
        declined = self.reason in (Reason.INSUFFICIENT_SPACES, Reason.TOO_SLOW)
        if self.d_m != (0 if declined else 1):
            raise ValueError(f"d_m={self.d_m} inconsistent with reason {self.reason}")


def decide(inputs: DecisionInputs) -> Decision:
    """Apply the decision rule. Deterministic and total.

    Branch order matters and ties are exact:
      1. n_c >= d_r: not enough spaces for the crowd, pass. Equality
         declines: the existing searchers alone can fill every space.
      2. n_c > 0 and v_min > v_c: strictly slower than all competitors,
         pass. A velocity tie parks: the driver is not slower than
         everyone.
      3. otherwise park; NoCompetition when the street is empty of
         searchers, Favorable when the race looks winnable.
    """
    if inputs.n_c >= inputs.d_r:
        return Decision(0, Reason.INSUFFICIENT_SPACES)
    if inputs.n_c > 0 and inputs.v_min > inputs.v_c:
        return Decision(0, Reason.TOO_SLOW)
    if inputs.n_c == 0:
        return Decision(1, Reason.NO_COMPETITION)
    return Decision(1, Reason.FAVORABLE)
