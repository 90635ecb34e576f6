"""Pressure index of a team batting second.

The index starts at 1 when the chase begins, falls to 0 when the target is
reached, and grows with the required run rate, resources consumed, and the
weighted cost of wickets lost. Values are censored at 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import BallsExhausted, NonMonotoneInnings, TargetReached
from .phases import DEFAULT_PHASES, Phase, phase_of_over
from .resources import ResourceTable

#: Position-indexed wicket weights (batting positions 1..11).
DEFAULT_WICKET_WEIGHTS = {
    1: 1.30, 2: 1.35, 3: 1.40, 4: 1.45, 5: 1.38, 6: 1.18,
    7: 0.98, 8: 0.79, 9: 0.59, 10: 0.39, 11: 0.19,
}


@dataclass(frozen=True)
class ChaseContext:
    """The fixed parameters of a run chase: target and balls available."""

    target: int
    total_balls: int = 120

    def __post_init__(self):
        if self.target < 1:
            raise ValueError(f"target must be >= 1, got {self.target}")
        if self.total_balls < 6 or self.total_balls % 6 != 0:
            raise ValueError(
                f"total_balls must be >= 6 and divisible by 6, got {self.total_balls}"
            )


@dataclass(frozen=True)
class InningsState:
    """Cumulative state of the second innings at some point."""

    runs_scored: int
    balls_faced: int
    dismissed_positions: tuple[int, ...] = ()

    def __post_init__(self):
        if self.runs_scored < 0:
            raise ValueError("runs_scored must be >= 0")
        if self.balls_faced < 0:
            raise ValueError("balls_faced must be >= 0")
        pos = self.dismissed_positions
        if len(set(pos)) != len(pos):
            raise ValueError(f"duplicate dismissed positions: {pos}")
        if len(pos) > 10:
            raise ValueError("at most 10 wickets can fall")
        if any(not 1 <= p <= 11 for p in pos):
            raise ValueError(f"batting positions must be in 1..11: {pos}")

    @property
    def wickets(self) -> int:
        return len(self.dismissed_positions)


class WicketWeights:
    """Weights charged per dismissed batting position."""

    def __init__(self, weight_by_position: dict[int, float] | None = None):
        w = dict(weight_by_position or DEFAULT_WICKET_WEIGHTS)
        if set(w) != set(range(1, 12)):
            raise ValueError("weights must cover positions 1..11 exactly")
        if any(v <= 0 for v in w.values()):
            raise ValueError("weights must be positive")
        self.weight_by_position = w

    def total(self, positions: tuple[int, ...]) -> float:
        return sum(self.weight_by_position[p] for p in positions)


def compute_irrr(ctx: ChaseContext) -> float:
    """Initial required run rate (runs per over)."""
    return ctx.target * 6.0 / ctx.total_balls


def compute_crrr(ctx: ChaseContext, st: InningsState) -> float:
    """Current required run rate at the given state.

    Raises TargetReached once the chase is complete and BallsExhausted when
    no balls remain with the target still short.
    """
    if st.runs_scored >= ctx.target:
        raise TargetReached(f"{st.runs_scored} >= target {ctx.target}")
    if st.balls_faced >= ctx.total_balls:
        raise BallsExhausted(
            f"{st.balls_faced} balls faced of {ctx.total_balls}, target not reached"
        )
    return (ctx.target - st.runs_scored) * 6.0 / (ctx.total_balls - st.balls_faced)


def compute_pi(
    ctx: ChaseContext,
    st: InningsState,
    weights: WicketWeights | None = None,
    table: ResourceTable | None = None,
) -> float:
    """Pressure index at the given state, censored at 0.

    Returns 0 exactly when the target has been reached.
    """
    if st.runs_scored >= ctx.target:
        return 0.0
    weights = weights or WicketWeights()
    table = table or ResourceTable.bundled()
    crrr = compute_crrr(ctx, st)  # raises BallsExhausted when out of balls
    irrr = compute_irrr(ctx)
    ru = table.used_pct(ctx.total_balls, ctx.total_balls - st.balls_faced, st.wickets)
    wsum = weights.total(st.dismissed_positions)
    pi = (crrr / irrr) * 0.5 * (math.exp(ru / 100.0) + math.exp(wsum / 11.0))
    return max(0.0, pi)


@dataclass
class PiSequence:
    """Over-indexed pressure index trajectory for one match.

    values[i] is the censored index at the end of over i+1. Once a value is
    0 (target reached) all later values are 0.
    """

    values: list[float]
    match_id: str = ""
    competition: str = ""
    home_away: str = "neutral"  # "home" | "away" | "neutral", for the chasing side
    won: bool = False
    truncated: bool = False  # abandoned / no-result innings
    wicket_overs: list[int] = field(default_factory=list)

    def __post_init__(self):
        seen_zero = False
        for v in self.values:
            if v < 0:
                raise ValueError("pressure index values must be censored at 0")
            if seen_zero and v != 0.0:
                raise ValueError("values after a 0 must stay 0")
            seen_zero = seen_zero or v == 0.0

    def __len__(self) -> int:
        return len(self.values)

    def phase_labels(self, phases: tuple[Phase, ...] = DEFAULT_PHASES) -> list[str]:
        return [phase_of_over(i + 1, phases).label for i in range(len(self.values))]


def pi_sequence(
    ctx: ChaseContext,
    over_end_states: list[InningsState],
    weights: WicketWeights | None = None,
    table: ResourceTable | None = None,
) -> PiSequence:
    """Censored pressure index at each over boundary.

    States must be cumulative, one per completed over (plus the final
    partial over when the target falls mid-over).
    """
    prev: InningsState | None = None
    values: list[float] = []
    wicket_overs: list[int] = []
    for over_no, st in enumerate(over_end_states, start=1):
        if prev is not None:
            if st.runs_scored < prev.runs_scored or st.balls_faced < prev.balls_faced:
                raise NonMonotoneInnings(
                    f"cumulative fields decreased entering over {over_no}"
                )
            if st.wickets > prev.wickets:
                wicket_overs.append(over_no)
        elif st.wickets > 0:
            wicket_overs.append(over_no)
        try:
            values.append(compute_pi(ctx, st, weights, table))
        except BallsExhausted:
            # A lost chase ends with no balls left; the index is undefined
            # there, so the sequence stops at the previous over boundary.
            if over_no == len(over_end_states):
                if wicket_overs and wicket_overs[-1] == over_no:
                    wicket_overs.pop()
                break
            raise
        prev = st
    return PiSequence(values=values, wicket_overs=wicket_overs)
