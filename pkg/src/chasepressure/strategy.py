"""Classify match states into recommendation zones and emit guidance.

The default zone table maps (phase, venue class, PI interval) to one of
four zones derived from historical win rates. The Avoid zone additionally
carries a runs-per-over hint obtained by inverting the pressure formula.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

from scipy.optimize import brentq

from .errors import BallsExhausted
from .markov import Prediction, TransitionModel, predict_next
from .phases import DEATH, DEFAULT_PHASES, MIDDLE, POWERPLAY, phase_of_over
from .pressure import ChaseContext, InningsState, compute_pi


class Zone(enum.Enum):
    TARGET = "Target"
    ACCEPTABLE = "Acceptable"
    RISKY = "Risky"
    AVOID = "Avoid"


_ZONE_RANK = {Zone.TARGET: 0, Zone.ACCEPTABLE: 1, Zone.RISKY: 2, Zone.AVOID: 3}

ZONE_MESSAGES = {
    Zone.TARGET: "Target Zone - Maintain aggressive scoring",
    Zone.ACCEPTABLE: "Acceptable Zone - Continue current approach",
    Zone.RISKY: "Risky Zone - Accelerate carefully",
    Zone.AVOID: "Avoid Zone - High risk, need immediate acceleration",
}
# Late-innings borderline band gets a softer script.
DEATH_BORDERLINE_MESSAGE = "Acceptable/Risky - Accelerate carefully"

HOME = "home"
AWAY = "away"
NEUTRAL = "neutral"


@dataclass(frozen=True)
class ZoneRow:
    phase: str
    venue_class: str  # home | away
    lo: float
    hi: float  # exclusive; math.inf for the open top bin
    win_rate: float
    zone: Zone

    def contains(self, pi: float) -> bool:
        return self.lo <= pi < self.hi


class ZoneTable:
    """Interval lookup from (phase, venue class, PI) to a zone."""

    def __init__(self, rows: list[ZoneRow]):
        self.rows = list(rows)
        self._validate()

    def _validate(self):
        groups: dict[tuple[str, str], list[ZoneRow]] = {}
        for r in self.rows:
            if r.venue_class not in (HOME, AWAY):
                raise ValueError(f"venue_class must be home or away, got {r.venue_class!r}")
            groups.setdefault((r.phase, r.venue_class), []).append(r)
        for key, rows in groups.items():
            rows.sort(key=lambda r: r.lo)
            if rows[0].lo != 0.0 or not math.isinf(rows[-1].hi):
                raise ValueError(f"{key}: intervals must cover [0, inf)")
            for a, b in zip(rows, rows[1:]):
                if a.hi != b.lo:
                    raise ValueError(f"{key}: intervals must tile without gaps")
                if _ZONE_RANK[b.zone] < _ZONE_RANK[a.zone]:
                    raise ValueError(f"{key}: zones must not improve as PI grows")

    def classify(self, phase: str, venue_class: str, pi: float) -> ZoneRow:
        # Neutral venues use the stricter away thresholds.
        venue = AWAY if venue_class == NEUTRAL else venue_class
        for r in self.rows:
            if r.phase == phase and r.venue_class == venue and r.contains(pi):
                return r
        raise KeyError(f"no zone row for ({phase}, {venue}, {pi})")

    def band(self, phase: str, venue_class: str) -> tuple[float, float]:
        """Union of the Target and Acceptable intervals, clipped below at 0."""
        venue = AWAY if venue_class == NEUTRAL else venue_class
        good = [r for r in self.rows
                if r.phase == phase and r.venue_class == venue
                and r.zone in (Zone.TARGET, Zone.ACCEPTABLE)]
        if not good:
            return (0.0, 0.0)
        return (max(0.0, min(r.lo for r in good)), max(r.hi for r in good))

    def save_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["phase", "venue_class", "lo", "hi", "win_rate", "zone"])
            for r in self.rows:
                w.writerow([r.phase, r.venue_class, r.lo,
                            "inf" if math.isinf(r.hi) else r.hi,
                            r.win_rate, r.zone.value])

    @classmethod
    def load_csv(cls, path: str | Path) -> "ZoneTable":
        rows = []
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                rows.append(ZoneRow(
                    phase=rec["phase"], venue_class=rec["venue_class"],
                    lo=float(rec["lo"]), hi=float(rec["hi"]),
                    win_rate=float(rec["win_rate"]), zone=Zone(rec["zone"]),
                ))
        return cls(rows)


def default_zone_table() -> ZoneTable:
    T, A, R, V = Zone.TARGET, Zone.ACCEPTABLE, Zone.RISKY, Zone.AVOID
    inf = math.inf
    spec = [
        (POWERPLAY, HOME, [(0, 0.5, 100.0, T), (0.5, 1, 73.7, A), (1, 1.5, 42.7, R),
                           (1.5, 2.5, 13.9, V), (2.5, inf, 0.0, V)]),
        (POWERPLAY, AWAY, [(0, 0.5, 100.0, T), (0.5, 1, 62.2, A), (1, 1.5, 36.6, V),
                           (1.5, 2.5, 10.5, V), (2.5, inf, 0.0, V)]),
        (MIDDLE, HOME, [(0, 0.5, 100.0, T), (0.5, 1, 100.0, T), (1, 1.5, 75.7, A),
                        (1.5, 2.5, 43.6, R), (2.5, inf, 6.9, V)]),
        (MIDDLE, AWAY, [(0, 0.5, 100.0, T), (0.5, 1, 98.4, T), (1, 1.5, 70.7, A),
                        (1.5, 2.5, 35.9, V), (2.5, inf, 3.7, V)]),
        (DEATH, HOME, [(0, 0.5, 100.0, T), (0.5, 1, 100.0, T), (1, 1.5, 87.3, A),
                       (1.5, 2.5, 75.9, A), (2.5, inf, 11.2, V)]),
        (DEATH, AWAY, [(0, 0.5, 100.0, T), (0.5, 1, 96.8, T), (1, 1.5, 70.2, A),
                       (1.5, 2.5, 68.2, A), (2.5, inf, 8.1, V)]),
    ]
    rows = [ZoneRow(phase, venue, float(lo), float(hi), wr, z)
            for phase, venue, entries in spec
            for lo, hi, wr, z in entries]
    return ZoneTable(rows)


@dataclass(frozen=True)
class Recommendation:
    current_pi: float
    predicted: Prediction | None
    zone: Zone
    message: str
    target_band: tuple[float, float]
    required_run_rate_hint: float | None = None
    basis: str = "predicted"  # predicted | current | terminal


def _message_for(zone: Zone, phase: str, row: ZoneRow) -> str:
    if phase == DEATH and zone is Zone.ACCEPTABLE and row.lo >= 1.5:
        return DEATH_BORDERLINE_MESSAGE
    return ZONE_MESSAGES[zone]


def recommend(
    over: int,
    pi_history: list[float],
    venue_class: str,
    models: dict[str, TransitionModel],
    fits: dict[str, object],
    ctx: ChaseContext,
    state: InningsState,
    table: ZoneTable | None = None,
    confidence: float = 0.95,
    phases=DEFAULT_PHASES,
) -> Recommendation:
    """Recommendation after `over` overs, with pi_history[-1] the current PI.

    With fewer completed overs than the model order, classification falls
    back to the current PI and no prediction is made.
    """
    table = table or default_zone_table()
    current_pi = pi_history[-1] if pi_history else 1.0
    if current_pi == 0.0:
        return Recommendation(0.0, None, Zone.TARGET, "target achieved",
                              (0.0, 0.0), basis="terminal")

    last_over = phases[-1].last_over
    next_over = min(over + 1, last_over)
    phase = phase_of_over(next_over, phases).label
    model = models[phase]
    if len(pi_history) >= model.order and over < last_over:
        recent = pi_history[-model.order:]
        pred = predict_next(model, recent, fits[phase], confidence, over=next_over)
        classify_pi = pred.expected_pi
        basis = "predicted"
    else:
        pred = None
        phase = phase_of_over(min(over, last_over) if over >= 1 else 1, phases).label
        classify_pi = current_pi
        basis = "current"

    row = table.classify(phase, venue_class, classify_pi)
    band = table.band(phase, venue_class)
    hint = None
    if row.zone is Zone.AVOID:
        hint = _runs_to_boundary(ctx, state, band[1])
    return Recommendation(current_pi, pred, row.zone,
                          _message_for(row.zone, phase, row), band, hint, basis)


def _runs_to_boundary(ctx: ChaseContext, state: InningsState, boundary: float) -> float:
    """Runs needed in the next over to bring PI down to the zone boundary."""
    balls_next = min(6, ctx.total_balls - state.balls_faced)
    if balls_next <= 0:
        return 0.0
    max_runs = float(ctx.target - state.runs_scored)

    def pi_after(r: float) -> float:
        st = InningsState(state.runs_scored + r, state.balls_faced + balls_next,
                          state.dismissed_positions)
        try:
            return compute_pi(ctx, st)
        except BallsExhausted:
            return math.inf

    if pi_after(0.0) <= boundary:
        return 0.0
    if pi_after(max_runs) > boundary:  # pragma: no cover - PI hits 0 at target
        return max_runs
    return float(brentq(lambda r: pi_after(r) - boundary, 0.0, max_runs, xtol=1e-9))
