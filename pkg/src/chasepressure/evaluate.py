"""Score prediction quality, win rates by PI threshold, and calibration."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyInput, SplitLeakage
from .markov import PredictionSource, TransitionModel, predict_next
from .phases import DEFAULT_PHASES, phase_of_over
from .pressure import PiSequence

# Half-unit PI bins; the final bin is open above.
DEFAULT_BINS: tuple[tuple[float, float], ...] = (
    (0.0, 0.5), (0.5, 1.0), (1.0, 1.5), (1.5, 2.0),
    (2.0, 2.5), (2.5, 3.0), (3.0, 3.5), (3.5, math.inf),
)


@dataclass(frozen=True)
class EvalReport:
    group: str  # e.g. "global", "phase=powerplay", "over=7"
    n_predictions: int
    mae: float
    rmse: float
    coverage_pct: float  # actuals inside the prediction interval
    markov_usage_pct: float  # predictions not served by the gamma fallback


@dataclass
class EvalSuite:
    global_report: EvalReport
    by_phase: dict[str, EvalReport]
    by_over: dict[int, EvalReport]
    by_competition: dict[str, EvalReport]


@dataclass
class _Agg:
    abs_sum: float = 0.0
    sq_sum: float = 0.0
    hits: int = 0
    markov: int = 0
    n: int = 0

    def add(self, err: float, hit: bool, markov: bool):
        self.abs_sum += abs(err)
        self.sq_sum += err * err
        self.hits += hit
        self.markov += markov
        self.n += 1

    def report(self, group: str) -> EvalReport:
        n = self.n
        return EvalReport(
            group=group, n_predictions=n,
            mae=self.abs_sum / n if n else 0.0,
            rmse=math.sqrt(self.sq_sum / n) if n else 0.0,
            coverage_pct=100.0 * self.hits / n if n else 0.0,
            markov_usage_pct=100.0 * self.markov / n if n else 0.0,
        )


def _check_leakage(models: dict[str, TransitionModel], seqs: list[PiSequence]):
    test_ids = {s.match_id for s in seqs if s.match_id}
    for model in models.values():
        train = set(model.metadata.get("train_match_ids", []))
        overlap = test_ids & train
        if overlap:
            raise SplitLeakage(
                f"test matches appear in the training split: {sorted(overlap)[:5]}")


def evaluate_predictions(
    models: dict[str, TransitionModel] | TransitionModel,
    fits: dict[str, object],
    seqs: list[PiSequence],
    confidence: float = 0.95,
    phases=DEFAULT_PHASES,
) -> EvalSuite:
    """Walk every test sequence, predict each over from the prior k values.

    `models` is either one global model or a dict keyed by phase label;
    `fits` maps phase label to gamma fallback parameters. Evaluation starts
    at over k+1. Raises SplitLeakage when a test match id is recorded in any
    model's training metadata.
    """
    if isinstance(models, TransitionModel):
        models = {p.label: models for p in phases}
    _check_leakage(models, seqs)

    g = _Agg()
    by_phase: dict[str, _Agg] = {}
    by_over: dict[int, _Agg] = {}
    by_comp: dict[str, _Agg] = {}
    for seq in seqs:
        for t_over, pred, actual in walk_predictions(models, fits, seq,
                                                     confidence, phases):
            err = pred.expected_pi - actual
            hit = pred.interval[0] <= actual <= pred.interval[1]
            markov = pred.source is not PredictionSource.GAMMA_FALLBACK
            label = phase_of_over(t_over, phases).label
            g.add(err, hit, markov)
            by_phase.setdefault(label, _Agg()).add(err, hit, markov)
            by_over.setdefault(t_over, _Agg()).add(err, hit, markov)
            by_comp.setdefault(seq.competition, _Agg()).add(err, hit, markov)
    if g.n == 0:
        raise EmptyInput("no predictable overs in the test sequences")
    return EvalSuite(
        global_report=g.report("global"),
        by_phase={k: v.report(f"phase={k}") for k, v in by_phase.items()},
        by_over={k: v.report(f"over={k}") for k, v in by_over.items()},
        by_competition={k: v.report(f"competition={k}") for k, v in by_comp.items()},
    )


def walk_predictions(
    models: dict[str, TransitionModel],
    fits: dict[str, object],
    seq: PiSequence,
    confidence: float = 0.95,
    phases=DEFAULT_PHASES,
):
    """Yield (over, Prediction, actual) for each over from k+1 onward."""
    for t in range(len(seq.values)):
        over = t + 1
        label = phase_of_over(over, phases).label
        model = models[label]
        k = model.order
        if t < k:
            continue
        recent = seq.values[t - k:t]
        pred = predict_next(model, recent, fits[label], confidence, over=over)
        yield over, pred, seq.values[t]


@dataclass(frozen=True)
class WinRateRow:
    grouping: str  # phase label or "over=<n>"
    bin: tuple[float, float]
    home_win_pct: float
    away_win_pct: float
    delta: float
    n_home: int
    n_away: int


def win_rate_by_threshold(
    seqs: list[PiSequence],
    grouping: str = "phase",
    membership: str = "any",
    bins: tuple[tuple[float, float], ...] = DEFAULT_BINS,
    phases=DEFAULT_PHASES,
) -> list[WinRateRow]:
    """Win percentage of home and away chasers per (grouping, PI bin) cell.

    grouping is "phase" or "over=<n>". With membership "any" a match joins a
    cell when any over-end PI inside the grouping falls in the bin; with
    "last" only the grouping's final over counts. Neutral-venue matches are
    excluded.
    """
    if membership not in ("any", "last"):
        raise ValueError("membership must be 'any' or 'last'")
    groups: list[tuple[str, callable]] = []
    if grouping == "phase":
        for p in phases:
            groups.append((p.label,
                           lambda s, p=p: [v for i, v in enumerate(s.values)
                                           if p.contains(i + 1)]))
    elif grouping.startswith("over="):
        n = int(grouping.split("=", 1)[1])
        groups.append((grouping,
                       lambda s: s.values[n - 1:n] if len(s.values) >= n else []))
    else:
        raise ValueError(f"unknown grouping {grouping!r}")

    rows: list[WinRateRow] = []
    for label, extract in groups:
        for lo, hi in bins:
            wins = {"home": 0, "away": 0}
            totals = {"home": 0, "away": 0}
            for s in seqs:
                if s.home_away not in wins:
                    continue  # neutral venues excluded
                values = extract(s)
                if membership == "last":
                    values = values[-1:]
                if any(lo <= v < hi for v in values):
                    totals[s.home_away] += 1
                    wins[s.home_away] += s.won
            h = 100.0 * wins["home"] / totals["home"] if totals["home"] else 0.0
            a = 100.0 * wins["away"] / totals["away"] if totals["away"] else 0.0
            rows.append(WinRateRow(label, (lo, hi), h, a, h - a,
                                   totals["home"], totals["away"]))
    return rows


@dataclass(frozen=True)
class CalibrationBin:
    lo: float
    hi: float
    n: int
    mean_predicted: float
    observed_rate: float

    @property
    def gap(self) -> float:
        return abs(self.mean_predicted - self.observed_rate)


@dataclass(frozen=True)
class CalibrationReport:
    bins: tuple[CalibrationBin, ...]
    brier: float
    ece: float
    n: int


def calibration(probs, outcomes, n_bins: int = 10) -> CalibrationReport:
    """Brier score and expected calibration error over equal-width bins."""
    probs = list(probs)
    outcomes = list(outcomes)
    if not probs or len(probs) != len(outcomes):
        raise EmptyInput("need matching non-empty probability and outcome lists")
    if any(not 0 <= p <= 1 for p in probs):
        raise ValueError("probabilities must lie in [0, 1]")
    if any(o not in (0, 1) for o in outcomes):
        raise ValueError("outcomes must be 0/1 indicators")
    n = len(probs)
    brier = sum((p - o) ** 2 for p, o in zip(probs, outcomes)) / n

    buckets: list[list[tuple[float, int]]] = [[] for _ in range(n_bins)]
    for p, o in zip(probs, outcomes):
        idx = min(int(p * n_bins), n_bins - 1)
        buckets[idx].append((p, o))
    bins = []
    ece = 0.0
    for i, bucket in enumerate(buckets):
        lo, hi = i / n_bins, (i + 1) / n_bins
        if bucket:
            mp = sum(p for p, _ in bucket) / len(bucket)
            orate = sum(o for _, o in bucket) / len(bucket)
            ece += (len(bucket) / n) * abs(mp - orate)
        else:
            mp = orate = 0.0
        bins.append(CalibrationBin(lo, hi, len(bucket), mp, orate))
    return CalibrationReport(tuple(bins), brier, ece, n)
