"""Discretized order-k Markov models over over-end pressure index values.

Sequences are rounded onto a fixed grid, transition counts are accumulated
per match (windows never cross match boundaries), and the next over-end
value is predicted from the conditional distribution of the matching state
tuple, a sum-matched pool of tuples, or a gamma fallback, in that order.
"""

from __future__ import annotations

import enum
import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from scipy.stats import gamma as _gamma_dist

from .errors import EmptyCorpus, ModelPhaseMismatch, ParseError
from .phases import Phase
from .pressure import PiSequence

MODEL_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Discretizer:
    """Rounds PI values to the nearest multiple of the grid step."""

    precision: float = 0.1

    def __post_init__(self):
        if self.precision <= 0:
            raise ValueError("grid step must be positive")

    def index(self, pi: float) -> int:
        """Grid index of the nearest multiple of the step; half rounds up."""
        if pi < 0:
            raise ValueError("pressure index values are censored at 0")
        # Pre-round the quotient so values sitting exactly on a half-step
        # boundary are not pushed down by float representation error.
        return int(math.floor(round(pi / self.precision, 9) + 0.5))

    def value(self, idx: int) -> float:
        return round(idx * self.precision, 9)

    def discretize(self, pi: float) -> float:
        return self.value(self.index(pi))


class PredictionSource(enum.Enum):
    MARKOV_EXACT = "MarkovExact"
    MARKOV_SUM_MATCHED = "MarkovSumMatched"
    GAMMA_FALLBACK = "GammaFallback"


@dataclass(frozen=True)
class Prediction:
    expected_pi: float
    interval: tuple[float, float]
    source: PredictionSource
    n_observations: int = 0  # pooled transition count behind the estimate


@dataclass
class TransitionModel:
    """Sparse order-k transition counts over grid indices."""

    order: int
    precision: float
    counts: dict[tuple[int, ...], Counter]
    n_transitions: int
    phase: Phase | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self._sum_index: dict[int, list[tuple[int, ...]]] = {}
        for key in self.counts:
            self._sum_index.setdefault(sum(key), []).append(key)

    @property
    def discretizer(self) -> Discretizer:
        return Discretizer(self.precision)

    @property
    def n_states(self) -> int:
        return len(self.counts)

    @property
    def n_unique_transitions(self) -> int:
        return sum(len(c) for c in self.counts.values())

    def probabilities(self, key: tuple[int, ...]) -> dict[int, float]:
        c = self.counts[key]
        total = sum(c.values())
        return {nxt: n / total for nxt, n in c.items()}

    def tuples_with_sum(self, s: int) -> list[tuple[int, ...]]:
        return self._sum_index.get(s, [])


def discretize(pi: float, d: Discretizer) -> float:
    return d.discretize(pi)


def _windows(seq: PiSequence, k: int, d: Discretizer, phase: Phase | None,
             start: int | None = None):
    idx = [d.index(v) for v in seq.values]
    for t in range(max(k, start or 0), len(idx)):
        if phase is not None and not phase.contains(t + 1):
            continue  # window predicts over t+1
        yield tuple(idx[t - k:t]), idx[t]


def build_transitions(
    seqs: list[PiSequence],
    k: int,
    d: Discretizer | None = None,
    phase: Phase | None = None,
    metadata: dict | None = None,
) -> TransitionModel:
    """Accumulate order-k transition counts; windows stay within one match."""
    if k < 1:
        raise ValueError("order must be >= 1")
    d = d or Discretizer()
    counts: dict[tuple[int, ...], Counter] = {}
    n_transitions = 0
    for seq in seqs:
        for key, nxt in _windows(seq, k, d, phase):
            counts.setdefault(key, Counter())[nxt] += 1
            n_transitions += 1
    if n_transitions == 0:
        raise EmptyCorpus(f"no sequence long enough for order {k}")
    meta = dict(metadata or {})
    meta.setdefault("train_match_ids", sorted({s.match_id for s in seqs}))
    return TransitionModel(k, d.precision, counts, n_transitions, phase, meta)


def log_likelihood(
    model: TransitionModel,
    seqs: list[PiSequence],
    return_uncovered: bool = False,
    start: int | None = None,
):
    """Sum of log conditional probabilities over all windows in seqs.

    Transitions the model has never seen contribute log(eps) with
    eps = 1/(n_transitions + 1) and are tallied separately as uncovered.
    `start` fixes the first predicted position (0-based), letting models of
    different orders be scored on identical targets.
    """
    d = model.discretizer
    eps = 1.0 / (model.n_transitions + 1)
    total = 0.0
    uncovered = 0
    for seq in seqs:
        for key, nxt in _windows(seq, model.order, d, model.phase, start):
            c = model.counts.get(key)
            if c is None or nxt not in c:
                total += math.log(eps)
                uncovered += 1
            else:
                total += math.log(c[nxt] / sum(c.values()))
    return (total, uncovered) if return_uncovered else total


@dataclass(frozen=True)
class OrderStats:
    order: int
    n_observations: int  # training transitions
    n_parameters: int  # unique observed transitions
    log_likelihood: float  # held-out
    aic: float
    bic: float
    ratio: float  # parameters / observations
    uncovered: int  # held-out transitions unseen in training


@dataclass
class ModelSelectionReport:
    rows: list[OrderStats]
    recommended_order: int
    train_match_ids: list[str]
    test_match_ids: list[str]
    seed: int
    precision: float


def select_order(
    seqs: list[PiSequence],
    k_max: int,
    d: Discretizer | None = None,
    split: float = 0.8,
    seed: int = 0,
) -> ModelSelectionReport:
    """Compare orders 1..k_max on a seeded match-level train/test split.

    Recommends the order with the best held-out log-likelihood among those
    whose parameter-to-observation ratio is below 1; likelihood ties within
    1e-9 go to the smaller order.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if not 0 < split < 1:
        raise ValueError("split must be in (0, 1)")
    if not seqs:
        raise EmptyCorpus("no sequences to select over")
    d = d or Discretizer()
    order_ix = list(range(len(seqs)))
    random.Random(seed).shuffle(order_ix)
    n_train = max(1, round(split * len(seqs)))
    if n_train == len(seqs) and len(seqs) > 1:
        n_train -= 1
    train = [seqs[i] for i in order_ix[:n_train]]
    test = [seqs[i] for i in order_ix[n_train:]]

    rows: list[OrderStats] = []
    for k in range(1, k_max + 1):
        model = build_transitions(train, k, d)
        # All orders are scored on the same held-out targets (positions
        # k_max onward); otherwise longer orders see fewer, easier windows.
        ll, uncovered = log_likelihood(model, test, return_uncovered=True,
                                       start=k_max)
        m_k = model.n_unique_transitions
        n_obs = model.n_transitions
        rows.append(OrderStats(
            order=k,
            n_observations=n_obs,
            n_parameters=m_k,
            log_likelihood=ll,
            aic=2 * m_k - 2 * ll,
            bic=m_k * math.log(n_obs) - 2 * ll,
            ratio=m_k / n_obs,
            uncovered=uncovered,
        ))

    admissible = [r for r in rows if r.ratio < 1] or sorted(rows, key=lambda r: r.ratio)[:1]
    best = max(admissible, key=lambda r: r.log_likelihood)
    for r in sorted(admissible, key=lambda r: r.order):
        if best.log_likelihood - r.log_likelihood <= 1e-9:
            best = r
            break
    return ModelSelectionReport(
        rows=rows,
        recommended_order=best.order,
        train_match_ids=sorted({s.match_id for s in train}),
        test_match_ids=sorted({s.match_id for s in test}),
        seed=seed,
        precision=d.precision,
    )


def _gamma_params(fallback) -> tuple[float, float]:
    if isinstance(fallback, tuple):
        shape, rate = fallback
    else:
        shape, rate = fallback.shape, fallback.rate
    if shape <= 0 or rate <= 0:
        raise ValueError("gamma fallback needs positive shape and rate")
    return float(shape), float(rate)


def _weighted_percentile(dist: Counter, d: Discretizer, q: float) -> float:
    total = sum(dist.values())
    cum = 0
    for idx in sorted(dist):
        cum += dist[idx]
        if cum / total >= q:
            return d.value(idx)
    return d.value(max(dist))


MIN_INTERVAL_COUNT = 5  # pooled observations needed for an empirical interval


def predict_next(
    model: TransitionModel,
    recent: list[float],
    fallback,
    confidence: float = 0.95,
    over: int | None = None,
) -> Prediction:
    """Predict the next over-end PI from the last `order` raw PI values.

    `fallback` provides the gamma parameters used when the state tuple has
    no usable match: a (shape, rate) pair or any object with those fields.
    """
    if len(recent) != model.order:
        raise ValueError(f"need exactly {model.order} recent values")
    if over is not None and model.phase is not None and not model.phase.contains(over):
        raise ModelPhaseMismatch(
            f"over {over} is outside this model's phase {model.phase.label}")
    d = model.discretizer
    key = tuple(d.index(v) for v in recent)
    if key[-1] == 0:
        return Prediction(0.0, (0.0, 0.0), PredictionSource.MARKOV_EXACT, 0)

    lo_q, hi_q = (1 - confidence) / 2, (1 + confidence) / 2
    dist: Counter | None = None
    source = PredictionSource.MARKOV_EXACT
    if key in model.counts:
        dist = model.counts[key]
    else:
        # Tuples ending in 0 are absorbing and describe finished chases, so
        # they are excluded from pooling for a live (nonzero) state.
        pool = [t for t in model.tuples_with_sum(sum(key)) if t[-1] != 0]
        if pool:
            dist = Counter()
            for t in pool:
                dist.update(model.counts[t])
            source = PredictionSource.MARKOV_SUM_MATCHED

    shape, rate = _gamma_params(fallback)
    if dist is not None:
        total = sum(dist.values())
        expected = sum(n * d.value(idx) for idx, n in dist.items()) / total
        if total >= MIN_INTERVAL_COUNT:
            interval = (_weighted_percentile(dist, d, lo_q),
                        _weighted_percentile(dist, d, hi_q))
        else:
            interval = _shifted_gamma_interval(shape, rate, expected, lo_q, hi_q)
        return Prediction(expected, interval, source, total)

    expected = shape / rate
    interval = _shifted_gamma_interval(shape, rate, expected, lo_q, hi_q)
    return Prediction(expected, interval, PredictionSource.GAMMA_FALLBACK, 0)


def _shifted_gamma_interval(shape, rate, expected, lo_q, hi_q) -> tuple[float, float]:
    shift = expected - shape / rate
    lo = max(0.0, _gamma_dist.ppf(lo_q, shape, scale=1 / rate) + shift)
    hi = max(0.0, _gamma_dist.ppf(hi_q, shape, scale=1 / rate) + shift)
    return (lo, hi)


@dataclass(frozen=True)
class SparsityReport:
    n_states: int
    n_unique_transitions: int
    n_transitions: int
    singleton_pct: float  # unique transitions observed exactly once
    reliable_state_pct: float  # state tuples with total count >= threshold
    reliable_threshold: int
    top_transitions: list[tuple[tuple[int, ...], int, int]]  # (state, next, count)


def sparsity_report(model: TransitionModel, top_n: int = 10,
                    reliable_threshold: int = 10) -> SparsityReport:
    singletons = 0
    reliable = 0
    flat: list[tuple[tuple[int, ...], int, int]] = []
    for key, c in model.counts.items():
        if sum(c.values()) >= reliable_threshold:
            reliable += 1
        for nxt, n in c.items():
            if n == 1:
                singletons += 1
            flat.append((key, nxt, n))
    flat.sort(key=lambda item: (-item[2], item[0], item[1]))
    uniq = model.n_unique_transitions
    return SparsityReport(
        n_states=model.n_states,
        n_unique_transitions=uniq,
        n_transitions=model.n_transitions,
        singleton_pct=100.0 * singletons / uniq if uniq else 0.0,
        reliable_state_pct=100.0 * reliable / model.n_states if model.n_states else 0.0,
        reliable_threshold=reliable_threshold,
        top_transitions=flat[:top_n],
    )


def save_model(model: TransitionModel, path: str | Path) -> None:
    payload = {
        "kind": "chasepressure-markov",
        "schema_version": MODEL_SCHEMA_VERSION,
        "order": model.order,
        "precision": model.precision,
        "phase": None if model.phase is None else {
            "label": model.phase.label,
            "first_over": model.phase.first_over,
            "last_over": model.phase.last_over,
        },
        "n_transitions": model.n_transitions,
        "metadata": model.metadata,
        "counts": {
            ",".join(map(str, key)): {str(nxt): n for nxt, n in c.items()}
            for key, c in model.counts.items()
        },
    }
    Path(path).write_text(json.dumps(payload))


def load_model(path: str | Path) -> TransitionModel:
    payload = json.loads(Path(path).read_text())
    if payload.get("kind") != "chasepressure-markov":
        raise ParseError(f"{path} is not a transition model file")
    if payload.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise ParseError(f"unsupported model schema {payload.get('schema_version')}")
    phase = None
    if payload["phase"] is not None:
        p = payload["phase"]
        phase = Phase(p["label"], p["first_over"], p["last_over"])
    counts = {
        tuple(int(x) for x in key.split(",")): Counter({int(n): v for n, v in c.items()})
        for key, c in payload["counts"].items()
    }
    return TransitionModel(payload["order"], payload["precision"], counts,
                           payload["n_transitions"], phase, payload["metadata"])
