"""Zone table lookups and live recommendations."""

import math

import pytest

from chasepressure.distfit import DEFAULT_PHASE_GAMMAS
from chasepressure.markov import Discretizer, build_transitions
from chasepressure.phases import DEATH, MIDDLE, POWERPLAY
from chasepressure.pressure import ChaseContext, InningsState, PiSequence, compute_pi
from chasepressure.strategy import (
    DEATH_BORDERLINE_MESSAGE,
    Zone,
    ZoneRow,
    ZoneTable,
    default_zone_table,
    recommend,
)

TABLE = default_zone_table()
FITS = dict(DEFAULT_PHASE_GAMMAS)


def test_classification_examples():
    assert TABLE.classify(POWERPLAY, "home", 1.2).zone is Zone.RISKY
    assert TABLE.classify(POWERPLAY, "away", 1.2).zone is Zone.AVOID
    for phase in (POWERPLAY, MIDDLE, DEATH):
        for venue in ("home", "away"):
            assert TABLE.classify(phase, venue, 0.3).zone is Zone.TARGET
    assert TABLE.classify(DEATH, "home", 1.8).zone is Zone.ACCEPTABLE
    assert TABLE.classify(MIDDLE, "home", 1.8).zone is Zone.RISKY
    assert TABLE.classify(MIDDLE, "away", 1.8).zone is Zone.AVOID


def test_neutral_uses_away_rows():
    assert TABLE.classify(POWERPLAY, "neutral", 1.2).zone is Zone.AVOID


def test_zone_monotone_in_pi():
    rank = {Zone.TARGET: 0, Zone.ACCEPTABLE: 1, Zone.RISKY: 2, Zone.AVOID: 3}
    for phase in (POWERPLAY, MIDDLE, DEATH):
        for venue in ("home", "away"):
            prev = -1
            for pi in [0.1 * i for i in range(40)]:
                cur = rank[TABLE.classify(phase, venue, pi).zone]
                assert cur >= prev
                prev = cur


def test_intervals_cover_everything():
    for phase in (POWERPLAY, MIDDLE, DEATH):
        for venue in ("home", "away"):
            TABLE.classify(phase, venue, 0.0)
            TABLE.classify(phase, venue, 99.0)


def test_table_validation():
    with pytest.raises(ValueError):
        ZoneTable([ZoneRow("middle", "home", 0.5, math.inf, 50.0, Zone.AVOID)])
    with pytest.raises(ValueError):  # gap between 0.5 and 0.7
        ZoneTable([ZoneRow("middle", "home", 0.0, 0.5, 90.0, Zone.TARGET),
                   ZoneRow("middle", "home", 0.7, math.inf, 10.0, Zone.AVOID)])
    with pytest.raises(ValueError):  # zone improves as PI grows
        ZoneTable([ZoneRow("middle", "home", 0.0, 0.5, 90.0, Zone.AVOID),
                   ZoneRow("middle", "home", 0.5, math.inf, 10.0, Zone.TARGET)])


def test_csv_roundtrip(tmp_path):
    path = tmp_path / "zones.csv"
    TABLE.save_csv(path)
    again = ZoneTable.load_csv(path)
    assert again.rows == TABLE.rows


def test_band_is_target_plus_acceptable():
    assert TABLE.band(POWERPLAY, "home") == (0.0, 1.0)
    assert TABLE.band(DEATH, "home") == (0.0, 2.5)
    assert TABLE.band(MIDDLE, "away") == (0.0, 1.5)


def _models(values_lists, k=2):
    seqs = [PiSequence(values=v) for v in values_lists]
    from chasepressure.phases import DEFAULT_PHASES

    model = build_transitions(seqs, k, Discretizer(0.1))
    return {p.label: model for p in DEFAULT_PHASES}


MODELS = _models([[1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9] * 2])
CTX = ChaseContext(173)


def test_recommend_terminal():
    rec = recommend(17, [1.0, 0.8, 0.0], "home", MODELS, FITS, CTX,
                    InningsState(173, 100, (1,)))
    assert rec.zone is Zone.TARGET
    assert rec.message == "target achieved"
    assert rec.target_band == (0.0, 0.0)
    assert rec.predicted is None
    assert rec.basis == "terminal"


def test_recommend_insufficient_history():
    rec = recommend(1, [1.1], "home", MODELS, FITS, CTX, InningsState(8, 6))
    assert rec.predicted is None
    assert rec.basis == "current"
    assert rec.zone is Zone.RISKY  # classifies the current PI instead


def test_recommend_routes_prediction():
    rec = recommend(8, [1.0, 1.1], "home", MODELS, FITS, CTX,
                    InningsState(68, 48, (2,)))
    assert rec.basis == "predicted"
    assert rec.predicted is not None
    assert rec.predicted.expected_pi == pytest.approx(1.2)
    assert rec.zone is Zone.ACCEPTABLE  # middle overs, home, 1.2


def test_death_borderline_message():
    rec = recommend(17, [1.6, 1.7], "home", MODELS, FITS, CTX,
                    InningsState(121, 102, (1, 2, 3, 4)))
    # the chain continues 1.6, 1.7 -> 1.8, inside the death borderline band
    assert rec.basis == "predicted"
    assert 1.5 <= rec.predicted.expected_pi < 2.5
    assert rec.zone is Zone.ACCEPTABLE
    assert rec.message == DEATH_BORDERLINE_MESSAGE


def test_avoid_zone_hint_inverts_pressure():
    state = InningsState(90, 90, (1, 2, 3, 4, 5))
    history = [2.6, 2.8]
    rec = recommend(15, history, "away", MODELS, FITS, CTX, state, TABLE)
    assert rec.zone is Zone.AVOID
    assert rec.required_run_rate_hint is not None
    boundary = rec.target_band[1]
    after = InningsState(state.runs_scored + rec.required_run_rate_hint,
                         state.balls_faced + 6, state.dismissed_positions)
    assert compute_pi(CTX, after) == pytest.approx(boundary, abs=1e-6)


def test_zone_pure_function():
    a = TABLE.classify(MIDDLE, "home", 1.23)
    b = TABLE.classify(MIDDLE, "home", 1.23)
    assert a == b
