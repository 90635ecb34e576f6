"""Pressure index formula, censoring, and sequence construction."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from chasepressure.errors import BallsExhausted, NonMonotoneInnings, TargetReached
from chasepressure.pressure import (
    ChaseContext,
    InningsState,
    PiSequence,
    WicketWeights,
    compute_crrr,
    compute_irrr,
    compute_pi,
    pi_sequence,
)

CTX = ChaseContext(154)


def test_irrr():
    assert compute_irrr(CTX) == pytest.approx(154 * 6 / 120)
    assert compute_irrr(ChaseContext(120)) == pytest.approx(6.0)


def test_crrr_midway():
    st_ = InningsState(89, 60, (1,))
    assert compute_crrr(CTX, st_) == pytest.approx((154 - 89) * 6 / 60)


def test_crrr_terminal_errors():
    with pytest.raises(TargetReached):
        compute_crrr(CTX, InningsState(154, 90))
    with pytest.raises(BallsExhausted):
        compute_crrr(CTX, InningsState(100, 120))


def test_pi_is_one_at_start():
    for target in (1, 80, 154, 260):
        assert compute_pi(ChaseContext(target), InningsState(0, 0)) == pytest.approx(1.0)


def test_pi_zero_iff_target_reached():
    assert compute_pi(CTX, InningsState(154, 100)) == 0.0
    assert compute_pi(CTX, InningsState(160, 100)) == 0.0
    assert compute_pi(CTX, InningsState(153, 100)) > 0.0


def test_pi_known_midchase_value():
    # 89/1 after 10 overs chasing 154: a comfortably placed chase sits near 1.13.
    pi = compute_pi(CTX, InningsState(89, 60, (1,)))
    assert pi == pytest.approx(1.13, abs=0.05)


def test_wicket_weights_validation():
    with pytest.raises(ValueError):
        WicketWeights({1: 1.0})
    with pytest.raises(ValueError):
        WicketWeights({i: (-1.0 if i == 5 else 1.0) for i in range(1, 12)})
    w = WicketWeights()
    assert w.total((1, 2)) == pytest.approx(2.65)
    assert w.total(()) == 0.0


def test_innings_state_validation():
    with pytest.raises(ValueError):
        InningsState(-1, 0)
    with pytest.raises(ValueError):
        InningsState(0, 0, (1, 1))
    with pytest.raises(ValueError):
        InningsState(0, 0, (0,))
    with pytest.raises(ValueError):
        InningsState(0, 0, tuple(range(1, 12)))


@given(runs=st.integers(0, 150), balls=st.integers(0, 114),
       wickets=st.integers(0, 9))
@settings(max_examples=300, deadline=None)
def test_pi_monotone_in_wickets(runs, balls, wickets):
    base = compute_pi(CTX, InningsState(runs, balls, tuple(range(1, wickets + 1))))
    more = compute_pi(CTX, InningsState(runs, balls, tuple(range(1, wickets + 2))))
    if base > 0:
        assert more >= base - 1e-12


@given(runs=st.integers(0, 140), balls=st.integers(0, 114))
@settings(max_examples=300, deadline=None)
def test_pi_monotone_in_deficit(runs, balls):
    low = compute_pi(CTX, InningsState(runs, balls))
    high = compute_pi(CTX, InningsState(min(runs + 10, 153), balls))
    assert high <= low + 1e-12


def test_pi_sequence_censoring_and_wickets():
    states = [InningsState(20, 6), InningsState(45, 12, (1,)),
              InningsState(90, 18, (1,))]
    seq = pi_sequence(ChaseContext(90), states)
    assert seq.values[-1] == 0.0
    assert seq.wicket_overs == [2]
    assert len(seq) == 3


def test_pi_sequence_rejects_decreasing_runs():
    with pytest.raises(NonMonotoneInnings):
        pi_sequence(CTX, [InningsState(20, 6), InningsState(10, 12)])


def test_pi_sequence_value_invariant():
    with pytest.raises(ValueError):
        PiSequence(values=[1.0, 0.0, 0.5])
    with pytest.raises(ValueError):
        PiSequence(values=[-0.1])
    PiSequence(values=[1.0, 0.5, 0.0, 0.0])  # trailing zeros fine


def test_context_validation():
    with pytest.raises(ValueError):
        ChaseContext(0)
    with pytest.raises(ValueError):
        ChaseContext(100, 121)


def literal_pressure_formula(ctx, state, weights, table):
    """Independent transcription of the pressure formula for oracle checks."""
    if state.runs_scored >= ctx.target:
        return 0.0
    irrr = ctx.target * 6 / ctx.total_balls
    crrr = (ctx.target - state.runs_scored) * 6 / (ctx.total_balls - state.balls_faced)
    start = table.remaining(ctx.total_balls, 0)
    ru = 100.0 * (start - table.remaining(
        ctx.total_balls - state.balls_faced, state.wickets)) / start
    wsum = sum(weights.weight_by_position[p] for p in state.dismissed_positions)
    return max(0.0, (crrr / irrr) * 0.5 * (math.exp(ru / 100) + math.exp(wsum / 11)))


@given(target=st.integers(40, 260), overs=st.integers(0, 19),
       pct=st.floats(0, 1), wickets=st.integers(0, 9))
@settings(max_examples=500, deadline=None)
def test_matches_literal_formula(target, overs, pct, wickets):
    from chasepressure.resources import ResourceTable

    ctx = ChaseContext(target)
    runs = int(pct * (target - 1))
    state = InningsState(runs, overs * 6, tuple(range(1, wickets + 1)))
    weights, table = WicketWeights(), ResourceTable.bundled()
    expected = literal_pressure_formula(ctx, state, weights, table)
    assert compute_pi(ctx, state, weights, table) == pytest.approx(expected, rel=1e-12)
