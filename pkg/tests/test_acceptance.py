"""Acceptance suite: one test per release criterion, at stated tolerances."""

import json
import math
import random
import threading

import numpy as np
import pytest
from fastapi.testclient import TestClient

from chasepressure import ingest
from chasepressure.distfit import DEFAULT_PHASE_GAMMAS, Family, bootstrap_ks, fit_family
from chasepressure.evaluate import calibration, evaluate_predictions
from chasepressure.markov import (
    Discretizer,
    build_transitions,
    log_likelihood,
    select_order,
    sparsity_report,
)
from chasepressure.phases import DEATH, DEFAULT_PHASES, MIDDLE, POWERPLAY
from chasepressure.pressure import (
    ChaseContext,
    InningsState,
    PiSequence,
    WicketWeights,
    compute_pi,
    pi_sequence,
)
from chasepressure.resources import ResourceTable
from chasepressure.server import ModelBundle, create_app
from chasepressure.strategy import Zone, default_zone_table
from conftest import fixture_text, markov_corpus, random_kernel

D = Discretizer(0.1)


def _random_state(rng, ctx):
    balls = rng.randrange(0, ctx.total_balls)
    runs = rng.randrange(0, ctx.target)
    wickets = rng.randrange(0, 10)
    return InningsState(runs, balls, tuple(range(1, wickets + 1)))


def test_pi_identity_suite():
    rng = random.Random(101)
    for _ in range(1000):
        ctx = ChaseContext(rng.randrange(40, 260), rng.choice([60, 90, 120]))
        assert compute_pi(ctx, InningsState(0, 0)) == pytest.approx(1.0)

    ctx = ChaseContext(154)
    for _ in range(10_000):
        st = _random_state(rng, ctx)
        pi = compute_pi(ctx, st)
        assert (pi == 0.0) == (st.runs_scored >= ctx.target)
        if st.wickets < 9 and pi > 0:
            worse = InningsState(st.runs_scored, st.balls_faced,
                                 st.dismissed_positions + (st.wickets + 1,))
            assert compute_pi(ctx, worse) >= pi - 1e-12
        if st.runs_scored >= 1:
            behind = InningsState(st.runs_scored - 1, st.balls_faced,
                                  st.dismissed_positions)
            assert compute_pi(ctx, behind) >= pi - 1e-12


def test_pressure_formula_oracle_equivalence():
    weights = WicketWeights()
    table = ResourceTable.bundled()
    rng = random.Random(202)
    ctx = ChaseContext(154)
    for _ in range(10_000):
        st = _random_state(rng, ctx)
        if st.runs_scored >= ctx.target:
            continue
        irrr = ctx.target * 6 / ctx.total_balls
        crrr = (ctx.target - st.runs_scored) * 6 / (ctx.total_balls - st.balls_faced)
        start = table.remaining(ctx.total_balls, 0)
        ru = 100 * (start - table.remaining(
            ctx.total_balls - st.balls_faced, st.wickets)) / start
        wsum = sum(weights.weight_by_position[p] for p in st.dismissed_positions)
        oracle = max(0.0, (crrr / irrr) * 0.5
                     * (math.exp(ru / 100) + math.exp(wsum / 11)))
        assert compute_pi(ctx, st, weights, table) == pytest.approx(oracle, rel=1e-12)


def _fixture_trace(name):
    rec = ingest.parse_match(fixture_text(name))
    ctx = ChaseContext(rec.target, rec.total_balls)
    return pi_sequence(ctx, rec.over_end_states()).values


# Two late overs of this chase sit outside what any monotone resource table
# can reproduce alongside the rest of the trace; see notes on the bundled
# table calibration. The assertion is kept at the stated tolerance.
def test_reference_chase_pak_wi_replay():
    expected = [1.04, 1.04, 0.99, 0.91, 0.93, 1.04, 1.03, 1.03, 1.05, 1.13,
                1.11, 1.08, 1.15, 1.17, 0.83, 0.62, 0.0]
    got = _fixture_trace("t20i_2018_pak_wi.json")
    assert len(got) == len(expected)
    assert got[-1] == 0.0
    for over, (g, e) in enumerate(zip(got, expected), start=1):
        assert g == pytest.approx(e, abs=0.05), f"over {over}: {g:.3f} vs {e}"


def test_reference_chase_csk_dc_replay():
    expected = [1.08, 1.11, 1.24, 1.13, 1.19, 1.14, 1.21, 1.30, 1.36, 1.45,
                1.43, 1.56, 1.51, 1.69, 2.29, 2.49, 2.68, 2.85, 3.39, 0.0]
    got = _fixture_trace("ipl_2021_csk_dc.json")
    assert len(got) == len(expected)
    assert got[-1] == 0.0
    for over, (g, e) in enumerate(zip(got, expected), start=1):
        assert g == pytest.approx(e, abs=0.05), f"over {over}: {g:.3f} vs {e}"


@pytest.mark.parametrize("true_k", [1, 2, 3])
def test_order_recovery(true_k):
    hits = 0
    for seed in range(20):
        seqs = markov_corpus(k=true_k, n_seqs=2000, length=20, seed=1000 + seed)
        report = select_order(seqs, k_max=4, d=D, seed=seed)
        hits += report.recommended_order == true_k
    assert hits >= 18, f"order {true_k} recovered in only {hits}/20 runs"


def test_transition_counts_brute_force_equivalence():
    seqs = markov_corpus(k=2, n_seqs=50, length=20, seed=55)
    for k in (1, 2, 3):
        model = build_transitions(seqs, k, D)
        counts = {}
        n = 0
        for s in seqs:
            idx = [D.index(v) for v in s.values]
            for t in range(k, len(idx)):
                key = tuple(idx[t - k:t])
                counts.setdefault(key, {}).setdefault(idx[t], 0)
                counts[key][idx[t]] += 1
                n += 1
        assert {k_: dict(c) for k_, c in model.counts.items()} == counts
        assert model.n_transitions == n
        for key in model.counts:
            assert abs(sum(model.probabilities(key).values()) - 1.0) < 1e-12


def test_censored_absorption_scan():
    finishing = [PiSequence(values=[1.3, 1.0, 0.6, 0.0, 0.0], match_id=f"f{i}")
                 for i in range(5)]
    seqs = markov_corpus(k=2, n_seqs=30, length=15, seed=77) + finishing
    for k in (1, 2, 3):
        model = build_transitions(seqs, k, D)
        for key, counter in model.counts.items():
            if key[-1] == 0:
                assert set(counter) == {0}, f"nonzero successor after 0 at {key}"


def test_sparsity_and_coverage_trend_across_precision():
    rng = random.Random(303)
    base = markov_corpus(k=2, n_seqs=120, length=20, seed=31)
    noisy = [PiSequence(values=[max(0.01, v + rng.uniform(-0.03, 0.03))
                                for v in s.values], match_id=s.match_id)
             for s in base]
    train, test = noisy[:90], noisy[90:]
    singleton = []
    coverage = []
    for delta in (0.01, 0.05, 0.1, 0.25, 0.5):
        model = build_transitions(train, 2, Discretizer(delta))
        singleton.append(sparsity_report(model).singleton_pct)
        _, uncovered = log_likelihood(model, test, return_uncovered=True)
        n_test = sum(len(s.values) - 2 for s in test)
        coverage.append(100 * (1 - uncovered / n_test))
    assert all(a >= b - 1e-9 for a, b in zip(singleton, singleton[1:])), singleton
    assert all(a <= b + 1e-9 for a, b in zip(coverage, coverage[1:])), coverage


@pytest.mark.parametrize("shape,rate", [(38.276, 28.931), (18.447, 10.62),
                                        (3.667, 1.286)])
def test_gamma_mle_recovery(shape, rate):
    rng = np.random.default_rng(int(shape * 1000))
    x = rng.gamma(shape, 1 / rate, 100_000)
    fit = fit_family(x, Family.GAMMA)
    assert fit.shape == pytest.approx(shape, rel=0.02)
    assert fit.rate == pytest.approx(rate, rel=0.02)
    # the gamma MLE matches the first moment; 3 standard errors of the mean
    se = float(x.std()) / math.sqrt(x.size)
    assert abs(fit.mean - float(x.mean())) <= 3 * se

    def mean_ll(theta):
        a, b = theta
        return float(np.mean(a * np.log(b) - math.lgamma(a)
                             + (a - 1) * np.log(x) - b * x))

    h = 1e-6
    for i in range(2):
        up = [fit.shape, fit.rate]
        dn = [fit.shape, fit.rate]
        up[i] += h
        dn[i] -= h
        grad = (mean_ll(up) - mean_ll(dn)) / (2 * h)
        assert abs(grad) < 1e-6


def test_phase_parameter_cross_check():
    means = {label: s / r for label, (s, r) in DEFAULT_PHASE_GAMMAS.items()}
    for label, published in [(POWERPLAY, 1.323), (MIDDLE, 1.740), (DEATH, 2.859)]:
        assert means[label] == pytest.approx(published, abs=0.01)


def test_bootstrap_ks_null_rejection_rate():
    rejections = 0
    runs = 200
    for seed in range(runs):
        rng = np.random.default_rng(5000 + seed)
        x = rng.gamma(2.5, 0.6, 500)
        _, p = bootstrap_ks(x, Family.GAMMA, B=500, seed=seed)
        rejections += p < 0.05
    rate = rejections / runs
    assert 0.02 <= rate <= 0.09, f"rejection rate {rate}"


def test_calibration_arithmetic():
    assert calibration([0.0, 1.0, 1.0], [0, 1, 1]).brier == 0.0
    assert calibration([0.0, 1.0, 1.0], [0, 1, 1]).ece == 0.0
    assert calibration([0.2, 0.8], [0, 1]).brier == pytest.approx(0.04)
    rng = np.random.default_rng(8)
    outcomes = rng.integers(0, 2, 10_000).tolist()
    r = calibration([0.5] * 10_000, outcomes)
    assert r.brier == pytest.approx(0.25, abs=0.01)
    assert r.ece == pytest.approx(abs(0.5 - np.mean(outcomes)), abs=1e-9)


def test_phasewise_models_beat_global():
    rng = random.Random(12)
    states = [8, 9, 10, 11, 12]
    kernels = {POWERPLAY: random_kernel(2, states, rng),
               MIDDLE: random_kernel(2, states, rng),
               DEATH: random_kernel(2, states, rng)}

    def draw(kernel, ctx, rng):
        r = rng.random()
        cum = 0.0
        for s, p in kernel[ctx]:
            cum += p
            if r <= cum:
                return s
        return kernel[ctx][-1][0]

    def sample(i):
        seq = [rng.choice(states), rng.choice(states)]
        for t in range(2, 20):
            over = t + 1
            label = POWERPLAY if over <= 6 else MIDDLE if over <= 16 else DEATH
            seq.append(draw(kernels[label], tuple(seq[-2:]), rng))
        return PiSequence(values=[D.value(s) for s in seq], match_id=f"g{i}")

    seqs = [sample(i) for i in range(2000)]
    train, test = seqs[:1600], seqs[1600:]
    meta = {"train_match_ids": [s.match_id for s in train]}
    fits = dict(DEFAULT_PHASE_GAMMAS)
    global_model = build_transitions(train, 2, D, metadata=dict(meta))
    phase_models = {p.label: build_transitions(train, 2, D, phase=p,
                                               metadata=dict(meta))
                    for p in DEFAULT_PHASES}
    suite_g = evaluate_predictions(global_model, fits, test)
    suite_p = evaluate_predictions(phase_models, fits, test)
    for label in (POWERPLAY, MIDDLE, DEATH):
        assert suite_p.by_phase[label].mae < suite_g.by_phase[label].mae, label


def test_zone_table_transcription():
    T, A, R, V = Zone.TARGET, Zone.ACCEPTABLE, Zone.RISKY, Zone.AVOID
    inf = math.inf
    expected = {
        (POWERPLAY, "home"): [(0, 0.5, 100.0, T), (0.5, 1, 73.7, A),
                              (1, 1.5, 42.7, R), (1.5, 2.5, 13.9, V),
                              (2.5, inf, 0.0, V)],
        (POWERPLAY, "away"): [(0, 0.5, 100.0, T), (0.5, 1, 62.2, A),
                              (1, 1.5, 36.6, V), (1.5, 2.5, 10.5, V),
                              (2.5, inf, 0.0, V)],
        (MIDDLE, "home"): [(0, 0.5, 100.0, T), (0.5, 1, 100.0, T),
                           (1, 1.5, 75.7, A), (1.5, 2.5, 43.6, R),
                           (2.5, inf, 6.9, V)],
        (MIDDLE, "away"): [(0, 0.5, 100.0, T), (0.5, 1, 98.4, T),
                           (1, 1.5, 70.7, A), (1.5, 2.5, 35.9, V),
                           (2.5, inf, 3.7, V)],
        (DEATH, "home"): [(0, 0.5, 100.0, T), (0.5, 1, 100.0, T),
                          (1, 1.5, 87.3, A), (1.5, 2.5, 75.9, A),
                          (2.5, inf, 11.2, V)],
        (DEATH, "away"): [(0, 0.5, 100.0, T), (0.5, 1, 96.8, T),
                          (1, 1.5, 70.2, A), (1.5, 2.5, 68.2, A),
                          (2.5, inf, 8.1, V)],
    }
    table = default_zone_table()
    for (phase, venue), rows in expected.items():
        got = sorted((r for r in table.rows
                      if r.phase == phase and r.venue_class == venue),
                     key=lambda r: r.lo)
        assert [(r.lo, r.hi, r.win_rate, r.zone) for r in got] == [
            (float(lo), float(hi), wr, z) for lo, hi, wr, z in rows]


def _bundle():
    seqs = markov_corpus(k=3, n_seqs=50, length=20, seed=99)
    model = build_transitions(seqs, 3, D)
    return ModelBundle(models={p.label: model for p in DEFAULT_PHASES},
                       fits=dict(DEFAULT_PHASE_GAMMAS))


def test_service_replay_determinism_and_append_race():
    client = TestClient(create_app(_bundle()))
    rec = ingest.parse_match(fixture_text("t20i_2018_pak_wi.json"))
    entries = []
    prev = ()
    for i, st in enumerate(rec.over_end_states(), start=1):
        entries.append({"over": i, "runs": st.runs_scored,
                        "balls": st.balls_faced,
                        "dismissed_positions": list(st.dismissed_positions[len(prev):])})
        prev = st.dismissed_positions

    def replay():
        sid = client.post("/sessions", json={
            "target": rec.target, "total_balls": rec.total_balls,
            "venue_class": "home"}).json()["session_id"]
        return [client.post(f"/sessions/{sid}/overs", json=e).content
                for e in entries]

    first, second = replay(), replay()
    assert first == second
    assert json.loads(first[-1])["current_pi"] == 0.0

    sid = client.post("/sessions", json={"target": 160}).json()["session_id"]
    results = []
    barrier = threading.Barrier(2)

    def racer():
        barrier.wait()
        r = client.post(f"/sessions/{sid}/overs", json={"over": 1, "runs": 6})
        results.append(r.status_code)

    threads = [threading.Thread(target=racer) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(results) == [200, 409]
