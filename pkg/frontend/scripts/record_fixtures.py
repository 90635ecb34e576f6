"""Record HTTP payload fixtures for the frontend test suite.

Runs the real service in-process and captures byte-faithful JSON bodies:

- session_replay.json: a full chase replayed over-by-over, plus the final
  session snapshot and the /models and /healthz bodies.
- validation_cases.json: create/append requests with the status the server
  actually returned, for the client-side validation parity suite.
- whatif.json: a hypothetical next over appended to a throwaway clone of
  the replay session.

Usage: python3 frontend/scripts/record_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from chasepressure.distfit import DEFAULT_PHASE_GAMMAS
from chasepressure.ingest import parse_match
from chasepressure.markov import build_transitions
from chasepressure.server import ModelBundle, create_app

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "tests"))
from conftest import fixture_text, markov_corpus  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def build_bundle() -> ModelBundle:
    corpus = markov_corpus(k=2, n_seqs=200, length=20, seed=3)
    model = build_transitions(corpus, k=2)
    models = {"powerplay": model, "middle": model, "death": model}
    return ModelBundle(models=models, fits=dict(DEFAULT_PHASE_GAMMAS))


def over_entries(match) -> list[dict]:
    """Cumulative over-end entries for the append endpoint."""
    entries = []
    prev_positions: tuple[int, ...] = ()
    for i, st in enumerate(match.over_end_states(), start=1):
        new = [p for p in st.dismissed_positions if p not in prev_positions]
        entry = {"over": i, "runs": st.runs_scored, "dismissed_positions": new}
        if st.balls_faced != min(i * 6, match.total_balls):
            entry["balls"] = st.balls_faced
        entries.append(entry)
        prev_positions = st.dismissed_positions
    return entries


def record_replay(client: TestClient) -> dict:
    match = parse_match(fixture_text("t20i_2018_pak_wi.json"))
    create_req = {"target": match.target, "total_balls": match.total_balls,
                  "venue_class": "home"}
    created = client.post("/sessions", json=create_req)
    sid = created.json()["session_id"]
    overs = []
    for entry in over_entries(match):
        resp = client.post(f"/sessions/{sid}/overs", json=entry)
        overs.append({"request": entry, "status": resp.status_code,
                      "body": resp.json()})
    snapshot = client.get(f"/sessions/{sid}")
    return {
        "create": {"request": create_req, "status": created.status_code,
                   "body": created.json()},
        "overs": overs,
        "session": {"status": snapshot.status_code, "body": snapshot.json()},
        "models": client.get("/models").json(),
        "healthz": client.get("/healthz").json(),
    }


CREATE_CASES = [
    {"target": 154, "total_balls": 120, "venue_class": "home"},
    {"target": 1, "total_balls": 6, "venue_class": "neutral"},
    {"target": 0, "total_balls": 120, "venue_class": "home"},
    {"target": -3, "total_balls": 120, "venue_class": "away"},
    {"target": 154, "total_balls": 121, "venue_class": "home"},
    {"target": 154, "total_balls": 0, "venue_class": "home"},
    {"target": 154, "total_balls": 120, "venue_class": "mars"},
]

# (prior accepted overs, probe request) pairs against a fresh 154/120 session.
APPEND_CASES = [
    # in-sequence first over
    ([], {"over": 1, "runs": 8, "dismissed_positions": []}),
    # out-of-order: skipping ahead
    ([], {"over": 2, "runs": 8, "dismissed_positions": []}),
    # duplicate over number
    ([{"over": 1, "runs": 8, "dismissed_positions": []}],
     {"over": 1, "runs": 12, "dismissed_positions": []}),
    # cumulative runs decreasing
    ([{"over": 1, "runs": 8, "dismissed_positions": []}],
     {"over": 2, "runs": 5, "dismissed_positions": []}),
    # wicket in a valid over
    ([{"over": 1, "runs": 8, "dismissed_positions": []}],
     {"over": 2, "runs": 13, "dismissed_positions": [2]}),
    # re-dismissing an already-out position
    ([{"over": 1, "runs": 8, "dismissed_positions": [2]}],
     {"over": 2, "runs": 13, "dismissed_positions": [2]}),
    # batting position outside 1..11
    ([{"over": 1, "runs": 8, "dismissed_positions": []}],
     {"over": 2, "runs": 13, "dismissed_positions": [12]}),
    # duplicate positions within one over
    ([{"over": 1, "runs": 8, "dismissed_positions": []}],
     {"over": 2, "runs": 13, "dismissed_positions": [3, 3]}),
    # cumulative ball count going backwards
    ([{"over": 1, "runs": 8, "dismissed_positions": []}],
     {"over": 2, "runs": 13, "dismissed_positions": [], "balls": 4}),
    # ball count beyond the innings
    ([{"over": 1, "runs": 8, "dismissed_positions": []}],
     {"over": 2, "runs": 13, "dismissed_positions": [], "balls": 126}),
    # appending after the target is reached
    ([{"over": 1, "runs": 154, "dismissed_positions": []}],
     {"over": 2, "runs": 156, "dismissed_positions": []}),
    # short final-over ball count reaching the target
    ([{"over": i, "runs": 9 * i, "dismissed_positions": []} for i in range(1, 17)],
     {"over": 17, "runs": 154, "dismissed_positions": [], "balls": 99}),
]


def record_validation(app_factory) -> dict:
    create = []
    for req in CREATE_CASES:
        client = TestClient(app_factory())
        resp = client.post("/sessions", json=req)
        create.append({"request": req, "status": resp.status_code,
                       "body": resp.json()})
    append = []
    session_req = {"target": 154, "total_balls": 120, "venue_class": "home"}
    for prior, probe in APPEND_CASES:
        client = TestClient(app_factory())
        sid = client.post("/sessions", json=session_req).json()["session_id"]
        for entry in prior:
            ok = client.post(f"/sessions/{sid}/overs", json=entry)
            assert ok.status_code == 200, (entry, ok.json())
        resp = client.post(f"/sessions/{sid}/overs", json=probe)
        append.append({"session": session_req, "prior": prior,
                       "request": probe, "status": resp.status_code,
                       "body": resp.json()})
    return {"create": create, "append": append}


def record_whatif(client: TestClient, replay: dict) -> dict:
    """Clone the replay session up to over 10, then try a hypothetical over."""
    base = replay["create"]["request"]
    sid = client.post("/sessions", json=base).json()["session_id"]
    for entry in [o["request"] for o in replay["overs"][:10]]:
        client.post(f"/sessions/{sid}/overs", json=entry)
    runs_so_far = replay["overs"][9]["request"]["runs"]
    hypothetical = {"over": 11, "runs": runs_so_far + 12,
                    "dismissed_positions": []}
    resp = client.post(f"/sessions/{sid}/overs", json=hypothetical)
    return {"base_overs": 10, "request": hypothetical,
            "status": resp.status_code, "body": resp.json()}


def main():
    bundle = build_bundle()
    client = TestClient(create_app(bundle))
    replay = record_replay(client)
    validation = record_validation(lambda: create_app(bundle))
    whatif = record_whatif(client, replay)
    OUT.mkdir(parents=True, exist_ok=True)
    for name, payload in [("session_replay.json", replay),
                          ("validation_cases.json", validation),
                          ("whatif.json", whatif)]:
        (OUT / name).write_text(json.dumps(payload, indent=2) + "\n")
        print(f"wrote {OUT / name}")


if __name__ == "__main__":
    main()
