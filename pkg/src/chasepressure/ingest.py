"""Parse ball-by-ball match files, filter the corpus, and build PI sequences.

Two input formats are supported:

* JSON, one match per file, mirroring public ball-by-ball archives::

    {
      "schema_version": 1,
      "match_id": "...", "competition": "...", "date": "YYYY-MM-DD",
      "venue": "...", "home_side": "Pakistan" | null,
      "teams": ["West Indies", "Pakistan"],
      "target": 154, "total_balls": 120,
      "outcome": {"type": "chased" | "lost" | "tie" | "no_result", "margin": 7},
      "innings2": {"team": "Pakistan", "overs": [
          {"over": 1, "deliveries": [
              {"batter": "name", "runs_batter": 4,
               "extras": {"wides": 1},            # optional
               "wicket": {"player_out": "name"}}  # optional
          ]}]}
    }

  Batting positions are inferred from order of first appearance; wides and
  no-balls score runs without consuming a legal ball.

* CSV, one match per file: ``# key=value`` metadata lines followed by rows
  ``over,runs,extra_type,wicket_position`` where extra_type is one of
  ``"", wide, noball, bye, legbye`` and wicket_position is the dismissed
  batting position (blank for no wicket).
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .errors import IllegalInnings, ParseError, SchemaError
from .pressure import (
    ChaseContext,
    InningsState,
    PiSequence,
    ResourceTable,
    WicketWeights,
    pi_sequence,
)

log = logging.getLogger(__name__)

CORPUS_SCHEMA_VERSION = 1

OUTCOME_CHASED = "chased"
OUTCOME_LOST = "lost"
OUTCOME_TIE = "tie"
OUTCOME_NO_RESULT = "no_result"
_OUTCOMES = {OUTCOME_CHASED, OUTCOME_LOST, OUTCOME_TIE, OUTCOME_NO_RESULT}

_EXTRA_TYPES = {"", "wide", "noball", "bye", "legbye"}
_ILLEGAL_BALL_EXTRAS = {"wide", "noball"}


@dataclass(frozen=True)
class Delivery:
    """One normalized delivery of the second innings."""

    over: int  # 1-based over number
    runs: int  # total runs off the delivery
    extra_type: str = ""  # "", wide, noball, bye, legbye
    wicket_position: int | None = None  # batting position of dismissed batter

    @property
    def is_legal(self) -> bool:
        return self.extra_type not in _ILLEGAL_BALL_EXTRAS


@dataclass
class MatchRecord:
    """A validated second-innings scorecard with metadata."""

    match_id: str
    competition: str
    date: str
    venue: str
    home_side: str | None
    teams: tuple[str, str]
    chasing_team: str
    target: int
    total_balls: int
    outcome_type: str
    outcome_margin: int | None
    deliveries: list[Delivery]

    @property
    def won(self) -> bool:
        return self.outcome_type == OUTCOME_CHASED

    @property
    def legal_balls(self) -> int:
        return sum(1 for d in self.deliveries if d.is_legal)

    def over_end_states(self) -> list[InningsState]:
        """Cumulative innings states at each over boundary.

        The final entry covers the last (possibly partial) over played.
        """
        states: list[InningsState] = []
        runs = 0
        balls = 0
        positions: list[int] = []
        current_over = None
        for d in self.deliveries:
            if current_over is not None and d.over != current_over:
                states.append(InningsState(runs, balls, tuple(positions)))
            current_over = d.over
            runs += d.runs
            if d.is_legal:
                balls += 1
            if d.wicket_position is not None:
                positions.append(d.wicket_position)
        if current_over is not None:
            states.append(InningsState(runs, balls, tuple(positions)))
        return states

    @property
    def home_away(self) -> str:
        """Venue class of the chasing team: home, away, or neutral."""
        if self.home_side is None:
            return "neutral"
        return "home" if self.home_side == self.chasing_team else "away"


@dataclass(frozen=True)
class CorpusFilter:
    """Retention rule for training matches."""

    min_overs_batted_if_won: int = 18  # strict: more than this many overs
    max_loss_margin: int = 10

    def __post_init__(self):
        if self.min_overs_batted_if_won < 0 or self.max_loss_margin < 0:
            raise ValueError("filter thresholds must be non-negative")


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise SchemaError(f"missing required field {key!r} in {context}")
    return mapping[key]


def _parse_json_match(payload: dict) -> MatchRecord:
    teams = _require(payload, "teams", "match")
    if not isinstance(teams, (list, tuple)) or len(teams) != 2:
        raise SchemaError("teams must be a pair")
    outcome = _require(payload, "outcome", "match")
    otype = _require(outcome, "type", "outcome")
    if otype not in _OUTCOMES:
        raise SchemaError(f"unknown outcome type {otype!r}")
    margin = outcome.get("margin")
    if otype == OUTCOME_LOST and margin is None:
        raise SchemaError("lost outcome requires a margin")
    innings = _require(payload, "innings2", "match")
    chasing_team = _require(innings, "team", "innings2")

    positions: dict[str, int] = {}

    def position_of(name: str) -> int:
        if name not in positions:
            positions[name] = len(positions) + 1
        return positions[name]

    deliveries: list[Delivery] = []
    last_over = 0
    for over in _require(innings, "overs", "innings2"):
        over_no = int(_require(over, "over", "over"))
        if over_no < last_over:
            raise SchemaError(f"over numbers must be non-decreasing, got {over_no}")
        last_over = over_no
        for dl in _require(over, "deliveries", f"over {over_no}"):
            batter = _require(dl, "batter", f"over {over_no}")
            position_of(batter)
            extras = dl.get("extras", {})
            extra_type = ""
            extra_runs = 0
            for kind, runs in extras.items():
                key = {"wides": "wide", "noballs": "noball",
                       "byes": "bye", "legbyes": "legbye"}.get(kind)
                if key is None:
                    raise SchemaError(f"unknown extras kind {kind!r}")
                extra_type = key
                extra_runs += int(runs)
            runs = int(dl.get("runs_batter", 0)) + extra_runs
            if runs < 0:
                raise IllegalInnings(f"negative runs in over {over_no}")
            wicket_position = None
            if "wicket" in dl:
                out_name = _require(dl["wicket"], "player_out", "wicket")
                wicket_position = position_of(out_name)
            deliveries.append(Delivery(over_no, runs, extra_type, wicket_position))
    return _finish_record(payload, tuple(teams), chasing_team, otype, margin, deliveries)


def _parse_csv_match(text: str) -> MatchRecord:
    meta: dict[str, str] = {}
    rows: list[str] = []
    for line in text.splitlines():
        if line.startswith("#"):
            if "=" not in line:
                raise ParseError(f"bad metadata line: {line!r}")
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = value.strip()
        elif line.strip():
            rows.append(line)
    if not rows:
        raise ParseError("no delivery rows in CSV input")
    reader = csv.DictReader(io.StringIO("\n".join(rows)))
    deliveries: list[Delivery] = []
    last_over = 0
    for row in reader:
        if row.get("over") is None or row.get("runs") is None:
            raise SchemaError("CSV rows need over and runs columns")
        over_no = int(row["over"])
        if over_no < last_over:
            raise SchemaError(f"over numbers must be non-decreasing, got {over_no}")
        last_over = over_no
        extra = (row.get("extra_type") or "").strip()
        if extra not in _EXTRA_TYPES:
            raise SchemaError(f"unknown extra_type {extra!r}")
        runs = int(row["runs"])
        if runs < 0:
            raise IllegalInnings(f"negative runs in over {over_no}")
        wk = (row.get("wicket_position") or "").strip()
        deliveries.append(Delivery(over_no, runs, extra, int(wk) if wk else None))
    payload = {
        "match_id": meta.get("match_id", ""),
        "competition": meta.get("competition", ""),
        "date": meta.get("date", ""),
        "venue": meta.get("venue", ""),
        "home_side": meta.get("home_side") or None,
        "target": meta.get("target"),
        "total_balls": meta.get("total_balls", 120),
    }
    teams = (meta.get("team1", ""), meta.get("team2", ""))
    otype = meta.get("outcome", "")
    if otype not in _OUTCOMES:
        raise SchemaError(f"unknown or missing outcome {otype!r}")
    margin = int(meta["margin"]) if meta.get("margin") else None
    if otype == OUTCOME_LOST and margin is None:
        raise SchemaError("lost outcome requires a margin")
    return _finish_record(payload, teams, meta.get("chasing_team", teams[1]),
                          otype, margin, deliveries)


def _finish_record(payload, teams, chasing_team, otype, margin, deliveries) -> MatchRecord:
    target = _require(payload, "target", "match")
    record = MatchRecord(
        match_id=str(_require(payload, "match_id", "match")),
        competition=str(payload.get("competition", "")),
        date=str(payload.get("date", "")),
        venue=str(payload.get("venue", "")),
        home_side=payload.get("home_side"),
        teams=teams,
        chasing_team=chasing_team,
        target=int(target),
        total_balls=int(payload.get("total_balls", 120)),
        outcome_type=otype,
        outcome_margin=int(margin) if margin is not None else None,
        deliveries=deliveries,
    )
    if record.target < 1:
        raise SchemaError("target must be >= 1")
    wickets = sum(1 for d in deliveries if d.wicket_position is not None)
    if wickets > 10:
        raise IllegalInnings(f"{wickets} dismissals in one innings")
    if record.legal_balls > record.total_balls:
        raise IllegalInnings("more legal balls than the innings allows")
    return record


def parse_match(data: bytes | str, format: str = "json") -> MatchRecord:
    """Parse one match file into a validated MatchRecord."""
    text = data.decode() if isinstance(data, bytes) else data
    if format == "json":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise ParseError("top-level JSON value must be an object")
        return _parse_json_match(payload)
    if format == "csv":
        return _parse_csv_match(text)
    raise ValueError(f"unknown format {format!r}")


def serialize_match(record: MatchRecord) -> str:
    """Normalized JSON for a MatchRecord; parse(serialize(r)) round-trips."""
    overs: dict[int, list[dict]] = {}
    pos_names = {}
    for d in record.deliveries:
        entry = {"batter": f"batter_{_batter_for(d, record, pos_names)}"}
        if d.extra_type:
            kind = {"wide": "wides", "noball": "noballs",
                    "bye": "byes", "legbye": "legbyes"}[d.extra_type]
            entry["extras"] = {kind: d.runs}
            entry["runs_batter"] = 0
        else:
            entry["runs_batter"] = d.runs
        if d.wicket_position is not None:
            entry["wicket"] = {"player_out": f"batter_{d.wicket_position}"}
        overs.setdefault(d.over, []).append(entry)
    outcome: dict = {"type": record.outcome_type}
    if record.outcome_margin is not None:
        outcome["margin"] = record.outcome_margin
    payload = {
        "schema_version": 1,
        "match_id": record.match_id,
        "competition": record.competition,
        "date": record.date,
        "venue": record.venue,
        "home_side": record.home_side,
        "teams": list(record.teams),
        "target": record.target,
        "total_balls": record.total_balls,
        "outcome": outcome,
        "innings2": {
            "team": record.chasing_team,
            "overs": [{"over": o, "deliveries": ds} for o, ds in sorted(overs.items())],
        },
    }
    return json.dumps(payload, indent=2)


def _batter_for(d: Delivery, record: MatchRecord, pos_names: dict) -> int:
    # Reconstruct a facing order consistent with the inferred positions:
    # the striker is the latest not-yet-dismissed position, openers first.
    dismissed = pos_names.setdefault("_dismissed", set())
    highest = pos_names.setdefault("_highest", [2])
    for p in range(1, highest[0] + 1):
        if p not in dismissed:
            break
    else:  # pragma: no cover - guarded by <=10 wickets
        p = highest[0]
    if d.wicket_position is not None:
        dismissed.add(d.wicket_position)
        highest[0] = min(11, max(highest[0] + 1, d.wicket_position + 1))
    return p


def filter_corpus(matches: list[MatchRecord], f: CorpusFilter | None = None) -> list[MatchRecord]:
    """Retain close finishes: long winning chases and narrow losses."""
    f = f or CorpusFilter()
    kept, _, _ = partition_corpus(matches, f)
    return kept


def partition_corpus(
    matches: list[MatchRecord], f: CorpusFilter | None = None
) -> tuple[list[MatchRecord], list[MatchRecord], list[MatchRecord]]:
    """Split input into (retained, excluded-by-rule, no-result)."""
    f = f or CorpusFilter()
    kept: list[MatchRecord] = []
    excluded: list[MatchRecord] = []
    no_result: list[MatchRecord] = []
    for m in matches:
        if m.outcome_type == OUTCOME_NO_RESULT:
            no_result.append(m)
        elif m.outcome_type == OUTCOME_CHASED:
            (kept if m.legal_balls > f.min_overs_batted_if_won * 6 else excluded).append(m)
        elif m.outcome_type == OUTCOME_LOST:
            (kept if m.outcome_margin <= f.max_loss_margin else excluded).append(m)
        else:  # ties retained
            kept.append(m)
    return kept, excluded, no_result


def build_sequences(
    matches: list[MatchRecord],
    weights: WicketWeights | None = None,
    table: ResourceTable | None = None,
) -> list[PiSequence]:
    """Over-boundary PI sequences with metadata for each match.

    A match whose innings data cannot be evaluated is skipped and logged.
    """
    out: list[PiSequence] = []
    for m in matches:
        try:
            ctx = ChaseContext(target=m.target, total_balls=m.total_balls)
            seq = pi_sequence(ctx, m.over_end_states(), weights, table)
        except Exception as exc:
            log.warning("skipping match %s: %s", m.match_id, exc)
            continue
        seq.match_id = m.match_id
        seq.competition = m.competition
        seq.home_away = m.home_away
        seq.won = m.won
        seq.truncated = m.outcome_type == OUTCOME_NO_RESULT
        out.append(seq)
    return out


def save_corpus(seqs: list[PiSequence], path: str | Path) -> None:
    """Persist sequences as newline-delimited JSON with a schema header."""
    with open(path, "w") as fh:
        fh.write(json.dumps({"schema_version": CORPUS_SCHEMA_VERSION,
                             "kind": "chasepressure-corpus",
                             "n_sequences": len(seqs)}) + "\n")
        for s in seqs:
            fh.write(json.dumps(asdict(s)) + "\n")


def load_corpus(path: str | Path) -> list[PiSequence]:
    with open(path) as fh:
        header = json.loads(fh.readline())
        if header.get("kind") != "chasepressure-corpus":
            raise ParseError(f"{path} is not a corpus file")
        if header.get("schema_version") != CORPUS_SCHEMA_VERSION:
            raise ParseError(f"unsupported corpus schema {header.get('schema_version')}")
        return [PiSequence(**json.loads(line)) for line in fh if line.strip()]
