"""HTTP service for live over-by-over pressure tracking.

Sessions are held in memory; each session serializes its own appends under
a lock while the loaded models stay immutable and shared. Append responses
carry no timestamps, so replaying the same over entries against the same
models produces byte-identical payloads.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .markov import Prediction, TransitionModel
from .phases import DEFAULT_PHASES
from .pressure import ChaseContext, InningsState, compute_pi
from .strategy import Recommendation, ZoneTable, default_zone_table, recommend

ERROR_STATUS = {
    "BadRequest": 400,
    "NotFound": 404,
    "Conflict": 409,
    "ModelMissing": 503,
    "Internal": 500,
}


class ApiError(Exception):
    def __init__(self, code: str, message: str, detail: str | None = None):
        if code not in ERROR_STATUS:
            raise ValueError(f"unknown error code {code!r}")
        super().__init__(message)
        self.code = code
        self.message = message
        self.detail = detail


@dataclass
class ModelBundle:
    """Immutable model set served to all sessions."""

    models: dict[str, TransitionModel]
    fits: dict[str, object]  # phase label -> gamma fallback (shape, rate)
    zone_table: ZoneTable = field(default_factory=default_zone_table)
    phases: tuple = DEFAULT_PHASES


@dataclass
class LiveSession:
    session_id: str
    ctx: ChaseContext
    venue_class: str
    created_at: float
    states: list[InningsState] = field(default_factory=list)
    pi_values: list[float] = field(default_factory=list)
    wicket_overs: list[int] = field(default_factory=list)
    history: list[dict] = field(default_factory=list)  # append responses
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def terminal(self) -> bool:
        if self.pi_values and self.pi_values[-1] == 0.0:
            return True
        return bool(self.states) and self.states[-1].balls_faced >= self.ctx.total_balls

    @property
    def won(self) -> bool:
        return bool(self.pi_values) and self.pi_values[-1] == 0.0


class CreateSessionRequest(BaseModel):
    target: int
    total_balls: int = 120
    venue_class: str = "neutral"


class AppendOverRequest(BaseModel):
    over: int
    runs: int = Field(description="cumulative runs at the end of the over")
    dismissed_positions: list[int] = Field(
        default_factory=list,
        description="batting positions dismissed during this over")
    balls: int | None = Field(
        default=None,
        description="cumulative legal balls; defaults to over*6, capped")


def _prediction_payload(p: Prediction | None) -> dict | None:
    if p is None:
        return None
    return {
        "expected_pi": p.expected_pi,
        "interval": [p.interval[0], p.interval[1]],
        "source": p.source.value,
        "n_observations": p.n_observations,
    }


def _recommendation_payload(r: Recommendation) -> dict:
    return {
        "zone": r.zone.value,
        "message": r.message,
        "target_band": [r.target_band[0], r.target_band[1]],
        "required_run_rate_hint": r.required_run_rate_hint,
        "basis": r.basis,
    }


def create_app(bundle: ModelBundle | None = None) -> FastAPI:
    app = FastAPI(title="chasepressure", docs_url=None, redoc_url=None)
    sessions: dict[str, LiveSession] = {}
    store_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        body = {"error": {"code": exc.code, "message": exc.message}}
        if exc.detail:
            body["error"]["detail"] = exc.detail
        return JSONResponse(status_code=ERROR_STATUS[exc.code], content=body)

    def _get(session_id: str) -> LiveSession:
        s = sessions.get(session_id)
        if s is None:
            raise ApiError("NotFound", f"no session {session_id}")
        return s

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "sessions": len(sessions)}

    @app.get("/models")
    def models():
        if bundle is None:
            raise ApiError("ModelMissing", "no models configured")
        return {
            "phases": {
                label: {
                    "order": m.order,
                    "precision": m.precision,
                    "n_transitions": m.n_transitions,
                    "n_states": m.n_states,
                }
                for label, m in bundle.models.items()
            },
            "fits": {
                label: {"shape": f[0], "rate": f[1]}
                if isinstance(f, tuple)
                else {"shape": f.shape, "rate": f.rate}
                for label, f in bundle.fits.items()
            },
        }

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        if bundle is None:
            raise ApiError("ModelMissing", "no models configured")
        if req.venue_class not in ("home", "away", "neutral"):
            raise ApiError("BadRequest", f"bad venue_class {req.venue_class!r}")
        try:
            ctx = ChaseContext(req.target, req.total_balls)
        except ValueError as exc:
            raise ApiError("BadRequest", str(exc)) from exc
        session_id = uuid.uuid4().hex
        with store_lock:
            sessions[session_id] = LiveSession(
                session_id, ctx, req.venue_class, created_at=time.time())
        return {"session_id": session_id, "current_pi": 1.0}

    @app.post("/sessions/{session_id}/overs")
    def append_over(session_id: str, req: AppendOverRequest):
        s = _get(session_id)
        with s.lock:
            if s.terminal:
                raise ApiError("Conflict", "session is terminal; no further overs")
            expected = len(s.pi_values) + 1
            if req.over != expected:
                raise ApiError("Conflict",
                               f"expected over {expected}, got {req.over}")
            prev = s.states[-1] if s.states else InningsState(0, 0)
            if req.runs < prev.runs_scored:
                raise ApiError("BadRequest", "cumulative runs cannot decrease")
            balls = req.balls if req.balls is not None else min(
                req.over * 6, s.ctx.total_balls)
            if balls < prev.balls_faced or balls > s.ctx.total_balls:
                raise ApiError("BadRequest", "bad cumulative ball count")
            positions = prev.dismissed_positions + tuple(req.dismissed_positions)
            try:
                state = InningsState(req.runs, balls, positions)
                pi = compute_pi(s.ctx, state)
            except ValueError as exc:
                raise ApiError("BadRequest", str(exc)) from exc
            except Exception as exc:
                raise ApiError("Internal", str(exc)) from exc

            s.states.append(state)
            s.pi_values.append(pi)
            if req.dismissed_positions:
                s.wicket_overs.append(req.over)

            rec = None
            if bundle is not None:
                rec = recommend(
                    over=req.over,
                    pi_history=s.pi_values,
                    venue_class=s.venue_class,
                    models=bundle.models,
                    fits=bundle.fits,
                    ctx=s.ctx,
                    state=state,
                    table=bundle.zone_table,
                    phases=bundle.phases,
                )
            payload = {
                "over": req.over,
                "current_pi": pi,
                "prediction": _prediction_payload(rec.predicted if rec else None),
                "recommendation": _recommendation_payload(rec) if rec else None,
                "terminal": s.terminal,
            }
            s.history.append(payload)
            return payload

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        s = _get(session_id)
        with s.lock:
            return {
                "session_id": s.session_id,
                "target": s.ctx.target,
                "total_balls": s.ctx.total_balls,
                "venue_class": s.venue_class,
                "trajectory": [
                    {"over": i + 1, "pi": v, "wicket": (i + 1) in s.wicket_overs}
                    for i, v in enumerate(s.pi_values)
                ],
                "wicket_overs": list(s.wicket_overs),
                "entries": list(s.history),
                "terminal": s.terminal,
                "won": s.won,
            }

    return app
