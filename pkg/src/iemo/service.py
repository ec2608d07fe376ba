"""HTTP service exposing live interactive runs to a human decision maker.

Each session owns one optimizer worker thread.  The worker blocks inside
the DM callback whenever a consultation pair is awaiting its judgment, so
the optimizer can never advance past an unanswered query.  Every judgment
is appended to a per-session JSON-lines event log before it is
acknowledged; recovery after a restart replays that log through the
deterministic run contract, which reproduces the same queries and state.
"""

from __future__ import annotations

import json
import secrets
import threading
from collections import deque
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict, Field

from .algorithms import ALGORITHMS, RunConfig, default_population_size, run
from .dm import DMUnavailable, Judgment
from .evo import sort_objective_rows
from .problems import FAMILIES, make_problem

OUTCOMES = ("better", "worse", "indifferent")
_OUTCOME_C = {"better": 1, "worse": -1, "indifferent": 0}


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str,
                 field: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.field = field


class ProblemRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    family: str
    m: int = Field(ge=2)
    n: int | None = Field(default=None, ge=2)


class SessionRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    algorithm: str
    problem: ProblemRequest
    N: int | None = Field(default=None, ge=2)
    max_fe: int | None = Field(default=None, ge=2)
    tau: int = Field(default=10, ge=2)
    warmup_gens: int | None = Field(default=None, ge=1)
    mu: int = Field(default=10, ge=2)
    eta_step: float = Field(default=0.2, ge=0.0)
    hidden_dim: int = Field(default=10, ge=0)
    sigma: float = Field(default=1.0, gt=0.0)
    neighborhood_size: int = Field(default=20, ge=2)
    delta_nb: float = Field(default=0.9, ge=0.0, le=1.0)
    nr: int = Field(default=2, ge=1)
    seed: int | None = None


class JudgmentRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    pair_index: int = Field(ge=0)
    outcome: str


class _Aborting(Exception):
    """Raised out of the observer to cut a run short between consultations."""


class _ChannelDM:
    """DecisionMaker that forwards each query to the session and blocks
    until the judgment arrives (or replays a logged one during recovery)."""

    def __init__(self, session):
        self.session = session

    def begin_consultation(self, gen, n_pairs: int) -> None:
        s = self.session
        with s.cond:
            s.consultation_no += 1
            s.consultation_total = n_pairs
            s.consultation_answered = 0

    def answer(self, fi: np.ndarray, fj: np.ndarray) -> Judgment:
        s = self.session
        with s.cond:
            if s.abort_requested:
                raise DMUnavailable("session aborted")
            if s.replay:
                outcome = s.replay.popleft()
                s.consultation_answered += 1
                return Judgment(_OUTCOME_C[outcome])
            index = len(s.judgment_log)
            s.current_query = {
                "pair_index": index,
                "pair_in_consultation": s.consultation_answered,
                "total_pairs": s.consultation_total,
                "consultation": s.consultation_no,
                "a": {"f": [float(v) for v in fi]},
                "b": {"f": [float(v) for v in fj]},
            }
            s.phase = "awaiting_judgment"
            s.cond.notify_all()
            while s.pending_outcome is None and not s.abort_requested:
                s.cond.wait()
            if s.abort_requested:
                raise DMUnavailable("session aborted")
            outcome = s.pending_outcome
            s.pending_outcome = None
            s.current_query = None
            s.phase = "running"
            s.consultation_answered += 1
            s.cond.notify_all()
            return Judgment(_OUTCOME_C[outcome])


class Session:
    def __init__(self, session_id: str, request_config: dict,
                 state_dir: Path):
        self.id = session_id
        self.request_config = request_config
        self.cond = threading.Condition()
        self.phase = "running"
        self.generation = 0
        self.fe_used = 0
        self.population = []
        self.judgment_log: list[dict] = []
        self.consultation_no = 0
        self.consultation_total = 0
        self.consultation_answered = 0
        self.current_query = None
        self.pending_outcome = None
        self.abort_requested = False
        self.replay: deque[str] = deque()
        self.result = None
        self.error = None
        self.log_path = state_dir / f"session-{session_id}.jsonl"
        self.result_path = state_dir / f"session-{session_id}.result.json"
        self.worker = None

    # -- config plumbing

    def build_run_config(self) -> RunConfig:
        raw = dict(self.request_config)
        prob = raw.pop("problem")
        spec = make_problem(prob["family"], m=prob["m"], n=prob.get("n"))
        N = raw.pop("N", None) or default_population_size(spec.m)
        return RunConfig(algorithm=raw.pop("algorithm"), problem=spec, N=N,
                         interactive=True, **raw)

    # -- event log

    def append_event(self, event: dict) -> None:
        with open(self.log_path, "a") as fh:
            fh.write(json.dumps(event) + "\n")
            fh.flush()

    # -- worker lifecycle

    def start(self) -> None:
        self.worker = threading.Thread(target=self._run_worker, daemon=True,
                                       name=f"session-{self.id}")
        self.worker.start()

    def _observer(self, gen: int, pop, consulted: bool) -> None:
        cfg_n = len(pop)
        with self.cond:
            if self.abort_requested:
                raise _Aborting()
            self.generation = gen
            self.fe_used = cfg_n * (gen + 1)  # every generation costs N
            self.population = _population_snapshot(pop)

    def _run_worker(self) -> None:
        try:
            cfg = self.build_run_config()
            result = run(cfg, _ChannelDM(self), observer=self._observer)
        except _Aborting:
            self._finalize("aborted")
            return
        except Exception as exc:  # defensive: surface, do not hang clients
            with self.cond:
                self.error = repr(exc)
            self._finalize("aborted")
            return
        if result.aborted:
            self._finalize("aborted", result)
        else:
            self._finalize("finished", result)

    def _finalize(self, phase: str, result=None) -> None:
        with self.cond:
            self.phase = phase
            self.current_query = None
            if result is not None:
                self.fe_used = result.fe_used
                self.population = _population_snapshot(
                    result.final_population, result.model)
                self.result = _result_document(self, result)
            else:
                self.result = _result_document(self, None)
            doc = self.result
            self.cond.notify_all()
        tmp = self.result_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(doc) + "\n")
        tmp.replace(self.result_path)
        self.append_event({"type": phase})

    # -- views (callers hold no lock; each method takes it)

    def state_view(self) -> dict:
        with self.cond:
            return {
                "session_id": self.id,
                "phase": self.phase,
                "algorithm": self.request_config["algorithm"],
                "problem": self.request_config["problem"],
                "generation": self.generation,
                "fe_used": self.fe_used,
                "consultations": self.consultation_no,
                "answered_pairs": len(self.judgment_log),
                "current_consultation": {
                    "total_pairs": self.consultation_total,
                    "answered": self.consultation_answered,
                } if self.consultation_no else None,
                "error": self.error,
            }

    def query_view(self) -> dict:
        with self.cond:
            query = (dict(self.current_query)
                     if self.current_query is not None else None)
            return {"phase": self.phase, "query": query}

    def population_view(self) -> dict:
        with self.cond:
            return {
                "phase": self.phase,
                "generation": self.generation,
                "fe_used": self.fe_used,
                "population": [dict(p) for p in self.population],
            }

    def submit(self, pair_index: int, outcome: str) -> dict:
        with self.cond:
            if self.phase in ("finished", "aborted"):
                raise ServiceError(409, "session_closed",
                                   f"session is {self.phase}")
            if self.current_query is None:
                raise ServiceError(409, "not_awaiting",
                                   "no pending query to judge")
            current = self.current_query["pair_index"]
            if pair_index < current:
                raise ServiceError(409, "conflict",
                                   f"pair {pair_index} already answered",
                                   field="pair_index")
            if pair_index > current:
                raise ServiceError(422, "out_of_order",
                                   f"pair {pair_index} is not the pending "
                                   f"pair (expected {current})",
                                   field="pair_index")
            # the log write must land before the optimizer may proceed
            record = {"type": "judgment", "pair_index": pair_index,
                      "outcome": outcome}
            self.append_event(record)
            self.judgment_log.append(record)
            self.pending_outcome = outcome
            self.cond.notify_all()
            return {"accepted": True, "pair_index": pair_index,
                    "answered_pairs": len(self.judgment_log)}

    def abort(self) -> dict:
        with self.cond:
            if self.phase in ("finished", "aborted"):
                raise ServiceError(409, "session_closed",
                                   f"session is already {self.phase}")
            self.abort_requested = True
            self.cond.notify_all()
        return {"aborting": True}


def _population_snapshot(pop, model=None) -> list[dict]:
    F = pop.objectives()
    ranks = np.empty(len(F), dtype=int)
    for depth, front in enumerate(sort_objective_rows(F)):
        ranks[front] = depth
    utilities = None
    if model is not None:
        utilities = model.score_batch(F)
    out = []
    for i, member in enumerate(pop):
        u = member.utility
        if utilities is not None:
            u = float(utilities[i])
        out.append({"f": [float(v) for v in member.f],
                    "rank": int(ranks[i]),
                    "utility": None if u is None else float(u)})
    return out


def _result_document(session: Session, result) -> dict:
    doc = {
        "session_id": session.id,
        "phase": session.phase,
        "generation": session.generation,
        "fe_used": session.fe_used,
        "answered_pairs": len(session.judgment_log),
        "population": [dict(p) for p in session.population],
    }
    if result is not None:
        doc["consultation_log"] = [
            {"generation": gen,
             "records": [{"fi": [float(v) for v in r.fi],
                          "fj": [float(v) for v in r.fj],
                          "c": r.c} for r in records]}
            for gen, records in result.consultation_log]
    return doc


class SessionManager:
    def __init__(self, state_dir):
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()
        self._recover()

    def _recover(self) -> None:
        for log_path in sorted(self.state_dir.glob("session-*.jsonl")):
            session_id = log_path.stem.removeprefix("session-")
            events = []
            with open(log_path) as fh:
                for line in fh:
                    if line.strip():
                        events.append(json.loads(line))
            if not events or events[0].get("type") != "created":
                continue
            session = Session(session_id, events[0]["config"], self.state_dir)
            judged = [e for e in events if e["type"] == "judgment"]
            session.judgment_log = judged
            closed = {e["type"] for e in events} & {"finished", "aborted"}
            if closed:
                session.phase = closed.pop()
                if session.result_path.exists():
                    doc = json.loads(session.result_path.read_text())
                    session.result = doc
                    session.generation = doc["generation"]
                    session.fe_used = doc["fe_used"]
                    session.population = doc["population"]
            else:
                session.replay = deque(e["outcome"] for e in judged)
                session.start()
            self.sessions[session_id] = session

    def create(self, request: SessionRequest) -> Session:
        config = request.model_dump(exclude_none=True)
        if config["algorithm"] not in ALGORITHMS:
            raise ServiceError(422, "invalid_config",
                               f"unknown algorithm "
                               f"{config['algorithm']!r}",
                               field="algorithm")
        if config["problem"]["family"] not in FAMILIES:
            raise ServiceError(422, "invalid_config",
                               f"unknown problem family "
                               f"{config['problem']['family']!r}",
                               field="problem.family")
        if "seed" not in config:
            config["seed"] = secrets.randbits(31)
        session_id = secrets.token_hex(6)
        session = Session(session_id, config, self.state_dir)
        try:
            session.build_run_config()
        except ValueError as exc:
            # point the client at the offending field when the message names it
            word = str(exc).split()[0] if str(exc) else ""
            raise ServiceError(422, "invalid_config", str(exc),
                               field=word if word in config else None) from exc
        with self.lock:
            self.sessions[session_id] = session
        session.append_event({"type": "created", "session_id": session_id,
                              "config": config})
        session.start()
        return session

    def get(self, session_id: str) -> Session:
        with self.lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise ServiceError(404, "not_found",
                               f"no session {session_id!r}")
        return session

    def list_view(self) -> list[dict]:
        with self.lock:
            sessions = list(self.sessions.values())
        return [s.state_view() for s in sessions]


def create_app(state_dir="sessions", static_dir=None) -> FastAPI:
    app = FastAPI(title="iemo session service")
    manager = SessionManager(state_dir)
    app.state.manager = manager

    @app.exception_handler(ServiceError)
    async def _service_error(request: Request, exc: ServiceError):
        body = {"code": exc.code, "message": exc.message}
        if exc.field:
            body["field"] = exc.field
        return JSONResponse(status_code=exc.status, content=body)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request,
                                exc: RequestValidationError):
        first = exc.errors()[0]
        loc = [str(part) for part in first.get("loc", [])
               if part not in ("body",)]
        return JSONResponse(status_code=422, content={
            "code": "invalid_config",
            "message": first.get("msg", "invalid request"),
            "field": ".".join(loc) or None,
        })

    @app.post("/v1/sessions", status_code=201)
    def create_session(request: SessionRequest):
        session = manager.create(request)
        return {"session_id": session.id}

    @app.get("/v1/sessions")
    def list_sessions():
        return {"sessions": manager.list_view()}

    @app.get("/v1/sessions/{session_id}")
    def session_state(session_id: str):
        return manager.get(session_id).state_view()

    @app.get("/v1/sessions/{session_id}/query")
    def session_query(session_id: str):
        return manager.get(session_id).query_view()

    @app.post("/v1/sessions/{session_id}/judgment")
    def submit_judgment(session_id: str, body: JudgmentRequest):
        if body.outcome not in OUTCOMES:
            raise ServiceError(422, "invalid_outcome",
                               f"outcome must be one of {OUTCOMES}",
                               field="outcome")
        return manager.get(session_id).submit(body.pair_index, body.outcome)

    @app.get("/v1/sessions/{session_id}/population")
    def session_population(session_id: str):
        return manager.get(session_id).population_view()

    @app.delete("/v1/sessions/{session_id}")
    def abort_session(session_id: str):
        return manager.get(session_id).abort()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="ui")
    return app
