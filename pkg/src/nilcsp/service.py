"""HTTP+JSON facade for stateful animation sessions.

A session holds a running process: its definitions, the current term, the
observable trace so far, and a liveness status.  The menu of events exposed
to clients contains observable events only; silent steps happen
automatically inside a step.  Sessions live in memory behind an LRU cap;
requests on the same session are serialized, distinct sessions proceed
independently.

    POST   /sessions            {source, process} -> 201 {id, status, trace, events}
    GET    /sessions/{id}       -> 200 {id, status, trace, events}
    POST   /sessions/{id}/step  {event} -> 200 view | 409 {error, offered}
    POST   /sessions/{id}/reset -> 200 view
    DELETE /sessions/{id}       -> 204
    GET    /health              -> 200 "ok"

``tick`` is the wire spelling of the termination event; ``status`` is one
of ``live``, ``quiescent``, ``terminating``.
"""

from __future__ import annotations

import itertools
import secrets
import threading
from collections import OrderedDict
from dataclasses import dataclass, field

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from pydantic import BaseModel

from .parser import ParseError, SemanticError, parse
from .semantics import Engine, SemanticsError
from .terms import ProcessTerm, TermError
from .traces import Trace, concat

__all__ = ["create_app", "app", "DEFAULT_SESSION_CAP"]

DEFAULT_SESSION_CAP = 256

_sequence = itertools.count(1)


@dataclass
class Session:
    """One animation in progress; mutated only under its lock."""

    id: str
    engine: Engine
    initial: ProcessTerm
    current: ProcessTerm
    trace: Trace
    created_at: int
    lock: threading.Lock = field(default_factory=threading.Lock)

    def view(self) -> dict:
        offered = sorted({t.label.label for t in self.engine.observable_step(self.current)})
        return {
            "id": self.id,
            "status": self.engine.classify(self.current).value,
            "trace": list(self.trace.labels()),
            "events": offered,
        }


class SessionStore:
    """In-memory session table with least-recently-used eviction."""

    def __init__(self, cap: int = DEFAULT_SESSION_CAP):
        self._cap = cap
        self._sessions: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.id] = session
            while len(self._sessions) > self._cap:
                self._sessions.popitem(last=False)

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is not None:
                self._sessions.move_to_end(session_id)
            return session

    def remove(self, session_id: str) -> bool:
        with self._lock:
            return self._sessions.pop(session_id, None) is not None

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)


class CreateSession(BaseModel):
    source: str
    process: str


class StepRequest(BaseModel):
    event: str


def create_app(session_cap: int = DEFAULT_SESSION_CAP) -> FastAPI:
    app = FastAPI(title="nilcsp session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(session_cap)

    def not_found(what: str) -> JSONResponse:
        return JSONResponse(status_code=404, content={"error": what})

    @app.get("/health")
    def health() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.post("/sessions", status_code=201)
    def create_session(request: CreateSession):
        try:
            source_file = parse(request.source)
        except ParseError as exc:
            return JSONResponse(
                status_code=400,
                content={
                    "error": exc.message,
                    "line": exc.line,
                    "column": exc.column,
                    "expected": list(exc.expected),
                },
            )
        except (SemanticError, TermError) as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})
        defs = source_file.definitions
        if request.process not in defs:
            return not_found(f"unknown process {request.process!r}")
        desugared = defs.desugared()
        term = desugared.body_of(request.process)
        session = Session(
            id=secrets.token_urlsafe(16),
            engine=Engine(desugared),
            initial=term,
            current=term,
            trace=Trace(),
            created_at=next(_sequence),
        )
        try:
            view = session.view()
        except SemanticsError as exc:
            return JSONResponse(status_code=422, content={"error": str(exc)})
        store.add(session)
        return view

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = store.get(session_id)
        if session is None:
            return not_found("unknown session")
        with session.lock:
            return session.view()

    @app.post("/sessions/{session_id}/step")
    def step_session(session_id: str, request: StepRequest):
        session = store.get(session_id)
        if session is None:
            return not_found("unknown session")
        with session.lock:
            try:
                offered = sorted(
                    session.engine.observable_step(session.current),
                    key=lambda t: t.label.label,
                )
                match = [t for t in offered if t.label.label == request.event]
                if not match:
                    return JSONResponse(
                        status_code=409,
                        content={
                            "error": f"event {request.event!r} is not offered",
                            "offered": sorted({t.label.label for t in offered}),
                        },
                    )
                chosen = match[0]
                session.current = chosen.successor
                session.trace = concat(session.trace, Trace.of(chosen.label))
                return session.view()
            except SemanticsError as exc:
                return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.post("/sessions/{session_id}/reset")
    def reset_session(session_id: str):
        session = store.get(session_id)
        if session is None:
            return not_found("unknown session")
        with session.lock:
            session.current = session.initial
            session.trace = Trace()
            return session.view()

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        if not store.remove(session_id):
            return not_found("unknown session")
        return Response(status_code=204)

    return app


app = create_app()
