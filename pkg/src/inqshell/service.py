"""HTTP facade over consultations for browser and script clients.

Sessions live in memory with TTL eviction; every request for one session is
serialized through a per-session lock. Interactive endpoints speak JSON;
the report endpoint also serves the canonical structured-text rendering so
that HTTP, CLI and library reports are byte-comparable.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from . import eqetic
from .eqetic import coverage_matrix
from .inference import explain_how
from .model import Certainty, KnowledgeBase, ident_key
from .session import (
    Answer,
    AnswerValidationError,
    DiagnosisReport,
    Finished,
    Selection,
    Session,
    SessionError,
    WrongVariableError,
    kb_hash,
    render_structured,
)

DEFAULT_TTL_SECONDS = 3600.0
REPORT_MEDIA_TYPE = "text/vnd.inqshell.report; version=1"


class SelectionBody(BaseModel):
    value: str
    certainty: Optional[float] = Field(default=None, ge=0.0, le=1.0)


class AnswerBody(BaseModel):
    variable: str
    selections: list[SelectionBody]


class CreateSessionBody(BaseModel):
    kb: str
    truth_threshold: Optional[float] = Field(default=None, ge=0.0, le=1.0)


@dataclass
class _Held:
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)
    expires_at: float = 0.0


class SessionStore:
    def __init__(self, ttl: float = DEFAULT_TTL_SECONDS):
        self.ttl = ttl
        self._sessions: dict[str, _Held] = {}
        self._lock = threading.Lock()

    def create(self, session: Session) -> str:
        handle = secrets.token_urlsafe(24)
        with self._lock:
            self._evict()
            self._sessions[handle] = _Held(
                session, expires_at=time.monotonic() + self.ttl
            )
        return handle

    def get(self, handle: str) -> _Held:
        with self._lock:
            self._evict()
            held = self._sessions.get(handle)
            if held is None:
                raise KeyError(handle)
            held.expires_at = time.monotonic() + self.ttl
            return held

    def _evict(self) -> None:
        now = time.monotonic()
        for handle in [
            h for h, held in self._sessions.items() if held.expires_at < now
        ]:
            del self._sessions[handle]


def _question_json(session: Session, handle: str, step) -> dict:
    if isinstance(step, Finished):
        return {"session": handle, "finished": True, "question": None}
    prompt = step.prompt
    return {
        "session": handle,
        "finished": False,
        "question": {
            "variable": step.variable,
            "kind": prompt.kind.value,
            "text": prompt.question_text,
            "help": prompt.help_text,
            "options": list(step.options),
            "accepts_cf": step.accepts_cf,
        },
    }


def _report_json(report: DiagnosisReport) -> dict:
    return {
        "kb": report.kb_name,
        "version": report.kb_version,
        "hash": report.kb_hash,
        "truth_threshold": float(report.truth_threshold),
        "complete": report.complete,
        "goals": [
            {
                "variable": g.variable,
                "status": g.status,
                "value": g.value,
                "certainty": float(g.certainty)
                if g.certainty is not None
                else None,
                "tags": sorted(
                    f"{e.value}/{l.value}" for e, l in g.tags
                ),
                "rules": list(g.rule_ids),
                "suppressed": g.suppressed,
            }
            for g in report.goals
        ],
        "rules": [
            {
                "id": r.rule_id,
                "satisfied": r.satisfied,
                "tags": sorted(f"{e.value}/{l.value}" for e, l in r.tags),
            }
            for r in report.rules
        ],
        "structured": render_structured(report),
    }


def create_app(
    kbs: Optional[list[KnowledgeBase]] = None,
    ttl: float = DEFAULT_TTL_SECONDS,
    ui_dir: Optional[str] = None,
    allow_origin: str = "*",
) -> FastAPI:
    if kbs is None:
        kbs = [eqetic.build()]
    catalog: dict[str, KnowledgeBase] = {}
    for kb in kbs:
        catalog[ident_key(kb.name)] = kb

    app = FastAPI(title="inqshell consultation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[allow_origin] if allow_origin != "*" else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(ttl=ttl)
    app.state.store = store

    def _held(handle: str) -> _Held:
        try:
            return store.get(handle)
        except KeyError:
            raise HTTPException(404, "unknown or expired session") from None

    @app.get("/kbs")
    def list_kbs() -> JSONResponse:
        out = []
        for kb in catalog.values():
            matrix = coverage_matrix(kb)
            out.append(
                {
                    "name": kb.name,
                    "version": kb.version,
                    "hash": kb_hash(kb),
                    "variables": len(kb.variables),
                    "rules": len(kb.rules),
                    "goals": len(kb.goals),
                    "coverage": [
                        {
                            "entity": entity.value,
                            "level": level.value,
                            "rules": count,
                        }
                        for (entity, level), count in matrix.items()
                    ],
                }
            )
        return JSONResponse({"kbs": out})

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> JSONResponse:
        kb = catalog.get(ident_key(body.kb))
        if kb is None:
            raise HTTPException(404, f"unknown knowledge base {body.kb!r}")
        try:
            session = Session(kb, truth_threshold=body.truth_threshold)
        except (SessionError, ValueError) as exc:
            raise HTTPException(422, str(exc)) from None
        step = session.next()
        handle = store.create(session)
        payload = _question_json(session, handle, step)
        return JSONResponse(payload, status_code=201)

    @app.get("/sessions/{handle}/question")
    def get_question(handle: str) -> JSONResponse:
        held = _held(handle)
        with held.lock:
            step = held.session.next()
            return JSONResponse(_question_json(held.session, handle, step))

    @app.post("/sessions/{handle}/answer")
    def post_answer(handle: str, body: AnswerBody) -> JSONResponse:
        held = _held(handle)
        with held.lock:
            session = held.session
            if session.finished:
                raise HTTPException(409, "the consultation is finished")
            answer = Answer(
                body.variable,
                tuple(
                    Selection(s.value, s.certainty) for s in body.selections
                ),
            )
            try:
                session.answer(answer)
            except WrongVariableError as exc:
                raise HTTPException(409, str(exc)) from None
            except (AnswerValidationError, ValueError) as exc:
                raise HTTPException(422, str(exc)) from None
            step = session.next()
            return JSONResponse(_question_json(session, handle, step))

    @app.get("/sessions/{handle}/report")
    def get_report(handle: str, request: Request, format: str = "text"):
        held = _held(handle)
        with held.lock:
            report = held.session.report()
        if format == "json" or "application/json" in request.headers.get(
            "accept", ""
        ):
            return JSONResponse(_report_json(report))
        return PlainTextResponse(
            render_structured(report), media_type=REPORT_MEDIA_TYPE
        )

    @app.get("/sessions/{handle}/explain/{variable}")
    def get_explain(handle: str, variable: str) -> JSONResponse:
        held = _held(handle)
        with held.lock:
            session = held.session
            session.report()
            lines = explain_how(session.proofs(), variable)
        return JSONResponse({"variable": variable, "lines": lines})

    @app.get("/sessions/{handle}/transcript")
    def get_transcript(handle: str) -> Response:
        held = _held(handle)
        with held.lock:
            data = held.session.save()
        return Response(data, media_type="text/vnd.inqshell.transcript")

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
