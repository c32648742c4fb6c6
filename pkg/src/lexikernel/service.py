"""HTTP/JSON API for the dictionary game and on-demand structure analysis."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import __version__
from .decomposition import decompose_full
from .game import (
    GameRules,
    GameSession,
    RuleViolation,
    SessionStore,
    analyze_session,
    export_minidict,
)
from .graph import build_graph
from .lexicon import Lexicon, LexiconEntry, close_lexicon, dump_jsonl, normalize_definition
from .mgs import solve_mgs


class _NotFound(Exception):
    def __init__(self, session_id: str):
        self.session_id = session_id


class _BadDictionary(Exception):
    def __init__(self, message: str):
        self.message = message


class RulesPayload(BaseModel):
    min_content_words: int = Field(default=2, ge=1)
    ban_self_reference: bool = True


class StartRequest(BaseModel):
    start_word: str
    rules: RulesPayload | None = None


class DefinitionRequest(BaseModel):
    word: str
    tokens: list[str]


class SessionView(BaseModel):
    id: str
    start_word: str
    status: str
    pending: list[str]
    defined_count: int
    defined: dict[str, list[str]]


class AnalysisView(BaseModel):
    labels: dict[str, str]
    mgs: list[str]
    report: dict


class AnalyzeRequest(BaseModel):
    """A small dictionary to analyze directly: word -> definition tokens."""

    entries: dict[str, list[str]]


class HealthView(BaseModel):
    status: str
    version: str


def _view(session: GameSession) -> SessionView:
    return SessionView(
        id=session.id,
        start_word=session.start_word,
        status=session.status,
        pending=list(session.pending),
        defined_count=len(session.defined),
        defined={w: sorted(bag) for w, bag in session.defined.items()},
    )


def create_app(store: SessionStore | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    store = store or SessionStore()
    app = FastAPI(title="lexikernel", version=__version__)

    @app.exception_handler(RuleViolation)
    async def rule_violation_handler(request: Request, exc: RuleViolation) -> JSONResponse:
        return JSONResponse(status_code=409, content={"rule": exc.rule, "detail": exc.detail})

    def _session_or_404(session_id: str) -> GameSession:
        session = store.get(session_id)
        if session is None:
            raise _NotFound(session_id)
        return session

    @app.exception_handler(_NotFound)
    async def not_found_handler(request: Request, exc: _NotFound) -> JSONResponse:
        return JSONResponse(status_code=404, content={"detail": f"no session {exc.session_id}"})

    @app.exception_handler(_BadDictionary)
    async def bad_dictionary_handler(request: Request, exc: _BadDictionary) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": exc.message})

    @app.get("/health", response_model=HealthView)
    def health() -> HealthView:
        return HealthView(status="ok", version=__version__)

    @app.post("/sessions", response_model=SessionView, status_code=201)
    def create_session(payload: StartRequest) -> SessionView:
        rules = None
        if payload.rules is not None:
            rules = GameRules(
                min_content_words=payload.rules.min_content_words,
                ban_self_reference=payload.rules.ban_self_reference,
            )
        return _view(store.create(payload.start_word, rules))

    @app.get("/sessions/{session_id}", response_model=SessionView)
    def get_session(session_id: str) -> SessionView:
        return _view(_session_or_404(session_id))

    @app.post("/sessions/{session_id}/definitions", response_model=SessionView)
    def post_definition(session_id: str, payload: DefinitionRequest) -> SessionView:
        _session_or_404(session_id)
        return _view(store.submit(session_id, payload.word, payload.tokens))

    @app.get("/sessions/{session_id}/export")
    def export_session(session_id: str) -> PlainTextResponse:
        session = _session_or_404(session_id)
        if session.status != "complete":
            raise RuleViolation("session-active", "finish the session before exporting")
        return PlainTextResponse(
            dump_jsonl(export_minidict(session)), media_type="application/x-ndjson"
        )

    @app.get("/sessions/{session_id}/analysis", response_model=AnalysisView)
    def session_analysis(session_id: str) -> AnalysisView:
        session = _session_or_404(session_id)
        if session.status != "complete":
            raise RuleViolation("session-active", "finish the session before analysis")
        decomposition, report, grounding = analyze_session(session)
        return AnalysisView(
            labels={w: label.value for w, label in sorted(decomposition.label.items())},
            mgs=sorted(grounding.words),
            report=report.to_record(),
        )

    @app.post("/analyze", response_model=AnalysisView)
    def analyze(payload: AnalyzeRequest) -> AnalysisView:
        raw = Lexicon(
            {
                w.lower(): LexiconEntry(
                    w.lower(), 1, normalize_definition(tokens, store.stop)
                )
                for w, tokens in payload.entries.items()
            }
        )
        lexicon, _ = close_lexicon(raw, mode="drop-unknown")
        try:
            decomposition, report = decompose_full(lexicon)
        except ValueError as exc:
            raise _BadDictionary(str(exc))
        grounding = solve_mgs(build_graph(lexicon))
        report.mgs_words = grounding.size
        return AnalysisView(
            labels={w: label.value for w, label in sorted(decomposition.label.items())},
            mgs=sorted(grounding.words),
            report=report.to_record(),
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
