"""The dictionary game: define a start word, then every content word used.

A session keeps a FIFO queue of words awaiting definition. Each accepted
definition moves its word to the defined map and appends any newly used
content words to the queue, in first-use order. The session completes when
the queue empties, at which point it exports a closed mini-dictionary.

Sessions persist as append-only event logs, one JSONL file per session;
replaying a log reproduces the exact final state.
"""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .decomposition import Decomposition, StructureReport, decompose_full
from .graph import build_graph
from .lexicon import (
    Lexicon,
    LexiconEntry,
    StopList,
    close_lexicon,
    content_tokens,
)
from .mgs import GroundingSet, SolverConfig, solve_mgs


class RuleViolation(Exception):
    """A submission broke a game rule; carries the rule name for the API."""

    def __init__(self, rule: str, detail: str):
        super().__init__(detail)
        self.rule = rule
        self.detail = detail


class SessionStateError(Exception):
    """The session is in the wrong state for the requested operation."""


@dataclass(frozen=True)
class GameRules:
    min_content_words: int = 2
    ban_self_reference: bool = True

    def __post_init__(self) -> None:
        if self.min_content_words < 1:
            raise ValueError("min_content_words must be at least 1")


@dataclass
class GameSession:
    id: str
    start_word: str
    rules: GameRules
    stop: StopList
    defined: dict[str, frozenset[str]] = field(default_factory=dict)
    pending: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "complete" if not self.pending else "active"

    def seen_words(self) -> set[str]:
        return set(self.defined) | set(self.pending)


def start_session(
    start_word: str,
    rules: GameRules | None = None,
    stop: StopList | None = None,
    session_id: str | None = None,
) -> GameSession:
    rules = rules or GameRules()
    stop = stop if stop is not None else StopList.default()
    word = start_word.strip().lower()
    if not word or len(word.split()) > 1:
        raise RuleViolation("start-word", f"start word {start_word!r} must be a single word")
    if word in stop:
        raise RuleViolation("start-word", f"{word!r} is a stop word and cannot be defined")
    return GameSession(
        id=session_id or secrets.token_urlsafe(12),
        start_word=word,
        rules=rules,
        stop=stop,
        pending=[word],
    )


def submit_definition(session: GameSession, word: str, tokens: list[str]) -> GameSession:
    """Record one definition; raises RuleViolation when a rule rejects it."""
    if session.status != "active":
        raise RuleViolation("session-complete", "the session is already complete")
    word = word.strip().lower()
    if word not in session.pending:
        raise RuleViolation("out-of-turn", f"{word!r} is not awaiting a definition")
    ordered = content_tokens(tokens, session.stop)
    bag = frozenset(ordered)
    if len(bag) < session.rules.min_content_words:
        raise RuleViolation(
            "min-content-words",
            f"definition has {len(bag)} content words; "
            f"need at least {session.rules.min_content_words}",
        )
    if session.rules.ban_self_reference and word in bag:
        raise RuleViolation("self-reference", f"{word!r} may not appear in its own definition")
    session.defined[word] = bag
    session.pending.remove(word)
    for token in ordered:
        if token not in session.defined and token not in session.pending:
            session.pending.append(token)
    return session


def export_minidict(session: GameSession) -> Lexicon:
    """The completed session as a closed lexicon; one entry per defined word."""
    if session.status != "complete":
        raise SessionStateError("cannot export an active session")
    raw = Lexicon(
        {w: LexiconEntry(w, 1, bag) for w, bag in session.defined.items()},
        closed=False,
    )
    closed, _ = close_lexicon(raw, mode="error-unknown")
    return closed


def analyze_session(
    session: GameSession, cfg: SolverConfig | None = None
) -> tuple[Decomposition, StructureReport, GroundingSet]:
    """Full structural analysis of the exported mini-dictionary, exact MGS."""
    lexicon = export_minidict(session)
    decomposition, report = decompose_full(lexicon)
    grounding = solve_mgs(build_graph(lexicon), cfg)
    report.mgs_words = grounding.size
    return decomposition, report, grounding


# ---------------------------------------------------------------------------
# Event-log persistence


def session_events(session: GameSession) -> list[dict]:
    """Reserialize a session as its event list (start plus accepted submissions)."""
    events: list[dict] = [
        {
            "type": "start",
            "id": session.id,
            "start_word": session.start_word,
            "rules": {
                "min_content_words": session.rules.min_content_words,
                "ban_self_reference": session.rules.ban_self_reference,
            },
        }
    ]
    for word, bag in session.defined.items():
        events.append({"type": "define", "word": word, "tokens": sorted(bag)})
    return events


def replay_events(events: list[dict], stop: StopList) -> GameSession:
    """Rebuild a session by rerunning its event log against the same stop list."""
    if not events or events[0].get("type") != "start":
        raise ValueError("event log must begin with a start event")
    head = events[0]
    rules = GameRules(**head.get("rules", {}))
    session = start_session(head["start_word"], rules, stop, session_id=head["id"])
    for event in events[1:]:
        if event.get("type") != "define":
            raise ValueError(f"unknown event type {event.get('type')!r}")
        submit_definition(session, event["word"], list(event["tokens"]))
    return session


class SessionStore:
    """In-memory sessions with optional append-only logs on disk.

    Mutations to one session are serialized behind a per-session lock;
    distinct sessions proceed concurrently.
    """

    def __init__(
        self,
        directory: str | Path | None = None,
        stop: StopList | None = None,
        rules: GameRules | None = None,
    ):
        self.directory = Path(directory) if directory is not None else None
        self.stop = stop if stop is not None else StopList.default()
        self.default_rules = rules or GameRules()
        self._sessions: dict[str, GameSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            self._recover()

    def _recover(self) -> None:
        assert self.directory is not None
        for path in sorted(self.directory.glob("*.jsonl")):
            events = [json.loads(line) for line in path.read_text().splitlines() if line]
            session = replay_events(events, self.stop)
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()

    def _append(self, session_id: str, event: dict) -> None:
        if self.directory is None:
            return
        with open(self.directory / f"{session_id}.jsonl", "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
            fh.flush()

    def create(self, start_word: str, rules: GameRules | None = None) -> GameSession:
        session = start_session(start_word, rules or self.default_rules, self.stop)
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        self._append(session.id, session_events(session)[0])
        return session

    def get(self, session_id: str) -> GameSession | None:
        return self._sessions.get(session_id)

    def ids(self) -> list[str]:
        return sorted(self._sessions)

    def submit(self, session_id: str, word: str, tokens: list[str]) -> GameSession:
        session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        with self._locks[session_id]:
            submit_definition(session, word, tokens)
            self._append(
                session_id,
                {"type": "define", "word": word.strip().lower(), "tokens": list(tokens)},
            )
        return session
