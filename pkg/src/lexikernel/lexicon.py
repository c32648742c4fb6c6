"""Dictionary ingestion: lexicons, stop lists, and psycholinguistic norms.

A lexicon maps headwords to first-sense definition bags (sets of lowercase
content words). A *closed* lexicon additionally guarantees that every word
used in a definition is itself a headword, which is what the graph layer
requires.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import IO, Iterable

from .stopwords import DEFAULT_STOP_WORDS

NORM_VARIABLES = ("aoa", "concreteness", "imageability", "freq_written", "freq_oral")

NORMS_HEADER = ("word", "aoa", "concreteness", "imageability", "freq_written", "freq_oral")


class LexiconError(Exception):
    """Base class for ingestion and closure failures."""


class ParseError(LexiconError):
    """Malformed source data; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateEntryError(ParseError):
    """Same headword seen twice at the same sense rank."""


class ClosureError(LexiconError):
    """A definition token has no entry and the mode forbids dropping it."""


@dataclass(frozen=True)
class LexiconEntry:
    """One headword with its (first-sense) definition bag."""

    headword: str
    sense_rank: int
    definition: frozenset[str]

    def __post_init__(self) -> None:
        if not self.headword:
            raise ValueError("headword must be nonempty")
        if self.sense_rank < 1:
            raise ValueError(f"sense rank must be positive, got {self.sense_rank}")
        if any(not t for t in self.definition):
            raise ValueError(f"empty definition token in entry {self.headword!r}")


@dataclass
class Lexicon:
    """Headword -> entry map, optionally closed under definition."""

    entries: dict[str, LexiconEntry] = field(default_factory=dict)
    closed: bool = False

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def headwords(self) -> list[str]:
        return sorted(self.entries)

    def definition(self, word: str) -> frozenset[str]:
        return self.entries[word].definition


@dataclass(frozen=True)
class StopList:
    """Set of function words to discard from definitions."""

    words: frozenset[str] = frozenset()

    def __contains__(self, word: str) -> bool:
        return word in self.words

    @classmethod
    def default(cls) -> "StopList":
        return cls(DEFAULT_STOP_WORDS)

    @classmethod
    def from_stream(cls, stream: IO[str]) -> "StopList":
        """One word per line, '#' starts a comment, blank lines ignored."""
        words = set()
        for raw in stream:
            word = raw.split("#", 1)[0].strip().lower()
            if word:
                words.add(word)
        return cls(frozenset(words))

    @classmethod
    def from_file(cls, path: str) -> "StopList":
        with open(path, encoding="utf-8") as fh:
            return cls.from_stream(fh)


@dataclass(frozen=True)
class NormRecord:
    """Per-word psycholinguistic values; missing values stay None."""

    aoa: float | None = None
    concreteness: float | None = None
    imageability: float | None = None
    freq_written: float | None = None
    freq_oral: float | None = None

    def get(self, variable: str) -> float | None:
        if variable not in NORM_VARIABLES:
            raise KeyError(variable)
        return getattr(self, variable)

    def any_present(self) -> bool:
        return any(self.get(v) is not None for v in NORM_VARIABLES)


@dataclass
class NormsTable:
    """Word -> norm record, as loaded from a norms CSV."""

    rows: dict[str, NormRecord] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


@dataclass
class ClosureReport:
    """What close_lexicon changed or flagged."""

    dropped: dict[str, int] = field(default_factory=dict)  # unknown token -> occurrences removed
    emptied_entries: list[str] = field(default_factory=list)  # nonempty definitions that became empty
    self_dropped: list[str] = field(default_factory=list)  # headwords removed from their own bag

    @property
    def total_dropped(self) -> int:
        return sum(self.dropped.values())


def _split_tokens(value: str) -> list[str]:
    return [t for t in value.lower().split() if t]


def _check_headword(word: str, line: int) -> str:
    word = word.strip().lower()
    if not word:
        raise ParseError("empty headword", line)
    if len(word.split()) > 1:
        raise ParseError(f"multiword headword {word!r} is not supported", line)
    return word


def parse_dictionary(source: IO[str], format: str = "jsonl") -> Lexicon:
    """Parse a dictionary stream into an unclosed lexicon.

    Only the first sense (rank 1) of each headword is kept; all tokens are
    lowercased. Supported formats:

    * ``jsonl``: one record per line,
      ``{"word": ..., "senses": [{"rank": 1, "tokens": [...]}, ...]}``
    * ``tsv``: ``headword TAB senseRank TAB space-separated tokens``
    """
    if format == "jsonl":
        return _parse_jsonl(source)
    if format == "tsv":
        return _parse_tsv(source)
    raise ParseError(f"unknown dictionary format {format!r}")


def _parse_jsonl(source: IO[str]) -> Lexicon:
    entries: dict[str, LexiconEntry] = {}
    seen: set[tuple[str, int]] = set()
    for lineno, raw in enumerate(source, 1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from exc
        if not isinstance(record, dict) or "word" not in record:
            raise ParseError("record must be an object with a 'word' field", lineno)
        head = _check_headword(str(record["word"]), lineno)
        senses = record.get("senses", [])
        if not isinstance(senses, list):
            raise ParseError(f"'senses' must be a list for {head!r}", lineno)
        for sense in senses:
            if not isinstance(sense, dict):
                raise ParseError(f"malformed sense for {head!r}", lineno)
            try:
                rank = int(sense["rank"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"sense of {head!r} lacks an integer rank", lineno) from exc
            if rank < 1:
                raise ParseError(f"sense rank must be positive for {head!r}", lineno)
            if (head, rank) in seen:
                raise DuplicateEntryError(f"duplicate sense {rank} for {head!r}", lineno)
            seen.add((head, rank))
            if rank != 1:
                continue  # first-meaning rule: later senses are discarded
            tokens = sense.get("tokens", [])
            if not isinstance(tokens, list) or any(not isinstance(t, str) for t in tokens):
                raise ParseError(f"tokens of {head!r} must be a list of strings", lineno)
            bag = frozenset(t for tok in tokens for t in _split_tokens(tok))
            entries[head] = LexiconEntry(head, 1, bag)
    return Lexicon(entries, closed=False)


def _parse_tsv(source: IO[str]) -> Lexicon:
    entries: dict[str, LexiconEntry] = {}
    seen: set[tuple[str, int]] = set()
    for lineno, raw in enumerate(source, 1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"expected 3 tab-separated fields, got {len(parts)}", lineno)
        head = _check_headword(parts[0], lineno)
        try:
            rank = int(parts[1])
        except ValueError as exc:
            raise ParseError(f"sense rank {parts[1]!r} is not an integer", lineno) from exc
        if rank < 1:
            raise ParseError(f"sense rank must be positive for {head!r}", lineno)
        if (head, rank) in seen:
            raise DuplicateEntryError(f"duplicate sense {rank} for {head!r}", lineno)
        seen.add((head, rank))
        if rank != 1:
            continue
        entries[head] = LexiconEntry(head, 1, frozenset(_split_tokens(parts[2])))
    return Lexicon(entries, closed=False)


def content_tokens(tokens: Iterable[str], stop: StopList) -> list[str]:
    """Lowercased content tokens in first-use order, duplicates removed."""
    seen: set[str] = set()
    out: list[str] = []
    for raw in tokens:
        for tok in _split_tokens(raw):
            if tok in stop or tok in seen:
                continue
            seen.add(tok)
            out.append(tok)
    return out


def normalize_definition(tokens: Iterable[str], stop: StopList) -> frozenset[str]:
    """Collapse a token sequence to its unordered content-word bag."""
    return frozenset(content_tokens(tokens, stop))


def strip_stopwords(lex: Lexicon, stop: StopList) -> Lexicon:
    """Apply stop-word removal to every definition bag."""
    entries = {
        head: LexiconEntry(head, e.sense_rank, normalize_definition(e.definition, stop))
        for head, e in lex.entries.items()
    }
    return Lexicon(entries, closed=False)


def close_lexicon(
    raw: Lexicon, mode: str = "drop-unknown", drop_self: bool = False
) -> tuple[Lexicon, ClosureReport]:
    """Make every defining word a headword.

    ``drop-unknown`` removes tokens without an entry and tallies them in the
    report; ``error-unknown`` raises ClosureError on the first such token.
    ``drop_self`` additionally removes a headword from its own bag.
    Closing an already-closed lexicon is the identity.
    """
    if mode not in ("drop-unknown", "error-unknown"):
        raise ValueError(f"unknown closure mode {mode!r}")
    report = ClosureReport()
    entries: dict[str, LexiconEntry] = {}
    for head in sorted(raw.entries):
        entry = raw.entries[head]
        bag = set(entry.definition)
        if drop_self and head in bag:
            bag.discard(head)
            report.self_dropped.append(head)
        unknown = sorted(t for t in bag if t not in raw.entries)
        if unknown:
            if mode == "error-unknown":
                raise ClosureError(
                    f"definition of {head!r} uses {unknown[0]!r}, which has no entry"
                )
            for t in unknown:
                report.dropped[t] = report.dropped.get(t, 0) + 1
                bag.discard(t)
        if not bag and entry.definition:
            report.emptied_entries.append(head)
        entries[head] = LexiconEntry(head, entry.sense_rank, frozenset(bag))
    return Lexicon(entries, closed=True), report


def load_norms(source: IO[str]) -> NormsTable:
    """Load a norms CSV headed ``word,aoa,concreteness,imageability,freq_written,freq_oral``.

    Empty cells become missing values; a nonempty cell that does not parse
    as a finite number is a ParseError. Duplicate words keep the last row
    and add a warning.
    """
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("norms file is empty") from None
    if tuple(h.strip().lower() for h in header) != NORMS_HEADER:
        raise ParseError(f"expected header {','.join(NORMS_HEADER)}", 1)
    table = NormsTable()
    for rowno, row in enumerate(reader, 2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(NORMS_HEADER):
            raise ParseError(f"expected {len(NORMS_HEADER)} cells, got {len(row)}", rowno)
        word = row[0].strip().lower()
        if not word:
            raise ParseError("empty word cell", rowno)
        values: dict[str, float | None] = {}
        for name, cell in zip(NORM_VARIABLES, row[1:]):
            cell = cell.strip()
            if not cell:
                values[name] = None
                continue
            try:
                value = float(cell)
            except ValueError as exc:
                raise ParseError(f"cell {name}={cell!r} is not numeric", rowno) from exc
            if not math.isfinite(value):
                raise ParseError(f"cell {name}={cell!r} is not finite", rowno)
            values[name] = value
        if word in table.rows:
            table.warnings.append(f"duplicate norms row for {word!r}; keeping the last one")
        table.rows[word] = NormRecord(**values)
    return table


def dump_jsonl(lex: Lexicon) -> str:
    """Serialize a lexicon in the jsonl dictionary format, sorted by headword."""
    lines = []
    for head in lex.headwords():
        entry = lex.entries[head]
        record = {
            "word": head,
            "senses": [{"rank": entry.sense_rank, "tokens": sorted(entry.definition)}],
        }
        lines.append(json.dumps(record, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")
