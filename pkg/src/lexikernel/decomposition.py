"""Hidden structure of a closed lexicon: kernel, core, and satellites.

The kernel is the fixed point of repeatedly deleting words that define no
remaining word. Restricted to the kernel, the core is the union of SCCs with
no incoming definitional link from outside themselves; the satellites are the
rest of the kernel.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .graph import DefGraph, build_graph, compute_sccs, condense
from .lexicon import Lexicon


class Label(str, Enum):
    OUTSIDE = "OUTSIDE"
    SATELLITE = "SATELLITE"
    CORE = "CORE"


@dataclass
class Decomposition:
    """Per-word structural label plus the core's component list."""

    label: dict[str, Label]
    core_components: list[frozenset[str]] = field(default_factory=list)

    @property
    def core(self) -> frozenset[str]:
        return frozenset(w for w, l in self.label.items() if l is Label.CORE)

    @property
    def satellites(self) -> frozenset[str]:
        return frozenset(w for w, l in self.label.items() if l is Label.SATELLITE)

    @property
    def kernel(self) -> frozenset[str]:
        return frozenset(w for w, l in self.label.items() if l is not Label.OUTSIDE)


def _pct(numerator: int, denominator: int) -> int:
    """Whole-percent share, rounded half up."""
    if denominator == 0:
        return 0
    return int(math.floor(100.0 * numerator / denominator + 0.5))


@dataclass
class StructureReport:
    """Word counts and shares for the whole dictionary and its layers."""

    total_words: int
    kernel_words: int
    satellite_words: int
    core_words: int
    core_is_single_scc: bool
    kernel_is_grounding_set: bool
    mgs_words: int | None = None

    def __post_init__(self) -> None:
        if self.kernel_words != self.satellite_words + self.core_words:
            raise ValueError("kernel count must equal satellites plus core")

    def to_record(self) -> dict:
        record = {
            "total_words": self.total_words,
            "kernel_words": self.kernel_words,
            "kernel_pct_of_total": _pct(self.kernel_words, self.total_words),
            "satellite_words": self.satellite_words,
            "satellite_pct_of_total": _pct(self.satellite_words, self.total_words),
            "satellite_pct_of_kernel": _pct(self.satellite_words, self.kernel_words),
            "core_words": self.core_words,
            "core_pct_of_total": _pct(self.core_words, self.total_words),
            "core_pct_of_kernel": _pct(self.core_words, self.kernel_words),
            "core_is_single_scc": self.core_is_single_scc,
            "kernel_is_grounding_set": self.kernel_is_grounding_set,
        }
        if self.mgs_words is not None:
            record["mgs_words"] = self.mgs_words
            record["mgs_pct_of_total"] = _pct(self.mgs_words, self.total_words)
            record["mgs_pct_of_kernel"] = _pct(self.mgs_words, self.kernel_words)
        return record

    def to_text(self) -> str:
        rows = [
            ("whole dictionary (D)", self.total_words, None, None),
            ("kernel (K)", self.kernel_words, _pct(self.kernel_words, self.total_words), None),
            (
                "satellites (S)",
                self.satellite_words,
                _pct(self.satellite_words, self.total_words),
                _pct(self.satellite_words, self.kernel_words),
            ),
            (
                "core (C)",
                self.core_words,
                _pct(self.core_words, self.total_words),
                _pct(self.core_words, self.kernel_words),
            ),
        ]
        if self.mgs_words is not None:
            rows.append(
                (
                    "minimal grounding set",
                    self.mgs_words,
                    _pct(self.mgs_words, self.total_words),
                    _pct(self.mgs_words, self.kernel_words),
                )
            )
        lines = [f"{'layer':<24}{'words':>8}{'%D':>6}{'%K':>6}"]
        for name, count, pct_d, pct_k in rows:
            d = f"{pct_d}%" if pct_d is not None else ""
            k = f"{pct_k}%" if pct_k is not None else ""
            lines.append(f"{name:<24}{count:>8}{d:>6}{k:>6}")
        lines.append(f"core is a single SCC: {'yes' if self.core_is_single_scc else 'no'}")
        lines.append(
            f"kernel is a grounding set: {'yes' if self.kernel_is_grounding_set else 'no'}"
        )
        return "\n".join(lines)


def extract_kernel(g: DefGraph) -> frozenset[str]:
    """Fixed point of deleting vertices with no remaining out-arc.

    The result is order-independent and equals the set of vertices from which
    a cycle is reachable.
    """
    out_degree = {v: len(g.out_arcs(v)) for v in g.vertices}
    queue = deque(sorted(v for v, d in out_degree.items() if d == 0))
    removed: set[str] = set()
    while queue:
        v = queue.popleft()
        removed.add(v)
        for u in g.in_arcs(v):
            if u in removed:
                continue
            out_degree[u] -= 1
            if out_degree[u] == 0:
                queue.append(u)
    return frozenset(g.vertices - removed)


def split_core_satellites(
    g: DefGraph, kernel: frozenset[str]
) -> tuple[frozenset[str], frozenset[str], list[frozenset[str]]]:
    """Core and satellite word sets of a kernel, plus the core's SCC list.

    The core is the union of source components of the kernel's condensation:
    the SCCs receiving no definitional link from outside themselves.
    """
    if kernel != extract_kernel(g):
        raise ValueError("kernel argument is not the pruning fixed point of the graph")
    if not kernel:
        return frozenset(), frozenset(), []
    sub = g.subgraph(kernel)
    partition = compute_sccs(sub)
    cond = condense(sub, partition)
    in_degree = cond.in_degree()
    core_components = [
        partition.components[i] for i in range(cond.node_count) if in_degree[i] == 0
    ]
    for comp in core_components:
        # A kernel built from real definitions gives every word an in-arc, so a
        # source component must be cyclic. A singleton without a self-loop here
        # means a degenerate input (a word with an empty definition).
        if len(comp) == 1:
            (w,) = comp
            if not sub.has_arc(w, w):
                raise ValueError(
                    f"kernel source component {{{w!r}}} is acyclic; "
                    "does some entry have an empty definition?"
                )
    core = frozenset(w for comp in core_components for w in comp)
    satellites = frozenset(kernel - core)
    core_components.sort(key=min)
    return core, satellites, core_components


def _subgraph_is_acyclic(g: DefGraph, words: frozenset[str]) -> bool:
    in_degree = {v: len(g.in_arcs(v) & words) for v in words}
    queue = deque(v for v, d in in_degree.items() if d == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for w in g.out_arcs(v):
            if w in words:
                in_degree[w] -= 1
                if in_degree[w] == 0:
                    queue.append(w)
    return seen == len(words)


def decompose_full(lex: Lexicon) -> tuple[Decomposition, StructureReport]:
    """Run the whole pipeline: graph, kernel, core/satellite split, report."""
    if not lex.closed:
        raise ValueError("decompose_full requires a closed lexicon")
    g = build_graph(lex)
    kernel = extract_kernel(g)
    core, satellites, core_components = split_core_satellites(g, kernel)
    label = {w: Label.OUTSIDE for w in g.vertices}
    for w in satellites:
        label[w] = Label.SATELLITE
    for w in core:
        label[w] = Label.CORE
    decomposition = Decomposition(label, core_components)
    report = StructureReport(
        total_words=len(g),
        kernel_words=len(kernel),
        satellite_words=len(satellites),
        core_words=len(core),
        core_is_single_scc=len(core_components) == 1,
        kernel_is_grounding_set=_subgraph_is_acyclic(g, frozenset(g.vertices - kernel)),
    )
    return decomposition, report


def is_def_closed(lex: Lexicon, words: frozenset[str]) -> bool:
    """True when every word in the set is defined using only words in the set."""
    unknown = sorted(words - set(lex.entries))
    if unknown:
        raise ValueError(f"not a headword: {unknown[0]!r}")
    return all(lex.definition(w) <= words for w in words)
