"""The directed definition graph and its structural primitives.

Arc orientation is definer -> defined throughout: u -> v exists exactly when
u occurs in the (closed) definition bag of v.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .lexicon import Lexicon

_EMPTY: frozenset[str] = frozenset()


class DefGraph:
    """Immutable directed graph over words, with both adjacency directions."""

    __slots__ = ("_out", "_in", "_arc_count")

    def __init__(self, out_arcs: dict[str, frozenset[str]], in_arcs: dict[str, frozenset[str]]):
        self._out = out_arcs
        self._in = in_arcs
        self._arc_count = sum(len(s) for s in out_arcs.values())

    @classmethod
    def from_arcs(cls, vertices: Iterable[str], arcs: Iterable[tuple[str, str]]) -> "DefGraph":
        out: dict[str, set[str]] = {v: set() for v in vertices}
        inn: dict[str, set[str]] = {v: set() for v in out}
        for u, v in arcs:
            if u not in out or v not in out:
                raise ValueError(f"arc ({u!r}, {v!r}) uses a vertex that was not declared")
            out[u].add(v)
            inn[v].add(u)
        return cls(
            {v: frozenset(s) for v, s in out.items()},
            {v: frozenset(s) for v, s in inn.items()},
        )

    @property
    def vertices(self) -> frozenset[str]:
        return frozenset(self._out)

    def sorted_vertices(self) -> list[str]:
        return sorted(self._out)

    def __len__(self) -> int:
        return len(self._out)

    def __contains__(self, word: str) -> bool:
        return word in self._out

    @property
    def arc_count(self) -> int:
        return self._arc_count

    def out_arcs(self, word: str) -> frozenset[str]:
        return self._out.get(word, _EMPTY)

    def in_arcs(self, word: str) -> frozenset[str]:
        return self._in.get(word, _EMPTY)

    def has_arc(self, u: str, v: str) -> bool:
        return v in self._out.get(u, _EMPTY)

    def arcs(self) -> list[tuple[str, str]]:
        return sorted((u, v) for u, targets in self._out.items() for v in targets)

    def subgraph(self, words: Iterable[str]) -> "DefGraph":
        keep = frozenset(words)
        unknown = keep - self.vertices
        if unknown:
            raise ValueError(f"unknown vertices in subgraph: {sorted(unknown)[:5]}")
        out = {v: self._out[v] & keep for v in keep}
        inn = {v: self._in[v] & keep for v in keep}
        return DefGraph(out, inn)


@dataclass
class SccPartition:
    """Strongly connected components, ordered by their smallest member."""

    component_of: dict[str, int]
    components: list[frozenset[str]]

    def component(self, word: str) -> frozenset[str]:
        return self.components[self.component_of[word]]


@dataclass
class Condensation:
    """Acyclic quotient graph over component ids."""

    node_count: int
    out_arcs: dict[int, frozenset[int]]

    def arcs(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a, targets in self.out_arcs.items() for b in targets)

    def in_degree(self) -> dict[int, int]:
        deg = {i: 0 for i in range(self.node_count)}
        for _, b in self.arcs():
            deg[b] += 1
        return deg


def build_graph(lex: Lexicon) -> DefGraph:
    """Turn a closed lexicon into its definition graph."""
    if not lex.closed:
        raise ValueError("build_graph requires a closed lexicon")
    out: dict[str, set[str]] = {w: set() for w in lex.entries}
    inn: dict[str, set[str]] = {w: set() for w in lex.entries}
    for head, entry in lex.entries.items():
        for definer in entry.definition:
            out[definer].add(head)
        inn[head].update(entry.definition)
    return DefGraph(
        {v: frozenset(s) for v, s in out.items()},
        {v: frozenset(s) for v, s in inn.items()},
    )


def compute_sccs(g: DefGraph) -> SccPartition:
    """Tarjan's algorithm, iterative so that big dictionaries do not recurse out."""
    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    raw_components: list[set[str]] = []

    for root in g.sorted_vertices():
        if root in index:
            continue
        # Each frame is (vertex, iterator over its successors).
        work = [(root, iter(sorted(g.out_arcs(root))))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, successors = work[-1]
            advanced = False
            for w in successors:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(g.out_arcs(w)))))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                component: set[str] = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.add(w)
                    if w == v:
                        break
                raw_components.append(component)

    ordered = sorted(raw_components, key=min)
    component_of = {w: i for i, comp in enumerate(ordered) for w in comp}
    return SccPartition(component_of, [frozenset(c) for c in ordered])


def condense(g: DefGraph, p: SccPartition) -> Condensation:
    """Quotient graph of a partition; arcs between distinct components only."""
    if set(p.component_of) != set(g.vertices):
        raise ValueError("partition does not cover exactly the graph's vertices")
    covered = sorted(w for comp in p.components for w in comp)
    if covered != g.sorted_vertices():
        raise ValueError("partition components do not partition the vertex set")
    n = len(p.components)
    out: dict[int, set[int]] = {i: set() for i in range(n)}
    for u, v in g.arcs():
        cu, cv = p.component_of[u], p.component_of[v]
        if cu != cv:
            out[cu].add(cv)
    return Condensation(n, {i: frozenset(s) for i, s in out.items()})


def vertices_reaching_cycle(g: DefGraph) -> frozenset[str]:
    """Every vertex from which some directed cycle (self-loops included) is reachable."""
    partition = compute_sccs(g)
    cyclic = {
        w
        for comp in partition.components
        if len(comp) > 1
        for w in comp
    }
    cyclic.update(w for w in g.vertices if g.has_arc(w, w))
    # Anything that can reach a cyclic vertex reaches a cycle; walk in-arcs backwards.
    reached = set(cyclic)
    queue = deque(sorted(cyclic))
    while queue:
        v = queue.popleft()
        for u in g.in_arcs(v):
            if u not in reached:
                reached.add(u)
                queue.append(u)
    return frozenset(reached)


def to_dot(g: DefGraph, colors: dict[str, str] | None = None, name: str = "defgraph") -> str:
    """Deterministic DOT rendering; optional fill color per vertex."""
    lines = [f"digraph {name} {{"]
    for v in g.sorted_vertices():
        color = (colors or {}).get(v)
        if color:
            lines.append(f'  "{v}" [style=filled, fillcolor="{color}"];')
        else:
            lines.append(f'  "{v}";')
    for u, v in g.arcs():
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
