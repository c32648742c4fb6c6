"""Grounding sets and exact minimum feedback vertex set solving.

A grounding set is a word set whose removal leaves the definition graph
acyclic; equivalently, starting from it every remaining word becomes
learnable through definitions. A minimal grounding set is a minimum feedback
vertex set of the graph.

The exact solver follows the contraction approach of Lin and Jou: reduction
rules (self-loop forcing, degree-zero deletion, in/out-degree-one
contraction) shrink the instance, and branch and bound with a
vertex-disjoint cycle-packing lower bound finishes it. Ties between optima
are broken by returning the lexicographically smallest solution.
"""

from __future__ import annotations

import heapq
import math
import sys
import time
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .decomposition import Decomposition, Label
from .graph import DefGraph, compute_sccs


class InvariantError(RuntimeError):
    """An internal consistency check failed; indicates a solver bug."""


class _Timeout(Exception):
    pass


class _Done(Exception):
    pass


@dataclass(frozen=True)
class SolverConfig:
    time_limit: float = 60.0
    enumeration_cap: int = 1000
    branch_rule: str = "max-degree"

    def __post_init__(self) -> None:
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.enumeration_cap <= 0:
            raise ValueError("enumeration_cap must be positive")
        if self.branch_rule not in ("max-degree", "lexicographic"):
            raise ValueError(f"unknown branch rule {self.branch_rule!r}")


@dataclass(frozen=True)
class GroundingSet:
    words: frozenset[str]
    optimal: bool
    lower_bound: int
    wall_time: float = 0.0
    nodes: int = 0

    @property
    def size(self) -> int:
        return len(self.words)

    def to_record(self) -> dict:
        return {
            "size": self.size,
            "optimal": self.optimal,
            "lower_bound": self.lower_bound,
            "wall_time_s": round(self.wall_time, 6),
            "nodes": self.nodes,
            "words": sorted(self.words),
        }


@dataclass
class ReducedInstance:
    graph: DefGraph
    forced_in: frozenset[str]
    merged_into: dict[str, str]


@dataclass(frozen=True)
class StraddleReport:
    in_core: int
    in_satellite: int
    outside_kernel: int

    def to_record(self) -> dict:
        return {
            "in_core": self.in_core,
            "in_satellite": self.in_satellite,
            "outside_kernel": self.outside_kernel,
        }


# ---------------------------------------------------------------------------
# Working graph


class _MutGraph:
    """Mutable adjacency used by the solver; vertices are deleted in place."""

    __slots__ = ("out", "inn")

    def __init__(self, out: dict[str, set[str]], inn: dict[str, set[str]]):
        self.out = out
        self.inn = inn

    @classmethod
    def from_graph(cls, g: DefGraph) -> "_MutGraph":
        order = g.sorted_vertices()
        return cls(
            {v: set(g.out_arcs(v)) for v in order},
            {v: set(g.in_arcs(v)) for v in order},
        )

    def copy(self) -> "_MutGraph":
        return _MutGraph(
            {v: set(s) for v, s in self.out.items()},
            {v: set(s) for v, s in self.inn.items()},
        )

    def delete(self, v: str) -> None:
        for w in self.out[v]:
            if w != v:
                self.inn[w].discard(v)
        for w in self.inn[v]:
            if w != v:
                self.out[w].discard(v)
        del self.out[v]
        del self.inn[v]

    def add_arc(self, u: str, v: str) -> None:
        self.out[u].add(v)
        self.inn[v].add(u)

    def freeze(self) -> DefGraph:
        return DefGraph(
            {v: frozenset(s) for v, s in self.out.items()},
            {v: frozenset(s) for v, s in self.inn.items()},
        )


def _reduce(
    work: _MutGraph,
    forbidden: frozenset[str] = frozenset(),
    merged: dict[str, str] | None = None,
    contract: bool = True,
) -> tuple[list[str], bool]:
    """Apply reduction rules to a fixpoint, smallest candidate vertex first.

    Returns (forced vertices, feasible). Infeasible means a forbidden vertex
    acquired a self-loop, so no feedback vertex set avoiding the forbidden
    set exists. With contract=False only the optimum-preserving rules run
    (self-loop forcing and degree-zero deletion), which keeps the full set
    of minimum solutions intact for enumeration.
    """
    forced: list[str] = []
    heap = sorted(work.out)
    out, inn = work.out, work.inn

    def push(v: str) -> None:
        if v in out:
            heapq.heappush(heap, v)

    while heap:
        v = heapq.heappop(heap)
        if v not in out:
            continue
        out_v = out[v]
        in_v = inn[v]
        if v in out_v:  # LOOP: a self-loop vertex is in every solution
            if v in forbidden:
                return forced, False
            forced.append(v)
            neighbours = (out_v | in_v) - {v}
            work.delete(v)
            for w in neighbours:
                push(w)
            continue
        if not in_v or not out_v:  # IN0/OUT0: not on any cycle
            neighbours = out_v | in_v
            work.delete(v)
            for w in neighbours:
                push(w)
            continue
        if not contract:
            continue
        if len(in_v) == 1:  # IN1: every cycle through v passes its predecessor
            (u,) = in_v
            if not (u in forbidden and v not in forbidden):
                targets = set(out_v)
                work.delete(v)
                for w in targets:
                    work.add_arc(u, w)
                if merged is not None:
                    merged[v] = u
                push(u)
                for w in targets:
                    push(w)
                continue
        if len(out_v) == 1:  # OUT1: symmetric contraction into the successor
            (w,) = out_v
            if not (w in forbidden and v not in forbidden):
                sources = set(in_v)
                work.delete(v)
                for u in sources:
                    work.add_arc(u, w)
                if merged is not None:
                    merged[v] = w
                push(w)
                for u in sources:
                    push(u)
                continue
    return forced, True


def _find_cycle(out: dict[str, set[str]], banned: set[str]) -> list[str] | None:
    """Some directed cycle avoiding banned vertices, or None. Deterministic."""
    color: dict[str, int] = {}
    parent: dict[str, str] = {}
    for root in sorted(out):
        if root in banned or color.get(root):
            continue
        color[root] = 1
        stack = [(root, iter(sorted(out[root])))]
        while stack:
            v, successors = stack[-1]
            advanced = False
            for w in successors:
                if w in banned:
                    continue
                c = color.get(w, 0)
                if c == 0:
                    color[w] = 1
                    parent[w] = v
                    stack.append((w, iter(sorted(out[w]))))
                    advanced = True
                    break
                if c == 1:
                    cycle = [v]
                    x = v
                    while x != w:
                        x = parent[x]
                        cycle.append(x)
                    cycle.reverse()
                    return cycle
            if not advanced:
                color[v] = 2
                stack.pop()
    return None


def _cycle_packing(work: _MutGraph) -> int:
    """Greedy count of vertex-disjoint cycles; a lower bound for the FVS size."""
    used: set[str] = set()
    count = 0
    for u in sorted(work.out):
        if u in used:
            continue
        if u in work.out[u]:
            used.add(u)
            count += 1
            continue
        for v in sorted(work.out[u] & work.inn[u]):
            if v != u and v not in used:
                used.update((u, v))
                count += 1
                break
    while True:
        cycle = _find_cycle(work.out, used)
        if cycle is None:
            return count
        used.update(cycle)
        count += 1


def _shortest_cycle(work: _MutGraph) -> list[str]:
    """Shortest directed cycle, deterministic; the graph must be cyclic."""
    best: list[str] | None = None
    for s in sorted(work.out):
        if best is not None and len(best) <= 2:
            break
        if s in work.out[s]:
            return [s]
        # BFS over out-arcs from s; the shortest cycle through s closes via
        # an in-neighbour of s.
        dist = {s: 0}
        parent: dict[str, str] = {}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            if best is not None and dist[v] + 1 >= len(best):
                continue
            for w in sorted(work.out[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    queue.append(w)
        for u in sorted(work.inn[s]):
            if u in dist and (best is None or dist[u] + 1 < len(best)):
                path = [u]
                x = u
                while x != s:
                    x = parent[x]
                    path.append(x)
                path.reverse()
                best = path
    if best is None:
        raise InvariantError("asked for a cycle in an acyclic graph")
    return best


# ---------------------------------------------------------------------------
# Branch and bound


class _Search:
    def __init__(self, deadline: float, branch_rule: str):
        self.deadline = deadline
        self.branch_rule = branch_rule
        self.nodes = 0
        self.best_size: float = math.inf
        self.best_set: list[str] | None = None
        self.stop_at = -1

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise _Timeout

    def _pick(self, work: _MutGraph, forbidden: frozenset[str]) -> str | None:
        candidates = [v for v in work.out if v not in forbidden]
        if not candidates:
            return None
        if self.branch_rule == "lexicographic":
            return min(candidates)
        return min(candidates, key=lambda v: (-(len(work.out[v]) + len(work.inn[v])), v))

    def _visit(self, work: _MutGraph, chosen: list[str], forbidden: frozenset[str]) -> None:
        self._tick()
        forced, feasible = _reduce(work, forbidden)
        if not feasible:
            return
        chosen = chosen + forced
        if len(chosen) >= self.best_size:
            return
        if not work.out:
            self.best_size = len(chosen)
            self.best_set = chosen
            if self.best_size <= self.stop_at:
                raise _Done
            return
        if len(chosen) + _cycle_packing(work) >= self.best_size:
            return
        x = self._pick(work, forbidden)
        if x is None:
            return  # cycles remain but every vertex is excluded: infeasible
        include = work.copy()
        include.delete(x)
        self._visit(include, chosen + [x], forbidden)
        self._visit(work, chosen, forbidden | {x})

    def minimize(self, work: _MutGraph) -> tuple[int, list[str]]:
        self.best_size = math.inf
        self.best_set = None
        self.stop_at = -1
        self._visit(work, [], frozenset())
        if self.best_set is None:
            raise InvariantError("branch and bound found no solution")
        return int(self.best_size), self.best_set

    def decide(self, work: _MutGraph, budget: int) -> bool:
        """Is there a feedback vertex set of size at most budget?"""
        if budget < 0:
            return False
        self.best_size = budget + 1
        self.best_set = None
        self.stop_at = budget
        try:
            self._visit(work, [], frozenset())
        except _Done:
            return True
        return self.best_set is not None


# ---------------------------------------------------------------------------
# Public operations


def is_grounding_set(g: DefGraph, words: Iterable[str]) -> bool:
    """Check a word set two independent ways and insist the answers agree.

    Route one: closure learnability, starting from the set and repeatedly
    marking words whose whole definition is known. Route two: acyclicity of
    the graph induced on the remaining vertices.
    """
    u = frozenset(words)
    unknown = u - g.vertices
    if unknown:
        raise ValueError(f"not a graph vertex: {sorted(unknown)[0]!r}")

    known = set(u)
    blocked = {w: len(g.in_arcs(w) - u) for w in g.vertices if w not in u}
    queue = deque(sorted(w for w, n in blocked.items() if n == 0))
    while queue:
        w = queue.popleft()
        known.add(w)
        for x in g.out_arcs(w):
            if x in u or x in known:
                continue
            blocked[x] -= 1
            if blocked[x] == 0:
                queue.append(x)
    learnable = len(known) == len(g.vertices)

    rest = g.vertices - u
    in_degree = {v: len(g.in_arcs(v) & rest) for v in rest}
    order = deque(v for v, d in in_degree.items() if d == 0)
    seen = 0
    while order:
        v = order.popleft()
        seen += 1
        for w in g.out_arcs(v):
            if w in rest:
                in_degree[w] -= 1
                if in_degree[w] == 0:
                    order.append(w)
    acyclic = seen == len(rest)

    if learnable != acyclic:
        raise InvariantError(
            f"grounding criteria disagree: closure={learnable}, acyclicity={acyclic}"
        )
    return learnable


def reduce_instance(g: DefGraph) -> ReducedInstance:
    """Shrink a graph with the contraction rules; minimum sizes are preserved."""
    work = _MutGraph.from_graph(g)
    merged: dict[str, str] = {}
    forced, feasible = _reduce(work, merged=merged)
    if not feasible:
        raise InvariantError("reduction without exclusions cannot be infeasible")
    return ReducedInstance(work.freeze(), frozenset(forced), merged)


def _ensure_recursion_room() -> None:
    # Exclusion chains can get long on larger kernels; recursion depth tracks
    # the number of branch decisions, not the graph diameter.
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)


def _cyclic_vertices(work: _MutGraph) -> frozenset[str]:
    """Vertices lying on some cycle of the working graph."""
    partition = compute_sccs(work.freeze())
    cyclic = {w for comp in partition.components if len(comp) > 1 for w in comp}
    cyclic.update(v for v in work.out if v in work.out[v])
    return frozenset(cyclic)


def _lex_min_solution(g: DefGraph, k: int, search: _Search) -> list[str]:
    """The lexicographically smallest minimum feedback vertex set of size k.

    Greedy prefix extension: the next word is the smallest one, above the
    previous pick, that still allows completing an optimum. Feasibility of
    each candidate is a budgeted decision search.
    """
    base = _MutGraph.from_graph(g)
    chosen: list[str] = []
    floor = ""
    budget = k
    while budget > 0:
        extended = False
        for w in sorted(_cyclic_vertices(base)):
            if floor and w <= floor:
                continue
            trial = base.copy()
            trial.delete(w)
            if search.decide(trial, budget - 1):
                chosen.append(w)
                floor = w
                base.delete(w)
                budget -= 1
                extended = True
                break
        if not extended:
            raise InvariantError("could not extend an optimal prefix")
    return chosen


def solve_mgs(g: DefGraph, cfg: SolverConfig | None = None) -> GroundingSet:
    """Exact minimum feedback vertex set, or the best found within the time limit.

    The returned set is the lexicographically smallest optimum when the solve
    completes. On timeout the incumbent is returned with optimal=False and
    the best proven lower bound.
    """
    cfg = cfg or SolverConfig()
    _ensure_recursion_room()
    start = time.monotonic()
    search = _Search(start + cfg.time_limit, cfg.branch_rule)

    incumbent = greedy_grounding_set(g)
    work = _MutGraph.from_graph(g)
    forced, _ = _reduce(work)
    root_lower = len(forced) + (_cycle_packing(work) if work.out else 0)

    try:
        if work.out:
            residual_size, residual_set = search.minimize(work)
        else:
            residual_size, residual_set = 0, []
        k = len(forced) + residual_size
        try:
            words = frozenset(_lex_min_solution(g, k, search))
        except _Timeout:
            words = frozenset(forced) | frozenset(residual_set)
        optimal = True
        lower = k
    except _Timeout:
        optimal = False
        lower = root_lower
        if search.best_set is not None and len(forced) + len(search.best_set) < incumbent.size:
            words = frozenset(forced) | frozenset(search.best_set)
        else:
            words = incumbent.words

    if not is_grounding_set(g, words):
        raise InvariantError("solver produced a non-grounding set")
    return GroundingSet(
        words=words,
        optimal=optimal,
        lower_bound=lower,
        wall_time=time.monotonic() - start,
        nodes=search.nodes,
    )


def enumerate_mgs(g: DefGraph, cfg: SolverConfig | None = None) -> list[GroundingSet]:
    """All minimum feedback vertex sets, up to the enumeration cap.

    Requires a proven optimum. Only optimum-preserving reductions run inside
    the enumeration (contractions would merge away alternative optima);
    branching covers a shortest cycle, partitioned by first included vertex,
    so every optimum is produced exactly once.
    """
    cfg = cfg or SolverConfig()
    _ensure_recursion_room()
    base = solve_mgs(g, cfg)
    if not base.optimal:
        raise ValueError("enumeration requires a proven optimum; the solve timed out")
    k = base.size
    deadline = time.monotonic() + cfg.time_limit

    solutions: list[frozenset[str]] = []
    seen: set[frozenset[str]] = set()

    def visit(work: _MutGraph, chosen: list[str], excluded: frozenset[str], budget: int) -> None:
        if len(solutions) >= cfg.enumeration_cap:
            return
        if time.monotonic() > deadline:
            raise _Timeout
        forced, feasible = _reduce(work, excluded, contract=False)
        if not feasible:
            return
        budget -= len(forced)
        if budget < 0:
            return
        chosen = chosen + forced
        if not work.out:
            if budget == 0:
                solution = frozenset(chosen)
                if solution not in seen:
                    seen.add(solution)
                    solutions.append(solution)
            return
        if budget == 0:
            return
        cycle = _shortest_cycle(work)
        for i, v in enumerate(cycle):
            if v in excluded:
                continue
            branch = work.copy()
            branch.delete(v)
            visit(branch, chosen + [v], excluded | frozenset(cycle[:i]), budget - 1)

    try:
        visit(_MutGraph.from_graph(g), [], frozenset(), k)
    except _Timeout as exc:
        raise ValueError("enumeration hit the time limit before completing") from exc

    for solution in solutions:
        if not is_grounding_set(g, solution):
            raise InvariantError("enumerated a non-grounding set")
    ordered = sorted(solutions, key=sorted)
    return [
        GroundingSet(words=s, optimal=True, lower_bound=k, wall_time=0.0, nodes=0)
        for s in ordered
    ]


def greedy_grounding_set(g: DefGraph) -> GroundingSet:
    """Scalable upper bound: reduce, then repeatedly take the busiest vertex."""
    start = time.monotonic()
    work = _MutGraph.from_graph(g)
    picked: list[str] = []
    forced, _ = _reduce(work)
    picked.extend(forced)
    base_forced = len(forced)
    made_pick = False
    while work.out:
        made_pick = True
        x = min(work.out, key=lambda v: (-len(work.out[v]), v))
        work.delete(x)
        picked.append(x)
        forced, _ = _reduce(work)
        picked.extend(forced)
    words = frozenset(picked)
    if not is_grounding_set(g, words):
        raise InvariantError("greedy produced a non-grounding set")
    return GroundingSet(
        words=words,
        optimal=False,
        lower_bound=base_forced + (1 if made_pick else 0),
        wall_time=time.monotonic() - start,
        nodes=0,
    )


def straddle_report(d: Decomposition, s: GroundingSet) -> StraddleReport:
    """How a grounding set distributes over core, satellites, and the rest.

    The core/satellite split is an observation, never a requirement. A
    solver-produced set can only contain cycle vertices, and every cycle
    survives sink pruning, so a member outside the kernel is an error.
    """
    unknown = sorted(w for w in s.words if w not in d.label)
    if unknown:
        raise ValueError(f"word {unknown[0]!r} is not part of the decomposition")
    in_core = sum(1 for w in s.words if d.label[w] is Label.CORE)
    in_satellite = sum(1 for w in s.words if d.label[w] is Label.SATELLITE)
    outside = len(s.words) - in_core - in_satellite
    if outside:
        raise InvariantError(f"{outside} grounding words lie outside the kernel")
    return StraddleReport(in_core=in_core, in_satellite=in_satellite, outside_kernel=0)
