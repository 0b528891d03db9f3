"""Bit-accounted work storage and space-bounded reachability.

The graph (or formula) behind an ``AdjacencyOracle`` models the read-only
input tape and is never charged.  Everything an algorithm keeps between
oracle queries is allocated through a ``MeteredWorkspace``; an index into
a domain of size D costs ceil(log2 D) bits.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .instances import Cnf2Formula, Digraph
from .solvers import lit_vertex

DEFAULT_STEP_BUDGET = 10**8
BUDGET_ENV = "SUBLIN_STEP_BUDGET"

# savitch peak <= SAVITCH_C * (ceil(log2 n) + 1) * 3 * ceil(log2 n)
SAVITCH_C = 2


class StepBudgetExhausted(RuntimeError):
    """The abstract step counter passed the workspace budget."""

    def __init__(self, steps, budget):
        super().__init__(f"step budget {budget} exhausted after {steps} steps")
        self.steps = steps
        self.budget = budget


def default_step_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_STEP_BUDGET


def index_bits(domain_size: int) -> int:
    """Bits needed to name one element of a domain of the given size."""
    return max(domain_size - 1, 0).bit_length()


class MeteredWorkspace:
    """Counts live and peak work bits plus abstract steps.

    Allocations are released in LIFO order; ``free`` must name the size of
    the most recent live allocation.
    """

    def __init__(self, budget=None):
        self.budget = default_step_budget() if budget is None else budget
        self.live_bits = 0
        self.peak_bits = 0
        self.step_count = 0
        self._blocks = []

    def alloc(self, bits: int) -> int:
        if bits < 0:
            raise ValueError("negative allocation")
        self._blocks.append(bits)
        self.live_bits += bits
        if self.live_bits > self.peak_bits:
            self.peak_bits = self.live_bits
        return bits

    def free(self, bits: int) -> None:
        if not self._blocks or self._blocks[-1] != bits:
            raise RuntimeError(f"free({bits}) does not match the latest allocation")
        self._blocks.pop()
        self.live_bits -= bits

    def tick(self, n: int = 1) -> None:
        self.step_count += n
        if self.step_count > self.budget:
            raise StepBudgetExhausted(self.step_count, self.budget)

    def report(self, algorithm, n, m, answer) -> dict:
        return {
            "algorithm": algorithm,
            "n": n,
            "m": m,
            "peak_bits": self.peak_bits,
            "steps": self.step_count,
            "answer": answer,
        }


# ---------------------------------------------------------------------------
# read-only adjacency views

class AdjacencyOracle:
    """Read-only digraph on vertices 1..n answering edge and neighbour queries."""

    n: int

    def out_edges(self, v):
        raise NotImplementedError

    def has_edge(self, u, v) -> bool:
        return any(w == v for w in self.out_edges(u))

    def out_degree(self, v) -> int:
        return sum(1 for _ in self.out_edges(v))

    def in_edges(self, v):
        raise NotImplementedError

    def in_degree(self, v) -> int:
        return sum(1 for _ in self.in_edges(v))

    def max_out_degree(self) -> int:
        return max((self.out_degree(v) for v in range(1, self.n + 1)), default=0)


class DigraphOracle(AdjacencyOracle):
    def __init__(self, graph: Digraph):
        self.graph = graph
        self.n = graph.num_vertices
        self._edges = frozenset(graph.edges)

    def out_edges(self, v):
        return iter(self.graph.out_neighbors(v))

    def has_edge(self, u, v) -> bool:
        return (u, v) in self._edges

    def out_degree(self, v) -> int:
        return len(self.graph.out_neighbors(v))

    def in_edges(self, v):
        return iter(self.graph.in_neighbors(v))

    def in_degree(self, v) -> int:
        return len(self.graph.in_neighbors(v))


class ImplicationOracle(AdjacencyOracle):
    """Implicit implication graph of a 2CNF over 2n literal vertices.

    Vertex 2v-1 is x_v and 2v is ¬x_v.  Neighbours are produced by looking
    up the clauses that mention the complementary literal; the per-literal
    clause lists are a re-indexing of the read-only input, not work storage.
    """

    def __init__(self, formula: Cnf2Formula):
        self.formula = formula
        self.n = 2 * formula.num_vars
        by_lit = {}
        for idx, clause in enumerate(formula.clauses):
            for lit in set(clause):
                by_lit.setdefault(lit, []).append(idx)
        self._by_lit = by_lit

    @staticmethod
    def _lit(vertex):
        v = (vertex + 1) // 2
        return v if vertex % 2 else -v

    def out_edges(self, vertex):
        # (¬u ∨ w) gives u -> w; the unit (¬u) gives u -> ¬u
        lit = self._lit(vertex)
        for idx in self._by_lit.get(-lit, ()):
            clause = self.formula.clauses[idx]
            if len(clause) == 1:
                yield lit_vertex(-lit)
                continue
            a, b = clause
            if a == -lit:
                yield lit_vertex(b)
            if b == -lit:
                yield lit_vertex(a)

    def in_edges(self, vertex):
        lit = self._lit(vertex)
        for idx in self._by_lit.get(lit, ()):
            clause = self.formula.clauses[idx]
            if len(clause) == 1:
                yield lit_vertex(-lit)
                continue
            a, b = clause
            if a == lit:
                yield lit_vertex(-b)
            if b == lit:
                yield lit_vertex(-a)

    def degree(self, vertex) -> int:
        return self.out_degree(vertex) + self.in_degree(vertex)


def implication_adjacency(formula: Cnf2Formula) -> ImplicationOracle:
    return ImplicationOracle(formula)


# ---------------------------------------------------------------------------
# reachability strategies

def reach_bfs(adj: AdjacencyOracle, s: int, t: int, ws: MeteredWorkspace) -> bool:
    """Linear-space baseline: n-bit visited map plus an n-slot ring queue."""
    n = adj.n
    idx = index_bits(n)
    visited_bits = ws.alloc(n)
    queue_bits = ws.alloc(n * idx)
    cursor_bits = ws.alloc(2 * idx)
    try:
        ws.tick()
        if s == t:
            return True
        visited = {s}
        queue = [s]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for w in adj.out_edges(u):
                ws.tick()
                if w == t:
                    return True
                if w not in visited:
                    visited.add(w)
                    queue.append(w)
        return False
    finally:
        ws.free(cursor_bits)
        ws.free(queue_bits)
        ws.free(visited_bits)


def savitch_frame_bits(n: int) -> int:
    """One recursion frame: endpoints u, v, midpoint w and the length bound d."""
    return 3 * index_bits(n) + index_bits(n + 1)


def _midpoints(adj, u, v, half, rest, vertices):
    # a half of length 1 can only end at a neighbour, so stream that set instead
    if half == 1:
        yield u
        yield from adj.out_edges(u)
    elif rest == 1:
        yield v
        yield from adj.in_edges(v)
    else:
        yield from vertices


def _dead_end(adj, u, v) -> bool:
    return adj.out_degree(u) == 0 or adj.in_degree(v) == 0


def reach_savitch(adj: AdjacencyOracle, s: int, t: int, ws: MeteredWorkspace) -> bool:
    """Midpoint recursion reach(u, v, d) with d = n at the root.

    Only the stack of frames is charged; at most ceil(log2 n) + 1 frames are
    live at once.  Degree and direct-edge lookups are constant-space
    shortcuts against the read-only oracle.
    """
    n = adj.n
    frame = savitch_frame_bits(n)
    has_edge = adj.has_edge
    vertices = range(1, n + 1)

    def rec(u, v, d):
        ws.alloc(frame)
        ws.tick()
        try:
            if u == v:
                return True
            if d <= 1:
                return d == 1 and has_edge(u, v)
            if _dead_end(adj, u, v):
                return False
            if has_edge(u, v):
                return True
            half = (d + 1) // 2
            rest = d - half
            for w in _midpoints(adj, u, v, half, rest, vertices):
                if rec(u, w, half) and rec(w, v, rest):
                    return True
            return False
        finally:
            ws.free(frame)

    return rec(s, t, n)


def _dfs_limited(adj, s, t, limit, ws, entry_bits, cursor_bits):
    """Depth-first search along simple paths of at most ``limit`` edges.

    The root vertex is held by the caller, so only its cursor is charged;
    every deeper entry costs a vertex index plus a cursor.
    """
    ws.tick()
    if s == t:
        return True
    if limit <= 0:
        return False
    ws.alloc(cursor_bits)
    path = [s]
    iters = [adj.out_edges(s)]
    try:
        while iters:
            ws.tick()
            for w in iters[-1]:
                ws.tick()
                if w == t:
                    return True
                if len(path) < limit and w not in path:
                    ws.alloc(entry_bits)
                    path.append(w)
                    iters.append(adj.out_edges(w))
                    break
            else:
                iters.pop()
                path.pop()
                if iters:
                    ws.free(entry_bits)
        return False
    finally:
        for _ in range(len(iters) - 1):
            ws.free(entry_bits)
        ws.free(cursor_bits)


def _dfs_costs(adj):
    cursor = index_bits(adj.max_out_degree() + 1)
    return index_bits(adj.n) + cursor, cursor


def reach_dfs_limited(adj: AdjacencyOracle, s: int, t: int, limit: int, ws: MeteredWorkspace) -> bool:
    """True iff a path of at most ``limit`` edges exists; no visited set.

    Exponential time in the worst case; raises ``StepBudgetExhausted`` rather
    than answering False when the budget runs out.
    """
    if limit < 0:
        raise ValueError("depth limit must be >= 0")
    entry, cursor = _dfs_costs(adj)
    return _dfs_limited(adj, s, t, limit, ws, entry, cursor)


def reach_hybrid(adj: AdjacencyOracle, s: int, t: int, tau: int, ws: MeteredWorkspace) -> bool:
    """Savitch splitting until a segment bound is <= tau, then depth-limited DFS."""
    n = adj.n
    if not 1 <= tau <= max(n, 1):
        raise ValueError(f"threshold tau={tau} must lie in 1..n")
    frame = savitch_frame_bits(n)
    entry, cursor = _dfs_costs(adj)
    vertices = range(1, n + 1)

    def rec(u, v, d):
        if d <= tau:
            return _dfs_limited(adj, u, v, d, ws, entry, cursor)
        ws.alloc(frame)
        ws.tick()
        try:
            if u == v:
                return True
            if _dead_end(adj, u, v):
                return False
            if adj.has_edge(u, v):
                return True
            half = (d + 1) // 2
            rest = d - half
            for w in _midpoints(adj, u, v, half, rest, vertices):
                if rec(u, w, half) and rec(w, v, rest):
                    return True
            return False
        finally:
            ws.free(frame)

    return rec(s, t, n)


@dataclass(frozen=True)
class Strategy:
    name: str
    tau: int = 0

    @classmethod
    def parse(cls, text) -> "Strategy":
        if isinstance(text, Strategy):
            return text
        if isinstance(text, tuple):
            return cls(*text)
        name, _, tau = str(text).partition(":")
        if name == "hybrid":
            if not tau:
                raise ValueError("hybrid strategy needs a threshold, e.g. hybrid:4")
            if int(tau) < 1:
                raise ValueError("hybrid threshold must be >= 1")
            return cls("hybrid", int(tau))
        if name in ("bfs", "savitch") and not tau:
            return cls(name)
        raise ValueError(f"unknown strategy {text!r}; use bfs, savitch or hybrid:<tau>")

    def __str__(self):
        return f"hybrid:{self.tau}" if self.name == "hybrid" else self.name

    def reach(self, adj, s, t, ws) -> bool:
        if self.name == "bfs":
            return reach_bfs(adj, s, t, ws)
        if self.name == "savitch":
            return reach_savitch(adj, s, t, ws)
        return reach_hybrid(adj, s, t, min(self.tau, max(adj.n, 1)), ws)


def reach_space(graph: Digraph, strategy, ws: MeteredWorkspace) -> bool:
    return Strategy.parse(strategy).reach(DigraphOracle(graph), graph.source, graph.target, ws)


def twosat_space(formula: Cnf2Formula, strategy, ws: MeteredWorkspace) -> bool:
    """Satisfiable iff no variable v has both v ⇝ ¬v and ¬v ⇝ v.

    Queries run one after another on the same workspace, so the charge is
    the peak of a single query plus the loop counter.
    """
    strat = Strategy.parse(strategy)
    adj = implication_adjacency(formula)
    n = formula.num_vars
    counter = ws.alloc(index_bits(n + 1))
    try:
        for v in range(1, n + 1):
            ws.tick()
            pos, neg = lit_vertex(v), lit_vertex(-v)
            if strat.reach(adj, pos, neg, ws) and strat.reach(adj, neg, pos, ws):
                return False
        return True
    finally:
        ws.free(counter)
