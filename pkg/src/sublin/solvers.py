"""Polynomial-time reference solvers and exhaustive oracles.

Each solver has an independent brute-force counterpart (``brute_*`` or
``*_closure``) used only for cross-checking on small inputs.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .instances import Cnf2Formula, Digraph, HppInstance, LpSystem, NfaSpec, UockInstance

BRUTE_2SAT_MAX_VARS = 25
BRUTE_LP_MAX_COLS = 20
BRUTE_UOCK_MAX_PIECES = 15
_CHUNK_BITS = 16


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    assignment: Optional[dict] = None

    def __bool__(self):
        return self.satisfiable


@dataclass(frozen=True)
class LpResult:
    feasible: bool
    x: Optional[tuple] = None

    def __bool__(self):
        return self.feasible


@dataclass(frozen=True)
class OptResult:
    value: int
    sequence: tuple


# ---------------------------------------------------------------------------
# 2SAT

def lit_vertex(lit: int) -> int:
    """Implication-graph vertex of a literal: 2v-1 for v, 2v for ¬v."""
    return 2 * lit - 1 if lit > 0 else -2 * lit


def vertex_lit(vertex: int) -> int:
    v = (vertex + 1) // 2
    return v if vertex % 2 else -v


def implication_edges(formula: Cnf2Formula):
    """Yield (u, w) vertex pairs; (a∨b) gives ¬a→b, ¬b→a and (l) gives ¬l→l."""
    for clause in formula.clauses:
        if len(clause) == 1:
            (a,) = clause
            yield lit_vertex(-a), lit_vertex(a)
        else:
            a, b = clause
            yield lit_vertex(-a), lit_vertex(b)
            yield lit_vertex(-b), lit_vertex(a)


def _tarjan(num_vertices: int, succ) -> list:
    """Iterative Tarjan; returns comp[v] (1-based v) numbered in reverse topological order."""
    index = [0] * (num_vertices + 1)
    low = [0] * (num_vertices + 1)
    on_stack = [False] * (num_vertices + 1)
    comp = [-1] * (num_vertices + 1)
    stack = []
    counter = 1
    n_comp = 0
    for root in range(1, num_vertices + 1):
        if index[root]:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            for w in it:
                if not index[w]:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ[w])))
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp[w] = n_comp
                        if w == v:
                            break
                    n_comp += 1
    return comp


def solve_2sat(formula: Cnf2Formula) -> SatResult:
    """Implication graph + strongly connected components.

    x_v is set true when its SCC comes later in topological order than the
    SCC of ¬x_v (Tarjan numbers components in reverse topological order).
    """
    n = formula.num_vars
    succ = [[] for _ in range(2 * n + 1)]
    for u, w in implication_edges(formula):
        succ[u].append(w)
    comp = _tarjan(2 * n, succ)
    assignment = {}
    for v in range(1, n + 1):
        pos, neg = comp[2 * v - 1], comp[2 * v]
        if pos == neg:
            return SatResult(False)
        assignment[v] = int(pos < neg)
    return SatResult(True, assignment)


def _assignment_block(n: int, start: int, stop: int) -> np.ndarray:
    """Rows are assignments start..stop-1 in lexicographic order (x1 most significant)."""
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(bool)


def brute_2sat(formula: Cnf2Formula) -> SatResult:
    """Exhaustive search; the lexicographically first satisfying assignment."""
    n = formula.num_vars
    if n > BRUTE_2SAT_MAX_VARS:
        raise ValueError(f"brute_2sat limited to {BRUTE_2SAT_MAX_VARS} variables, got {n}")
    total = 1 << n
    chunk = 1 << _CHUNK_BITS
    for start in range(0, total, chunk):
        block = _assignment_block(n, start, min(total, start + chunk))
        ok = np.ones(len(block), dtype=bool)
        for clause in formula.clauses:
            sat = np.zeros(len(block), dtype=bool)
            for lit in clause:
                col = block[:, abs(lit) - 1]
                sat |= col if lit > 0 else ~col
            ok &= sat
        hits = np.flatnonzero(ok)
        if hits.size:
            row = block[hits[0]]
            return SatResult(True, {v: int(row[v - 1]) for v in range(1, n + 1)})
    return SatResult(False)


# ---------------------------------------------------------------------------
# reachability

def reach_decide(graph: Digraph, source=None, target=None) -> bool:
    """Breadth-first search; s = t is reachable by the empty path."""
    s = graph.source if source is None else source
    t = graph.target if target is None else target
    if s == t:
        return True
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in graph.out_neighbors(u):
            if w == t:
                return True
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return False


def transitive_closure(graph: Digraph) -> np.ndarray:
    """Reflexive-transitive closure by repeated boolean squaring."""
    n = graph.num_vertices
    r = graph.adjacency_matrix() | np.eye(n, dtype=bool)
    span = 1
    while span < n:
        r = (r.astype(np.int64) @ r.astype(np.int64)) > 0
        span *= 2
    return r


def reach_closure(graph: Digraph) -> bool:
    return bool(transitive_closure(graph)[graph.source - 1, graph.target - 1])


def bounded_reach_matrix(graph: Digraph, max_len: int) -> np.ndarray:
    """R[u, v] iff a path of at most ``max_len`` edges leads from u to v."""
    n = graph.num_vertices
    a = graph.adjacency_matrix().astype(np.int64)
    r = np.eye(n, dtype=np.int64)
    for _ in range(max_len):
        r = ((r + r @ a) > 0).astype(np.int64)
    return r > 0


# ---------------------------------------------------------------------------
# {0,1} LP

def lp_row_clauses(row, bound: Fraction):
    """Clauses forbidding every {0,1} assignment of the row's support that violates it.

    Returns ``None`` for an empty support with 0 < b (unsatisfiable row).
    """
    cols = [c for c, _ in row]
    clauses = []
    for values in itertools.product((0, 1), repeat=len(cols)):
        lhs = sum((a * x for (_, a), x in zip(row, values)), Fraction(0))
        if lhs < bound:
            if not cols:
                return None
            clauses.append(tuple(c if x == 0 else -c for c, x in zip(cols, values)))
    return clauses


def lp_to_clauses(lp: LpSystem):
    """All row clauses over variables 1..num_cols, or ``None`` if an empty row fails."""
    clauses = []
    for row, bound in zip(lp.rows, lp.bounds):
        cl = lp_row_clauses(row, bound)
        if cl is None:
            return None
        clauses += cl
    return clauses


def solve_lp(lp: LpSystem) -> LpResult:
    """Feasibility through 2SAT; the witness is the lexicographically smallest
    feasible vector, fixing columns to 0 greedily while satisfiability lasts.
    """
    clauses = lp_to_clauses(lp)
    if clauses is None or not solve_2sat(Cnf2Formula(lp.num_cols, clauses)).satisfiable:
        return LpResult(False)
    x = []
    for c in range(1, lp.num_cols + 1):
        trial = clauses + [(-c,)]
        if solve_2sat(Cnf2Formula(lp.num_cols, trial)).satisfiable:
            clauses, bit = trial, 0
        else:
            clauses, bit = clauses + [(c,)], 1
        x.append(bit)
    return LpResult(True, tuple(x))


def brute_lp(lp: LpSystem) -> LpResult:
    """Exhaustive over {0,1}^n in lexicographic order, exact integer arithmetic."""
    n = lp.num_cols
    if n > BRUTE_LP_MAX_COLS:
        raise ValueError(f"brute_lp limited to {BRUTE_LP_MAX_COLS} columns, got {n}")
    a, b = lp.to_arrays()
    total = 1 << n
    chunk = 1 << _CHUNK_BITS
    for start in range(0, total, chunk):
        block = _assignment_block(n, start, min(total, start + chunk)).astype(np.int64)
        ok = np.all(block @ a.T >= b, axis=1) if lp.num_rows else np.ones(len(block), bool)
        hits = np.flatnonzero(ok)
        if hits.size:
            return LpResult(True, tuple(int(v) for v in block[hits[0]]))
    return LpResult(False)


# ---------------------------------------------------------------------------
# Search-1NFA

def search_1nfa(nfa: NfaSpec) -> Optional[tuple]:
    """Lexicographically smallest word of length n accepted (by prefix) or None.

    A backward layer pass marks (step, state) pairs from which acceptance is
    still possible; the forward pass then picks the smallest viable symbol
    and pads with symbol 0 once a final state is reached.
    """
    n = nfa.length
    states = range(1, nfa.num_states + 1)
    good = [frozenset()] * (n + 1)
    good[n] = frozenset(nfa.finals)
    for j in range(n - 1, -1, -1):
        nxt = good[j + 1]
        good[j] = frozenset(
            q for q in states
            if q in nfa.finals or any(p in nxt for a in range(nfa.alphabet_size) for p in nfa.delta(q, a))
        )
    if nfa.initial not in good[0]:
        return None
    word = []
    current = frozenset([nfa.initial])
    for j in range(n):
        if current & nfa.finals:
            word += [0] * (n - j)
            break
        for a in range(nfa.alphabet_size):
            succ = nfa.step(current, a)
            if succ & good[j + 1]:
                word.append(a)
                current = succ
                break
    return tuple(word)


def brute_1nfa(nfa: NfaSpec) -> Optional[tuple]:
    for word in itertools.product(range(nfa.alphabet_size), repeat=nfa.length):
        if nfa.accepts(word):
            return word
    return None


# ---------------------------------------------------------------------------
# Search-UOCK

def search_uock(instance: UockInstance) -> Optional[tuple]:
    """Lexicographically smallest increasing index sequence whose pieces spell the target."""
    problems = instance.uniqueness_violations()
    if problems:
        raise ValueError("uniqueness precondition fails: " + "; ".join(problems))
    w, pieces = instance.target, instance.pieces
    size, n = len(w), len(pieces)
    fits = [[w.startswith(piece, p) for piece in pieces] for p in range(size + 1)]
    # done[p][i]: from position p, using indices >= i+1 (0-based i), w[p:] can be finished
    done = [[False] * (n + 1) for _ in range(size + 1)]
    for p in range(size, -1, -1):
        done[p][n] = p == size
        for i in range(n - 1, -1, -1):
            q = p + len(pieces[i])
            done[p][i] = done[p][i + 1] or (fits[p][i] and done[q][i + 1])
    seq, p, i = [], 0, 0
    while not seq or p < size:
        j = next((j for j in range(i, n) if fits[p][j] and done[p + len(pieces[j])][j + 1]), None)
        if j is None:
            return None
        seq.append(j + 1)
        p, i = p + len(pieces[j]), j + 1
    return tuple(seq)


def uock_concat(instance: UockInstance, seq) -> str:
    return "".join(instance.pieces[i - 1] for i in seq)


def brute_uock(instance: UockInstance) -> Optional[tuple]:
    n = len(instance.pieces)
    if n > BRUTE_UOCK_MAX_PIECES:
        raise ValueError(f"brute_uock limited to {BRUTE_UOCK_MAX_PIECES} pieces, got {n}")
    best = None
    for k in range(1, n + 1):
        for seq in itertools.combinations(range(1, n + 1), k):
            if uock_concat(instance, seq) == instance.target and (best is None or seq < best):
                best = seq
    return best


# ---------------------------------------------------------------------------
# Max-HPP

def solve_maxhpp(instance: HppInstance) -> OptResult:
    """O(d·N²) dynamic program; ties go to the smallest next index.

    ``rest[r][i]`` is the best weight of r further steps starting at i, so
    walking forward from the start and taking the first argmax yields the
    lexicographically smallest optimal sequence.
    """
    a = instance.array
    d = instance.length
    rest = [np.zeros(instance.size, dtype=np.int64)]
    for _ in range(d - 1):
        rest.append((a + rest[-1][None, :]).max(axis=1))
    seq = [instance.start]
    for r in range(d - 1, 0, -1):
        i = seq[-1] - 1
        seq.append(int(np.argmax(a[i] + rest[r - 1])) + 1)
    return OptResult(int(rest[d - 1][instance.start - 1]), tuple(seq))


def brute_maxhpp(instance: HppInstance) -> OptResult:
    best = None
    for tail in itertools.product(range(1, instance.size + 1), repeat=instance.length - 1):
        seq = (instance.start, *tail)
        value = instance.measure(seq)
        if best is None or value > best.value:
            best = OptResult(value, seq)
    return best


def perf_ratio(measured: int, optimal: int) -> Fraction:
    if measured <= 0 or optimal <= 0:
        raise ValueError("performance ratio needs positive measures")
    return max(Fraction(optimal, measured), Fraction(measured, optimal))
