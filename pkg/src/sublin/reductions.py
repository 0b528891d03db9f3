"""Reductions between the parameterized problems, with size-bound contracts.

A reduction declares one or more ``SizeBound`` contracts
m2(f(x)) <= k * m1(x)**e + k.  Contracts with e = 1 are *short*.  The
verification harness runs a reduction over a domain of instances and
compares answers (through the declared answer map) and sizes against the
declarations.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .instances import (
    Cnf2Formula,
    Digraph,
    HppInstance,
    LpSystem,
    NfaSpec,
    UockInstance,
    gen_random,
    normalize_cnf,
    serialize,
    size_param,
    validate,
)
from .solvers import (
    brute_2sat,
    brute_lp,
    implication_edges,
    lit_vertex,
    lp_row_clauses,
    reach_closure,
    reach_decide,
    search_1nfa,
    search_uock,
    solve_2sat,
    solve_maxhpp,
)

MANY_ONE = "many_one"
TURING = "turing"
IDENTITY = "identity"
COMPLEMENT = "complement"

# problem families; a family listed under another is a restriction of it
SUBFAMILY = {"2sat3": "2sat", "3dstcon": "dstcon", "lp23": "lp"}


@dataclass(frozen=True)
class SizeBound:
    source_kind: str
    target_kind: str
    k: int
    e: int = 1

    @property
    def short(self) -> bool:
        return self.e == 1

    def limit(self, m1: int) -> int:
        return self.k * m1**self.e + self.k

    def holds(self, m1: int, m2: int) -> bool:
        return m2 <= self.limit(m1)

    def compose(self, after: "SizeBound") -> "SizeBound":
        """Bound for applying ``self`` and then ``after``.

        With m2 <= k1*m1^e1 + k1 and m3 <= k2*m2^e2 + k2: for e2 = 1 this
        gives k = k1*k2 + k2, e = e1; otherwise (k1*m1^e1 + k1)^e2 <=
        (2*k1)^e2 * m1^(e1*e2) for m1 >= 1, so k = k2*(2*k1)^e2 + k2.
        """
        if self.target_kind != after.source_kind:
            raise ValueError(f"cannot chain {self.target_kind} into {after.source_kind}")
        if after.e == 1:
            k = self.k * after.k + after.k
        else:
            k = after.k * (2 * self.k) ** after.e + after.k
        return SizeBound(self.source_kind, after.target_kind, k, self.e * after.e)


@dataclass(frozen=True)
class ReductionDecl:
    name: str
    source: str
    target: str
    kind: str = MANY_ONE
    answer_map: str = IDENTITY
    bounds: tuple = ()

    @property
    def short(self) -> bool:
        return all(b.short for b in self.bounds)

    @property
    def k(self) -> int:
        return self.bounds[0].k

    @property
    def e(self) -> int:
        return self.bounds[0].e

    def map_answer(self, answer: bool) -> bool:
        return (not answer) if self.answer_map == COMPLEMENT else answer

    def sabotaged(self) -> "ReductionDecl":
        """Negative control: every bound constant set to 0."""
        return replace(self, bounds=tuple(replace(b, k=0) for b in self.bounds))


@dataclass(frozen=True)
class Reduction:
    decl: ReductionDecl
    fn: Callable

    def __call__(self, instance):
        return self.fn(instance)

    @property
    def name(self):
        return self.decl.name


def _family_fits(produced: str, expected: str) -> bool:
    while produced is not None:
        if produced == expected:
            return True
        produced = SUBFAMILY.get(produced)
    return False


def compose(first: Reduction, second: Reduction) -> Reduction:
    """Apply ``first`` and then ``second``; many-one reductions only."""
    a, b = first.decl, second.decl
    if a.kind != MANY_ONE or b.kind != MANY_ONE:
        raise ValueError("only many-one reductions compose")
    if not _family_fits(a.target, b.source):
        raise ValueError(f"family mismatch: {a.name} produces {a.target}, {b.name} expects {b.source}")
    bounds = tuple(
        b1.compose(b2) for b1 in a.bounds for b2 in b.bounds if b1.target_kind == b2.source_kind
    )
    if not bounds:
        raise ValueError(f"no size parameter links {a.name} to {b.name}")
    answer = IDENTITY if (a.answer_map == COMPLEMENT) == (b.answer_map == COMPLEMENT) else COMPLEMENT
    decl = ReductionDecl(f"{b.name}∘{a.name}", a.source, b.target, MANY_ONE, answer, bounds)
    return Reduction(decl, lambda x: second.fn(first.fn(x)))


# ---------------------------------------------------------------------------
# 2SAT_k -> 2SAT_3

def split_occurrences(formula: Cnf2Formula) -> Cnf2Formula:
    """Give every occurrence of a variable its own copy, tied by an implication cycle.

    A variable occurring c >= 2 times becomes copies v1..vc with clauses
    (¬v_i ∨ v_{i+1}) and (¬v_c ∨ v_1); each copy then occurs exactly three
    times.  The input is normalized first.
    """
    f = normalize_cnf(formula)
    occ = f.occurrences
    first = {}
    nxt = 1
    for v in range(1, f.num_vars + 1):
        first[v] = nxt
        nxt += max(occ[v], 1)
    used = dict.fromkeys(range(1, f.num_vars + 1), 0)
    clauses = []
    for clause in f.clauses:
        out = []
        for lit in clause:
            v = abs(lit)
            copy = first[v] + used[v]
            used[v] += 1
            out.append(copy if lit > 0 else -copy)
        clauses.append(tuple(out))
    for v in range(1, f.num_vars + 1):
        c = occ[v]
        if c >= 2:
            base = first[v]
            for i in range(c):
                clauses.append((-(base + i), base + (i + 1) % c))
    return Cnf2Formula(nxt - 1, clauses)


# ---------------------------------------------------------------------------
# 2SAT_3 -> 3DSTCON queries (Turing)

def implication_digraph(formula: Cnf2Formula, source=1, target=1) -> Digraph:
    edges = sorted(set(implication_edges(formula)))
    return Digraph(2 * formula.num_vars, edges, source, target)


@dataclass(frozen=True)
class QueryPlan:
    """Reachability queries on one implication graph.

    The formula is unsatisfiable iff for some variable both of its queries
    (v ⇝ ¬v and ¬v ⇝ v) are answered yes.
    """

    graph: Digraph
    queries: tuple  # (var, source vertex, target vertex)

    def query_graph(self, i: int) -> Digraph:
        _, s, t = self.queries[i]
        return replace(self.graph, source=s, target=t)

    def decide(self, reach: Callable[[Digraph], bool]) -> bool:
        answers = {}
        for i, (v, _, _) in enumerate(self.queries):
            answers.setdefault(v, []).append(reach(self.query_graph(i)))
        return not any(all(a) for a in answers.values())

    def size(self, kind) -> int:
        return max((size_param(self.query_graph(i), kind) for i in range(len(self.queries))), default=0)


def twosat3_to_reach_queries(formula: Cnf2Formula) -> QueryPlan:
    if formula.max_occurrence() > 3:
        raise ValueError("input is not 2SAT_3 (some variable occurs more than 3 times)")
    graph = implication_digraph(formula)
    queries = []
    for v in range(1, formula.num_vars + 1):
        queries.append((v, lit_vertex(v), lit_vertex(-v)))
        queries.append((v, lit_vertex(-v), lit_vertex(v)))
    return QueryPlan(graph, tuple(queries))


# ---------------------------------------------------------------------------
# 3DSTCON -> 2SAT_3 (complement)

def _require_degree(graph: Digraph, cap=3):
    problems = validate(graph, degree_cap=cap)
    if problems:
        raise ValueError("degree bound violated: " + "; ".join(problems))


def reach_to_2sat3(graph: Digraph, split: bool = True) -> Cnf2Formula:
    """Variable per vertex, (¬u ∨ v) per edge, units (s) and (¬t).

    Satisfiable iff t is NOT reachable from s: a model must be closed under
    edges starting from s and must falsify t.
    """
    _require_degree(graph)
    clauses = [(-u, v) for u, v in graph.edges]
    clauses += [(graph.source,), (-graph.target,)]
    f = Cnf2Formula(graph.num_vertices, clauses)
    return split_occurrences(f) if split else f


# ---------------------------------------------------------------------------
# degree reduction

def degree_reduce(graph: Digraph) -> Digraph:
    """Equivalent digraph of maximum degree 3.

    A vertex of degree d >= 4 becomes a chain c1 -> ... -> c_{d-2}; the
    end nodes take two external edges and inner nodes one, in-edges in
    the earliest slots and out-edges in the latest, so every entry point
    reaches every exit.  Isolated vertices other than s and t are dropped.
    """
    n = graph.num_vertices
    s, t = graph.source, graph.target
    keep = [v for v in range(1, n + 1) if graph.degree(v) > 0 or v in (s, t)]
    in_slot = {}  # (edge index) -> node receiving the edge
    out_slot = {}
    entry, exit_ = {}, {}
    chain_edges = []
    nxt = 1
    in_edges = {v: [] for v in keep}
    out_edges = {v: [] for v in keep}
    for idx, (u, v) in enumerate(graph.edges):
        out_edges[u].append(idx)
        in_edges[v].append(idx)
    for v in keep:
        d = graph.degree(v)
        if d <= 3:
            for idx in in_edges[v]:
                in_slot[idx] = nxt
            for idx in out_edges[v]:
                out_slot[idx] = nxt
            entry[v] = exit_[v] = nxt
            nxt += 1
            continue
        length = d - 2
        nodes = list(range(nxt, nxt + length))
        nxt += length
        chain_edges += list(zip(nodes, nodes[1:]))
        slots = [nodes[0], nodes[0], *nodes[1:-1], nodes[-1], nodes[-1]]
        for idx, node in zip(in_edges[v], slots):
            in_slot[idx] = node
        for idx, node in zip(out_edges[v], slots[len(in_edges[v]):]):
            out_slot[idx] = node
        entry[v], exit_[v] = nodes[0], nodes[-1]
    edges = [(out_slot[i], in_slot[i]) for i in range(len(graph.edges))] + chain_edges
    return Digraph(nxt - 1, sorted(edges), entry[s], exit_[t])


# ---------------------------------------------------------------------------
# 2SAT_3 <-> LP_{2,3}

def twosat3_to_lp(formula: Cnf2Formula) -> LpSystem:
    """(a ∨ b) becomes sign(a)x_a + sign(b)x_b >= 1 - #negated literals."""
    if formula.max_occurrence() > 3:
        raise ValueError("input is not 2SAT_3 (some variable occurs more than 3 times)")
    rows, bounds = [], []
    for clause in formula.clauses:
        coef = {}
        for lit in clause:
            coef[abs(lit)] = coef.get(abs(lit), 0) + (1 if lit > 0 else -1)
        rows.append([(c, a) for c, a in coef.items() if a])
        bounds.append(1 - sum(1 for lit in clause if lit < 0))
    return LpSystem(len(rows), formula.num_vars, rows, bounds)


def lp_to_2sat3(lp: LpSystem, split: bool = True) -> Cnf2Formula:
    """Forbid each violating {0,1} assignment of a row's support, then split.

    A row no assignment satisfies contributes (x ∨ x)-style contradiction
    (x)∧(¬x) on one of its columns (column 1 for an empty row).
    """
    clauses = []
    for row, bound in zip(lp.rows, lp.bounds):
        forbidden = lp_row_clauses(row, bound)
        if forbidden is None or len(forbidden) == 2 ** len(row):
            c = row[0][0] if row else 1
            clauses += [(c,), (-c,)]
        else:
            clauses += forbidden
    f = Cnf2Formula(max(lp.num_cols, 1 if clauses else 0), clauses)
    return split_occurrences(f) if split else f


# ---------------------------------------------------------------------------
# layered graphs and the search / optimization constructions

def layer_vertex(n: int, i: int, j: int) -> int:
    """⟨i, j⟩ = (i - 1) n + j."""
    return (i - 1) * n + j


def layered_square(graph: Digraph) -> Digraph:
    """n layers of copies of V; edges go from layer i to i+1 along E.

    Every copy of t also steps to the next copy of t, so a path of fewer
    than n - 1 edges can wait at t until the last layer.
    """
    n = graph.num_vertices
    t = graph.target
    layer_edges = set(graph.edges) | {(t, t)}
    edges = [
        (layer_vertex(n, i, u), layer_vertex(n, i + 1, v))
        for i in range(1, n)
        for u, v in sorted(layer_edges)
    ]
    return Digraph(n * n, sorted(edges), layer_vertex(n, 1, graph.source), layer_vertex(n, n, t))


def dstcon_to_1nfa(graph: Digraph) -> NfaSpec:
    """States = vertices; symbol i follows the i-th out-edge (ascending order)."""
    _require_degree(graph)
    trans = [
        (v, i, w)
        for v in range(1, graph.num_vertices + 1)
        for i, w in enumerate(graph.out_neighbors(v), 1)
    ]
    return NfaSpec(graph.num_vertices, 4, graph.num_vertices, graph.source, frozenset([graph.target]), trans)


def token(i: int, width: int) -> str:
    return format(i, f"0{width}b") + "#"


def dstcon_to_uock(graph: Digraph) -> UockInstance:
    """Target spells tokens s'+1 .. t' of the layered graph; an edge (i, j)
    becomes the piece of tokens i+1 .. j.  Fixed-width tokens make every
    piece occur at most once.
    """
    _require_degree(graph)
    layered = layered_square(graph)
    big_n = layered.num_vertices
    width = index_bits(big_n + 1)
    s, t = layered.source, layered.target
    if s == t:
        w = token(t, width)
        return UockInstance(w, (w,))
    target = "".join(token(x, width) for x in range(s + 1, t + 1))
    pieces = tuple(
        "".join(token(x, width) for x in range(i + 1, j + 1))
        for i, j in sorted(layered.edges)
        if i >= s and j <= t
    )
    return UockInstance(target, pieces)


def index_bits(domain_size: int) -> int:
    return max(domain_size - 1, 0).bit_length()


def dstcon_to_maxhpp(graph: Digraph) -> HppInstance:
    """Weight n on layered edges and on the t' self-loop, 1 elsewhere; d = n²."""
    _require_degree(graph)
    n = graph.num_vertices
    layered = layered_square(graph)
    big_n = layered.num_vertices
    matrix = [[1] * big_n for _ in range(big_n)]
    for u, v in layered.edges:
        matrix[u - 1][v - 1] = n
    t = layered.target
    matrix[t - 1][t - 1] = n
    return HppInstance(big_n, matrix, big_n, layered.source)


def hpp_full_weight(instance: HppInstance) -> bool:
    """Does the optimum reach (N - 1) * sqrt(N), i.e. every step has the edge weight?"""
    n = math.isqrt(instance.size)
    return solve_maxhpp(instance).value == (instance.size - 1) * n


# ---------------------------------------------------------------------------
# declarations

def _b(src, tgt, k, e=1):
    return SizeBound(src, tgt, k, e)


R1 = Reduction(
    ReductionDecl("split3", "2sat", "2sat3", bounds=(_b("m_cls", "m_cls", 4), _b("m_cls", "m_vbl", 2))),
    split_occurrences,
)
R2 = Reduction(
    ReductionDecl("2sat3-to-reach", "2sat3", "3dstcon", TURING, bounds=(_b("m_vbl", "m_ver", 2),)),
    twosat3_to_reach_queries,
)
R3 = Reduction(
    ReductionDecl("reach-to-2sat3", "3dstcon", "2sat3", answer_map=COMPLEMENT, bounds=(_b("m_ver", "m_vbl", 5),)),
    reach_to_2sat3,
)
R4 = Reduction(
    ReductionDecl("2sat3-to-lp", "2sat3", "lp23", bounds=(_b("m_vbl", "m_col", 1), _b("m_cls", "m_row", 1))),
    twosat3_to_lp,
)
R5 = Reduction(
    ReductionDecl("lp-to-2sat3", "lp23", "2sat3", bounds=(_b("m_col", "m_vbl", 3 * 3 + 1), _b("m_col", "m_cls", 27))),
    lp_to_2sat3,
)
R6 = Reduction(
    ReductionDecl("to-1nfa", "3dstcon", "search-1nfa", bounds=(_b("m_ver", "m_nfa", 4, 2),)),
    dstcon_to_1nfa,
)
R7 = Reduction(
    ReductionDecl("to-uock", "3dstcon", "search-uock", bounds=(_b("m_ver", "m_elm", 3, 2),)),
    dstcon_to_uock,
)
R8 = Reduction(
    ReductionDecl("to-maxhpp", "3dstcon", "max-hpp", bounds=(_b("m_ver", "m_col", 1, 2),)),
    dstcon_to_maxhpp,
)
R9 = Reduction(
    ReductionDecl("layer", "dstcon", "dstcon", bounds=(_b("m_ver", "m_ver", 1, 2),)),
    layered_square,
)
R10 = Reduction(
    ReductionDecl("degree3", "dstcon", "3dstcon", bounds=(_b("m_edg", "m_ver", 2), _b("m_edg", "m_edg", 3))),
    degree_reduce,
)

REDUCTIONS = {r.name: r for r in (R1, R2, R3, R4, R5, R6, R7, R8, R9, R10)}
# names accepted by the file-to-file ``reduce`` command (many-one only)
FILE_REDUCTIONS = [name for name, r in REDUCTIONS.items() if r.decl.kind == MANY_ONE]


# ---------------------------------------------------------------------------
# verification harness

@dataclass
class VerifyReport:
    name: str
    instances_checked: int = 0
    answer_mismatches: list = field(default_factory=list)
    size_bound_violations: list = field(default_factory=list)
    contract_violations: list = field(default_factory=list)
    max_ratio: Optional[Fraction] = None
    counters: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not (self.answer_mismatches or self.size_bound_violations or self.contract_violations)

    def merge(self, other: "VerifyReport") -> "VerifyReport":
        ratios = [r for r in (self.max_ratio, other.max_ratio) if r is not None]
        counters = dict(self.counters)
        for key, val in other.counters.items():
            counters[key] = counters.get(key, 0) + val
        return VerifyReport(
            self.name,
            self.instances_checked + other.instances_checked,
            self.answer_mismatches + other.answer_mismatches,
            self.size_bound_violations + other.size_bound_violations,
            self.contract_violations + other.contract_violations,
            max(ratios) if ratios else None,
            counters,
        )

    def to_dict(self) -> dict:
        ratio = self.max_ratio
        return {
            "name": self.name,
            "passed": self.passed,
            "instances_checked": self.instances_checked,
            "answer_mismatches": self.answer_mismatches,
            "size_bound_violations": self.size_bound_violations,
            "contract_violations": self.contract_violations,
            "max_ratio": None if ratio is None else f"{ratio.numerator}/{ratio.denominator}",
            "counters": dict(sorted(self.counters.items())),
        }


def _short_text(instance, limit=400):
    if isinstance(instance, QueryPlan):
        instance = instance.graph
    text = serialize(instance)
    return text if len(text) <= limit else text[:limit] + "..."


def verify_reduction(
    decl: ReductionDecl,
    fn: Callable,
    instances: Iterable,
    oracle_src: Callable,
    oracle_tgt: Callable,
    *,
    measure: Callable = None,
    extra_check: Callable = None,
    max_records: int = 20,
) -> VerifyReport:
    """Check answers and declared size bounds of ``fn`` on every instance.

    ``extra_check(x, y, counters)`` may return a list of contract
    violations for the pair (input, output).
    """
    if measure is None:
        measure = lambda y, kind: y.size(kind) if isinstance(y, QueryPlan) else size_param(y, kind)
    report = VerifyReport(decl.name)
    for index, x in enumerate(instances):
        y = fn(x)
        report.instances_checked += 1
        expected = decl.map_answer(bool(oracle_src(x)))
        got = bool(oracle_tgt(y))
        if expected != got and len(report.answer_mismatches) < max_records:
            report.answer_mismatches.append(
                {"index": index, "expected": expected, "got": got, "instance": _short_text(x)}
            )
        for i, bound in enumerate(decl.bounds):
            m1 = size_param(x, bound.source_kind)
            m2 = measure(y, bound.target_kind)
            if not bound.holds(m1, m2) and len(report.size_bound_violations) < max_records:
                report.size_bound_violations.append(
                    {
                        "index": index,
                        "bound": f"{bound.target_kind} <= {bound.k}*{bound.source_kind}^{bound.e} + {bound.k}",
                        "m1": m1,
                        "m2": m2,
                    }
                )
            if i == 0 and m1 > 0:
                ratio = Fraction(m2, m1**bound.e)
                if report.max_ratio is None or ratio > report.max_ratio:
                    report.max_ratio = ratio
        if extra_check is not None:
            for problem in extra_check(x, y, report.counters):
                if len(report.contract_violations) < max_records:
                    report.contract_violations.append({"index": index, "problem": problem})
    return report


# ---------------------------------------------------------------------------
# oracles and instance domains for the catalog

BRUTE_LIMIT = 16


def sat_oracle(formula: Cnf2Formula) -> bool:
    """Brute force when small, implication-graph SCC otherwise."""
    if formula.num_vars <= BRUTE_LIMIT:
        return brute_2sat(formula).satisfiable
    return solve_2sat(formula).satisfiable


def lp_oracle(lp: LpSystem) -> bool:
    return brute_lp(lp).feasible


def nfa_oracle(nfa: NfaSpec) -> bool:
    return search_1nfa(nfa) is not None


def uock_oracle(instance: UockInstance) -> bool:
    return search_uock(instance) is not None


def clause_universe(n: int) -> list:
    lits = [l for v in range(1, n + 1) for l in (v, -v)]
    return [(l,) for l in lits] + list(itertools.combinations(lits, 2))


def exhaustive_formulas(max_vars: int, max_clauses: int = 4):
    """Every set of at most ``max_clauses`` clauses over n <= max_vars variables."""
    for n in range(max_vars + 1):
        universe = clause_universe(n)
        for k in range(max_clauses + 1):
            for clauses in itertools.combinations(universe, k):
                yield Cnf2Formula(n, clauses)


def exhaustive_digraphs(max_vertices: int, full_up_to: int = 3):
    """All digraphs up to ``full_up_to`` vertices (self-loops, every s and t);
    larger sizes enumerate loop-free edge sets with s = 1, t = n, which covers
    every s != t configuration up to relabelling.
    """
    for n in range(1, max_vertices + 1):
        if n <= full_up_to:
            pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1)]
            terminals = [(s, t) for s in range(1, n + 1) for t in range(1, n + 1)]
        else:
            pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
            terminals = [(1, n)]
        for mask in range(1 << len(pairs)):
            edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
            for s, t in terminals:
                yield Digraph(n, edges, s, t)


def exhaustive_lps(max_cols: int = 2, max_rows: int = 2):
    universe = []
    bounds = range(-2, 3)
    for n_support in range(3):
        for support in itertools.combinations(range(1, max_cols + 1), n_support):
            for coefs in itertools.product((-1, 1), repeat=n_support):
                for b in bounds:
                    universe.append((tuple(zip(support, coefs)), b))
    for n in range(1, max_cols + 1):
        rows_n = [r for r in universe if all(c <= n for c, _ in r[0])]
        for k in range(max_rows + 1):
            for rows in itertools.combinations(rows_n, k):
                yield LpSystem(k, n, [r for r, _ in rows], [b for _, b in rows])


def _rng(seed, name):
    return random.Random(f"{seed}:{name}")


def random_formulas(count, seed, name, max_vars=10, cap=None):
    rng = _rng(seed, name)
    for _ in range(count):
        n = rng.randint(1, max_vars)
        limit = 3 * n if cap else 2 * n
        m = rng.randint(0, min(limit, 14))
        yield gen_random("2sat", {"n": n, "m": m, "k": cap, "unit_prob": 0.15}, rng.randrange(2**32))


def random_digraphs(count, seed, name, max_vertices=12, degree_cap=3, dense=False):
    rng = _rng(seed, name)
    for _ in range(count):
        n = rng.randint(1, max_vertices)
        if dense:
            m = rng.randint(0, n * (n - 1))
        else:
            cap = 4 if degree_cap is None else degree_cap
            m = rng.randint(0, min((cap * n) // 2, n * (n - 1)))
        yield gen_random("dstcon", {"n": n, "m": m, "degree_cap": degree_cap}, rng.randrange(2**32))


def random_lps(count, seed, name, max_cols=12, k=3):
    rng = _rng(seed, name)
    for _ in range(count):
        n = rng.randint(1, max_cols)
        rows = rng.randint(0, min(k * n, 2 * n))
        yield gen_random("lp", {"rows": rows, "cols": n, "k": k}, rng.randrange(2**32))


def _occ3_check(x, y, counters):
    counters["outputs_checked_2sat3"] = counters.get("outputs_checked_2sat3", 0) + 1
    if y.max_occurrence() > 3:
        return [f"output occurrence {y.max_occurrence()} > 3"]
    return []


def _lp_check(x, y, counters):
    problems = validate(y, column_cap=3)
    res = solve_2sat(x)
    if res.satisfiable:
        vec = tuple(res.assignment[v] for v in range(1, x.num_vars + 1))
        counters["witnesses_transferred"] = counters.get("witnesses_transferred", 0) + 1
        if not y.is_satisfied_by(vec):
            problems.append("satisfying assignment is not a feasible LP vector")
    return problems


def _degree_check(x, y, counters):
    return validate(y, degree_cap=3)


def _layer_check(x, y, counters):
    bad = [(u, v) for u, v in y.edges if not u < v]
    return [f"edge {bad[0]} breaks topological order"] if bad else []


def _nfa_check(x, y, counters):
    if y.initial in y.finals:
        counters["accepts_at_step_0"] = counters.get("accepts_at_step_0", 0) + 1
    if y.m_nfa != 4 * x.num_vertices**2:
        return [f"m_nfa={y.m_nfa} != 4*m_ver^2"]
    word = search_1nfa(y)
    if word is not None and not y.accepts(word):
        return ["returned word is not accepted"]
    return []


def _uock_check(x, y, counters):
    counters["uniqueness_checked"] = counters.get("uniqueness_checked", 0) + 1
    problems = validate(y)
    if problems:
        counters["uniqueness_violations"] = counters.get("uniqueness_violations", 0) + 1
    return problems


def _hpp_check(x, y, counters):
    if y.size != x.num_vertices**2:
        return [f"m_col={y.size} != m_ver^2"]
    return []


@dataclass(frozen=True)
class CatalogEntry:
    reduction: Reduction
    exhaustive: Callable  # (formula_vars, graph_vertices) -> iterable
    random: Callable  # (count, seed) -> iterable
    oracle_src: Callable
    oracle_tgt: Callable
    extra_check: Optional[Callable] = None


def _deg3(graphs):
    return (g for g in graphs if g.max_degree() <= 3)


def _occ3(formulas):
    return (f for f in formulas if f.max_occurrence() <= 3)


CATALOG = {
    "split3": CatalogEntry(
        R1,
        lambda fv, gv: exhaustive_formulas(fv),
        lambda c, s: random_formulas(c, s, "split3", 10),
        sat_oracle,
        sat_oracle,
        _occ3_check,
    ),
    "2sat3-to-reach": CatalogEntry(
        R2,
        lambda fv, gv: _occ3(exhaustive_formulas(fv)),
        lambda c, s: random_formulas(c, s, "2sat3-to-reach", 12, cap=3),
        sat_oracle,
        lambda plan: plan.decide(reach_closure),
    ),
    "reach-to-2sat3": CatalogEntry(
        R3,
        lambda fv, gv: _deg3(exhaustive_digraphs(gv)),
        lambda c, s: random_digraphs(c, s, "reach-to-2sat3", 12),
        reach_closure,
        sat_oracle,
        _occ3_check,
    ),
    "2sat3-to-lp": CatalogEntry(
        R4,
        lambda fv, gv: _occ3(exhaustive_formulas(fv)),
        lambda c, s: random_formulas(c, s, "2sat3-to-lp", 12, cap=3),
        sat_oracle,
        lp_oracle,
        _lp_check,
    ),
    "lp-to-2sat3": CatalogEntry(
        R5,
        lambda fv, gv: exhaustive_lps(2, 2),
        lambda c, s: random_lps(c, s, "lp-to-2sat3", 12),
        lp_oracle,
        sat_oracle,
        _occ3_check,
    ),
    "degree3": CatalogEntry(
        R10,
        lambda fv, gv: exhaustive_digraphs(gv),
        lambda c, s: random_digraphs(c, s, "degree3", 15, degree_cap=None, dense=True),
        reach_closure,
        reach_decide,
        _degree_check,
    ),
    "layer": CatalogEntry(
        R9,
        lambda fv, gv: exhaustive_digraphs(gv),
        lambda c, s: random_digraphs(c, s, "layer", 8, degree_cap=None),
        reach_closure,
        reach_decide,
        _layer_check,
    ),
    "to-1nfa": CatalogEntry(
        R6,
        lambda fv, gv: _deg3(exhaustive_digraphs(gv)),
        lambda c, s: random_digraphs(c, s, "to-1nfa", 10),
        reach_closure,
        nfa_oracle,
        _nfa_check,
    ),
    "to-uock": CatalogEntry(
        R7,
        lambda fv, gv: _deg3(exhaustive_digraphs(gv)),
        lambda c, s: random_digraphs(c, s, "to-uock", 5),
        reach_closure,
        uock_oracle,
        _uock_check,
    ),
    "to-maxhpp": CatalogEntry(
        R8,
        lambda fv, gv: _deg3(exhaustive_digraphs(gv)),
        lambda c, s: random_digraphs(c, s, "to-maxhpp", 5),
        reach_closure,
        hpp_full_weight,
        _hpp_check,
    ),
}


def verify_catalog_entry(
    name: str,
    *,
    formula_vars: int = 3,
    graph_vertices: int = 4,
    random_count: int = 200,
    seed: int = 1,
    sabotage: bool = False,
    exhaustive: bool = True,
) -> VerifyReport:
    entry = CATALOG[name]
    decl = entry.reduction.decl.sabotaged() if sabotage else entry.reduction.decl
    sources = []
    if exhaustive:
        sources.append(entry.exhaustive(formula_vars, graph_vertices))
    if random_count:
        sources.append(entry.random(random_count, seed))
    return verify_reduction(
        decl,
        entry.reduction.fn,
        itertools.chain(*sources),
        entry.oracle_src,
        entry.oracle_tgt,
        extra_check=entry.extra_check,
    )
