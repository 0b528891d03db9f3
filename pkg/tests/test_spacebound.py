import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sublin.instances import Cnf2Formula, Digraph, gen_random
from sublin.reductions import exhaustive_formulas
from sublin.solvers import bounded_reach_matrix, lit_vertex, reach_decide, solve_2sat
from sublin.spacebound import (
    BUDGET_ENV,
    SAVITCH_C,
    DigraphOracle,
    MeteredWorkspace,
    StepBudgetExhausted,
    Strategy,
    default_step_budget,
    implication_adjacency,
    index_bits,
    reach_bfs,
    reach_dfs_limited,
    reach_hybrid,
    reach_savitch,
    reach_space,
    savitch_frame_bits,
    twosat_space,
)


def chain(n, s=1, t=None):
    return Digraph(n, [(i, i + 1) for i in range(1, n)], s, n if t is None else t)


def run(fn, graph, *args):
    ws = MeteredWorkspace()
    answer = fn(DigraphOracle(graph), graph.source, graph.target, *args, ws)
    return answer, ws


def random_deg3(n, rng):
    m = rng.randint(0, min(3 * n // 2, n * (n - 1)))
    return gen_random("dstcon", {"n": n, "m": m, "degree_cap": 3}, rng.randrange(2**32))


# -- workspace ---------------------------------------------------------------

def test_index_bits():
    assert [index_bits(d) for d in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


def test_workspace_accounting():
    ws = MeteredWorkspace(budget=5)
    a = ws.alloc(7)
    b = ws.alloc(3)
    assert (ws.live_bits, ws.peak_bits) == (10, 10)
    with pytest.raises(RuntimeError):
        ws.free(a)
    ws.free(b)
    ws.free(a)
    assert (ws.live_bits, ws.peak_bits) == (0, 10)
    ws.tick(5)
    with pytest.raises(StepBudgetExhausted):
        ws.tick()


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 64), max_size=30), st.data())
def test_workspace_invariants(sizes, data):
    ws = MeteredWorkspace()
    stack, peak = [], 0
    for bits in sizes:
        if stack and data.draw(st.booleans()):
            before = ws.live_bits
            bits_freed = stack.pop()
            ws.free(bits_freed)
            assert ws.live_bits == before - bits_freed
        stack.append(ws.alloc(bits))
        assert ws.peak_bits >= ws.live_bits and ws.peak_bits >= peak
        peak = ws.peak_bits
    while stack:
        ws.free(stack.pop())
    assert ws.live_bits == 0


def test_budget_env(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "1234")
    assert default_step_budget() == 1234
    assert MeteredWorkspace().budget == 1234


# -- BFS -----------------------------------------------------------------------

def test_bfs_examples():
    answer, ws = run(reach_bfs, chain(10))
    assert answer and ws.peak_bits >= 10
    assert not run(reach_bfs, Digraph(4, [(1, 2), (3, 4)], 1, 4))[0]


def test_bfs_matches_oracle():
    rng = random.Random(1)
    for _ in range(200):
        g = random_deg3(rng.randint(1, 20), rng)
        answer, ws = run(reach_bfs, g)
        assert answer == reach_decide(g)
        assert ws.peak_bits >= g.num_vertices and ws.live_bits == 0


# -- Savitch -------------------------------------------------------------------

def test_savitch_chain_frames():
    answer, ws = run(reach_savitch, chain(8))
    assert answer
    assert ws.peak_bits <= 4 * savitch_frame_bits(8)


def test_savitch_same_vertex_one_frame():
    answer, ws = run(reach_savitch, Digraph(5, [], 3, 3))
    assert answer and ws.peak_bits == savitch_frame_bits(5)


def test_savitch_exhaustive_five_vertices():
    # all 2^10 subsets of a fixed 10-edge support on 5 vertices
    support = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 3), (3, 5), (5, 1), (2, 4), (4, 2), (5, 3)]
    for mask in range(1 << len(support)):
        edges = [e for i, e in enumerate(support) if mask >> i & 1]
        for s, t in ((1, 5), (5, 1), (2, 5), (3, 1)):
            g = Digraph(5, edges, s, t)
            assert run(reach_savitch, g)[0] == run(reach_bfs, g)[0]


def test_savitch_all_small_digraphs():
    for n in range(1, 4):
        pairs = list(itertools.product(range(1, n + 1), repeat=2))
        for mask in range(1 << len(pairs)):
            edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
            for s, t in itertools.product(range(1, n + 1), repeat=2):
                g = Digraph(n, edges, s, t)
                assert run(reach_savitch, g)[0] == reach_decide(g)


def test_savitch_peak_bound():
    rng = random.Random(4)
    for n in (8, 16, 32):
        limit = SAVITCH_C * (math.ceil(math.log2(n)) + 1) * 3 * math.ceil(math.log2(n))
        for _ in range(5):
            g = random_deg3(n, rng)
            answer, ws = run(reach_savitch, g)
            assert answer == reach_decide(g)
            assert ws.peak_bits <= limit


# -- depth-limited DFS -----------------------------------------------------------

def test_dfs_limited_examples():
    assert run(reach_dfs_limited, chain(5), 4)[0]
    assert not run(reach_dfs_limited, chain(5), 3)[0]
    with pytest.raises(ValueError):
        run(reach_dfs_limited, chain(3), -1)


def test_dfs_limited_matches_bounded_closure():
    rng = random.Random(8)
    for _ in range(150):
        n = rng.randint(1, 12)
        g = gen_random("dstcon", {"n": n, "m": rng.randint(0, min(2 * n, n * (n - 1)))}, rng.randrange(2**32))
        limit = rng.randint(0, n)
        reach = bounded_reach_matrix(g, limit)
        assert run(reach_dfs_limited, g, limit)[0] == bool(reach[g.source - 1, g.target - 1])


def test_dfs_budget_is_reported():
    dense = Digraph(9, [(u, v) for u in range(1, 9) for v in range(1, 9) if u != v], 1, 9)
    ws = MeteredWorkspace(budget=50)
    with pytest.raises(StepBudgetExhausted):
        reach_dfs_limited(DigraphOracle(dense), 1, 9, 8, ws)


# -- hybrid ----------------------------------------------------------------------

def test_hybrid_degenerate_thresholds():
    rng = random.Random(6)
    for _ in range(40):
        g = random_deg3(rng.randint(2, 12), rng)
        n = g.num_vertices
        sav, ws_s = run(reach_savitch, g)
        h1, ws_1 = run(reach_hybrid, g, 1)
        assert h1 == sav
        assert ws_1.peak_bits <= 2 * ws_s.peak_bits
        dfs, ws_d = run(reach_dfs_limited, g, n)
        hn, ws_n = run(reach_hybrid, g, n)
        assert hn == dfs and ws_n.peak_bits == ws_d.peak_bits


def test_hybrid_threshold_range():
    with pytest.raises(ValueError):
        run(reach_hybrid, chain(4), 0)
    with pytest.raises(ValueError):
        run(reach_hybrid, chain(4), 5)


def test_strategy_parse():
    assert Strategy.parse("bfs") == Strategy("bfs")
    assert Strategy.parse("hybrid:4") == Strategy("hybrid", 4)
    assert str(Strategy.parse("hybrid:4")) == "hybrid:4"
    for bad in ("hybrid", "hybrid:0", "dfs", "savitch:2"):
        with pytest.raises(ValueError):
            Strategy.parse(bad)


def test_strategies_agree_random():
    rng = random.Random(12)
    for _ in range(60):
        g = random_deg3(rng.randint(1, 24), rng)
        expected = reach_decide(g)
        for name in ("bfs", "savitch", "hybrid:2", "hybrid:4", "hybrid:8"):
            assert reach_space(g, name, MeteredWorkspace()) == expected, name


def _max_peaks(n, strategies, count, seed):
    rng = random.Random(seed)
    peaks = dict.fromkeys(strategies, 0)
    for _ in range(count):
        g = gen_random("dstcon", {"n": n, "m": n, "degree_cap": 3}, rng.randrange(2**32))
        for name in strategies:
            ws = MeteredWorkspace()
            reach_space(g, name, ws)
            peaks[name] = max(peaks[name], ws.peak_bits)
    return peaks


def test_space_ordering_parts_that_hold():
    for n in (8, 16, 32):
        tau = f"hybrid:{math.isqrt(n)}"
        peaks = _max_peaks(n, ("bfs", "savitch", tau), 6, n)
        assert peaks["bfs"] >= n
        assert peaks[tau] <= peaks["bfs"]
        assert peaks["savitch"] <= SAVITCH_C * (math.ceil(math.log2(n)) + 1) * 3 * math.ceil(math.log2(n))


@pytest.mark.xfail(strict=True, reason="short DFS segments are cheaper than Savitch frames at these sizes")
def test_savitch_below_hybrid_sqrt():
    for n in (8, 16, 32):
        tau = f"hybrid:{math.isqrt(n)}"
        peaks = _max_peaks(n, ("savitch", tau), 6, n)
        assert peaks["savitch"] <= peaks[tau]


# -- implication graph and 2SAT ----------------------------------------------------

def test_implication_adjacency_examples():
    adj = implication_adjacency(Cnf2Formula(2, [(1, 2)]))
    assert adj.n == 4
    assert list(adj.out_edges(lit_vertex(-1))) == [lit_vertex(2)]
    assert list(adj.out_edges(lit_vertex(-2))) == [lit_vertex(1)]
    unit = implication_adjacency(Cnf2Formula(1, [(1,)]))
    assert list(unit.out_edges(lit_vertex(-1))) == [lit_vertex(1)]
    assert list(unit.in_edges(lit_vertex(1))) == [lit_vertex(-1)]


def test_implication_degree_2sat3():
    for seed in range(100):
        f = gen_random("2sat", {"n": 10, "m": 15, "k": 3}, seed)
        adj = implication_adjacency(f)
        assert max(adj.degree(v) for v in range(1, adj.n + 1)) <= 3


def test_implication_matches_edge_list():
    from sublin.solvers import implication_edges

    for seed in range(100):
        f = gen_random("2sat", {"n": 6, "m": 9}, seed)
        adj = implication_adjacency(f)
        edges = sorted(set(implication_edges(f)))
        streamed = sorted({(u, w) for u in range(1, adj.n + 1) for w in adj.out_edges(u)})
        assert streamed == edges
        back = sorted({(w, u) for u in range(1, adj.n + 1) for w in adj.in_edges(u)})
        assert back == edges


def test_twosat_space_examples():
    ws = MeteredWorkspace()
    assert not twosat_space(Cnf2Formula(1, [(1,), (-1,)]), "savitch", ws)
    ws = MeteredWorkspace()
    assert twosat_space(Cnf2Formula(0, []), "savitch", ws)
    assert ws.peak_bits <= index_bits(1) + 1
    big = MeteredWorkspace()
    assert twosat_space(Cnf2Formula(64, []), "savitch", big)
    assert big.peak_bits <= 4 * math.log2(128) ** 2


@pytest.mark.parametrize("strategy", ["bfs", "savitch", "hybrid:2", "hybrid:4"])
def test_twosat_space_exhaustive(strategy):
    for f in exhaustive_formulas(3):
        if f.num_vars == 3:
            assert twosat_space(f, strategy, MeteredWorkspace()) == solve_2sat(f).satisfiable


@pytest.mark.parametrize("strategy", ["bfs", "savitch", "hybrid:3"])
def test_twosat_space_random(strategy):
    rng = random.Random(21)
    for _ in range(500 if strategy == "bfs" else 120):
        n = rng.randint(1, 12 if strategy == "bfs" else 7)
        f = gen_random("2sat", {"n": n, "m": rng.randint(0, 2 * n)}, rng.randrange(2**32))
        assert twosat_space(f, strategy, MeteredWorkspace()) == solve_2sat(f).satisfiable


def test_twosat_peak_independent_of_clauses():
    rng = random.Random(3)
    peaks = {}
    for factor in (1, 2):
        worst = 0
        for _ in range(3):
            f = gen_random("2sat", {"n": 12, "m": 12 * factor, "k": 3}, rng.randrange(2**32))
            ws = MeteredWorkspace()
            twosat_space(f, "savitch", ws)
            worst = max(worst, ws.peak_bits)
        peaks[factor] = worst
    assert peaks[1] == peaks[2]
