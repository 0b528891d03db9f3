import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sublin import reductions as red
from sublin.instances import Cnf2Formula, Digraph, LpSystem, gen_random, normalize_cnf, size_param, validate
from sublin.reductions import (
    CATALOG,
    COMPLEMENT,
    IDENTITY,
    MANY_ONE,
    Reduction,
    ReductionDecl,
    SizeBound,
    compose,
    degree_reduce,
    dstcon_to_1nfa,
    dstcon_to_maxhpp,
    dstcon_to_uock,
    layer_vertex,
    layered_square,
    lp_to_2sat3,
    reach_to_2sat3,
    split_occurrences,
    token,
    twosat3_to_lp,
    twosat3_to_reach_queries,
    verify_catalog_entry,
    verify_reduction,
)
from sublin.solvers import (
    brute_2sat,
    brute_lp,
    reach_closure,
    reach_decide,
    search_1nfa,
    search_uock,
    solve_2sat,
    solve_lp,
    solve_maxhpp,
)


# -- split3 --------------------------------------------------------------------

def test_split_four_clause_contradiction():
    f = Cnf2Formula(2, [(1, 2), (1, -2), (-1, 2), (-1, -2)])
    g = split_occurrences(f)
    assert g.num_vars == 8 and g.max_occurrence() <= 3
    assert not brute_2sat(f).satisfiable and not brute_2sat(g).satisfiable


def test_split_leaves_single_occurrences():
    f = Cnf2Formula(4, [(1, -2), (3, 4)])
    assert split_occurrences(f) == f


def test_split_every_copy_occurs_three_times():
    f = gen_random("2sat", {"n": 6, "m": 14, "unit_prob": 0}, 3)
    g = split_occurrences(f)
    n = normalize_cnf(f)
    for v in range(1, g.num_vars + 1):
        assert g.occ(v) in (1, 3)
    assert g.m_vbl <= 2 * n.m_cls + n.m_vbl


# -- Turing reduction ------------------------------------------------------------

def test_queries_contradiction():
    plan = twosat3_to_reach_queries(Cnf2Formula(1, [(1,), (-1,)]))
    assert len(plan.queries) == 2
    assert all(reach_decide(plan.query_graph(i)) for i in range(2))
    assert plan.decide(reach_decide) is False


def test_queries_sizes_and_answers():
    rng = random.Random(2)
    for _ in range(500):
        n = rng.randint(1, 12)
        f = gen_random("2sat", {"n": n, "m": rng.randint(0, 3 * n), "k": 3}, rng.randrange(2**32))
        plan = twosat3_to_reach_queries(f)
        assert len(plan.queries) == 2 * f.m_vbl
        assert plan.graph.num_vertices == 2 * f.m_vbl
        assert validate(plan.graph, degree_cap=3) == []
        assert plan.decide(reach_decide) == solve_2sat(f).satisfiable


def test_queries_require_2sat3():
    with pytest.raises(ValueError):
        twosat3_to_reach_queries(Cnf2Formula(1, [(1,), (-1,), (1, -1)]))


# -- reach to 2SAT3 ------------------------------------------------------------------

def test_reach_single_edge():
    g = Digraph(2, [(1, 2)], 1, 2)
    pre = reach_to_2sat3(g, split=False)
    assert set(pre.clauses) == {(-1, 2), (1,), (-2,)}
    assert not brute_2sat(pre).satisfiable and reach_decide(g)
    assert not brute_2sat(reach_to_2sat3(g)).satisfiable


def test_reach_no_edges():
    g = Digraph(3, [], 1, 3)
    assert brute_2sat(reach_to_2sat3(g)).satisfiable and not reach_decide(g)


def test_reach_degree_violation():
    star = Digraph(5, [(1, 2), (1, 3), (1, 4), (1, 5)], 1, 5)
    with pytest.raises(ValueError):
        reach_to_2sat3(star)


# -- degree reduction ----------------------------------------------------------------

def test_degree_reduce_star():
    star = Digraph(5, [(1, 2), (1, 3), (1, 4), (1, 5)], 1, 5)
    out = degree_reduce(star)
    assert validate(out, degree_cap=3) == []
    assert reach_decide(out) and reach_decide(star)


def test_degree_reduce_keeps_low_degree_graphs():
    g = Digraph(4, [(1, 2), (2, 3), (3, 1), (3, 4)], 1, 4)
    assert degree_reduce(g) == g


def test_degree_reduce_dense_random():
    rng = random.Random(9)
    for _ in range(500):
        n = rng.randint(1, 15)
        g = gen_random("dstcon", {"n": n, "m": rng.randint(0, n * (n - 1))}, rng.randrange(2**32))
        out = degree_reduce(g)
        assert validate(out, degree_cap=3) == []
        assert reach_decide(out) == reach_decide(g)
        assert red.R10.decl.bounds[0].holds(len(g.edges), out.num_vertices)


def test_degree_reduce_self_loops():
    g = Digraph(2, [(1, 1), (1, 2), (2, 1), (2, 2)], 1, 2)
    out = degree_reduce(g)
    assert validate(out, degree_cap=3) == [] and reach_decide(out)


# -- 2SAT3 <-> LP ------------------------------------------------------------------------

def test_clause_rows():
    lp = twosat3_to_lp(Cnf2Formula(2, [(1, 2)]))
    assert lp.rows == (((1, Fraction(1)), (2, Fraction(1))),) and lp.bounds == (1,)
    assert lp.is_satisfied_by((0, 1))
    neg = twosat3_to_lp(Cnf2Formula(1, [(-1,)]))
    assert neg.rows == (((1, Fraction(-1)),),) and neg.bounds == (0,)
    assert solve_lp(neg).x == (0,)
    mixed = twosat3_to_lp(Cnf2Formula(2, [(-1, 2), (-1, -2)]))
    assert mixed.bounds == (0, -1)


def test_lp_row_forcing_ones():
    lp = LpSystem(1, 2, [[(1, 1), (2, 1)]], [2])
    f = lp_to_2sat3(lp, split=False)
    assert set(f.clauses) == {(1, 2), (1, -2), (-1, 2)}
    assert brute_2sat(f).assignment == {1: 1, 2: 1}


def test_lp_empty_row():
    f = lp_to_2sat3(LpSystem(1, 1, [[]], [1]))
    assert not brute_2sat(f).satisfiable


def test_lp_round_trip_witnesses():
    rng = random.Random(4)
    for _ in range(300):
        n = rng.randint(1, 10)
        f = gen_random("2sat", {"n": n, "m": rng.randint(0, 3 * n), "k": 3}, rng.randrange(2**32))
        lp = twosat3_to_lp(f)
        assert lp.num_rows == f.m_cls and lp.num_cols == f.m_vbl
        assert validate(lp, column_cap=3) == []
        res = solve_2sat(f)
        assert solve_lp(lp).feasible == res.satisfiable
        if res.satisfiable:
            assert lp.is_satisfied_by(tuple(res.assignment[v] for v in range(1, n + 1)))


def test_lp_to_2sat3_random():
    rng = random.Random(5)
    for _ in range(500):
        cols = rng.randint(1, 12)
        lp = gen_random("lp", {"cols": cols, "rows": rng.randint(0, 2 * cols), "k": 3}, rng.randrange(2**32))
        f = lp_to_2sat3(lp)
        assert f.max_occurrence() <= 3
        assert solve_2sat(f).satisfiable == brute_lp(lp).feasible


# -- layered graph and the search constructions ----------------------------------------------

def test_layer_numbering():
    assert layer_vertex(4, 2, 3) == 7


def test_layered_single_edge():
    g = layered_square(Digraph(2, [(1, 2)], 1, 2))
    assert g.num_vertices == 4 and (1, 4) in g.edges
    assert (g.source, g.target) == (1, 4)
    assert reach_decide(g)
    assert all(u < v for u, v in g.edges)


def test_layered_unreachable_stays_unreachable():
    g = Digraph(3, [(2, 1), (3, 2)], 1, 3)
    assert not reach_decide(layered_square(g))


def test_1nfa_chain():
    nfa = dstcon_to_1nfa(Digraph(3, [(1, 2), (2, 3)], 1, 3))
    word = search_1nfa(nfa)
    assert word == (1, 1, 0)
    assert nfa.accepts(word) and nfa.m_nfa == 4 * 3**2


def test_1nfa_unreachable_random():
    rng = random.Random(6)
    for _ in range(200):
        n = rng.randint(1, 10)
        g = gen_random("dstcon", {"n": n, "m": rng.randint(0, min(3 * n // 2, n * (n - 1))), "degree_cap": 3}, rng.randrange(2**32))
        nfa = dstcon_to_1nfa(g)
        assert (search_1nfa(nfa) is not None) == reach_decide(g)
        assert nfa.m_nfa == 4 * n * n


def test_uock_single_edge():
    x = dstcon_to_uock(Digraph(2, [(1, 2)], 1, 2))
    w = token(2, 3) + token(3, 3) + token(4, 3)
    # the stay edge at t adds a second piece token(3)#token(4)# after this one
    assert x.target == w and x.pieces[0] == w
    assert search_uock(x) == (1,)


def test_uock_degenerate():
    x = dstcon_to_uock(Digraph(1, [], 1, 1))
    assert len(x.pieces) == 1 and search_uock(x) == (1,)


def test_uock_random_uniqueness_and_answers():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 6)
        g = gen_random("dstcon", {"n": n, "m": rng.randint(0, min(3 * n // 2, n * (n - 1))), "degree_cap": 3}, rng.randrange(2**32))
        x = dstcon_to_uock(g)
        assert validate(x) == []
        assert (search_uock(x) is not None) == reach_decide(g)
        assert len(x.pieces) <= 3 * n * n


def test_maxhpp_single_edge():
    h = dstcon_to_maxhpp(Digraph(2, [(1, 2)], 1, 2))
    res = solve_maxhpp(h)
    assert h.size == 4 and res.value == 6 and res.sequence == (1, 4, 4, 4)


def test_maxhpp_unreachable():
    res = solve_maxhpp(dstcon_to_maxhpp(Digraph(2, [], 1, 2)))
    assert res.value < 6


# -- declarations and composition -------------------------------------------------------

def test_bound_arithmetic():
    b = SizeBound("m_vbl", "m_vbl", 2).compose(SizeBound("m_vbl", "m_vbl", 3))
    assert (b.k, b.e) == (9, 1)
    q = SizeBound("m_ver", "m_ver", 2).compose(SizeBound("m_ver", "m_nfa", 4, 2))
    assert (q.k, q.e) == (4 * 16 + 4, 2)


def test_compose_lp_then_split():
    lp_nosplit = Reduction(
        ReductionDecl("lp-to-2sat", "lp23", "2sat", bounds=(SizeBound("m_col", "m_cls", 9),)),
        lambda lp: lp_to_2sat3(lp, split=False),
    )
    composite = compose(lp_nosplit, red.R1)
    assert composite.decl.short and composite.decl.answer_map == IDENTITY
    assert composite.decl.target == "2sat3"
    report = verify_reduction(
        composite.decl,
        composite.fn,
        red.random_lps(200, 3, "compose"),
        red.lp_oracle,
        red.sat_oracle,
        extra_check=red._occ3_check,
    )
    assert report.passed, report.to_dict()


def test_compose_complements():
    both = compose(red.R3, red.R4)
    assert both.decl.answer_map == COMPLEMENT
    twice = compose(both, Reduction(ReductionDecl("neg", "lp23", "lp23", answer_map=COMPLEMENT, bounds=(SizeBound("m_col", "m_col", 1),)), lambda x: x))
    assert twice.decl.answer_map == IDENTITY


def test_compose_mismatch():
    with pytest.raises(ValueError):
        compose(red.R6, red.R1)
    with pytest.raises(ValueError):
        compose(red.R2, red.R4)


def test_composed_bounds_are_sound():
    chain = compose(red.R3, red.R4)
    report = verify_reduction(
        chain.decl, chain.fn, red.random_digraphs(200, 5, "chain"), reach_closure,
        lambda lp: solve_lp(lp).feasible,
    )
    assert report.passed, report.to_dict()


def test_declared_constants():
    decls = {name: r.decl for name, r in red.REDUCTIONS.items()}
    assert (decls["split3"].k, decls["split3"].bounds[0].source_kind) == (4, "m_cls")
    assert decls["2sat3-to-reach"].k == 2 and decls["2sat3-to-reach"].kind == "turing"
    assert decls["reach-to-2sat3"].k == 5 and decls["reach-to-2sat3"].answer_map == COMPLEMENT
    assert decls["2sat3-to-lp"].k == 1
    assert decls["lp-to-2sat3"].k == 3 * 3 + 1
    assert decls["degree3"].k == 2
    for name in ("to-1nfa", "to-uock", "to-maxhpp"):
        assert decls[name].e == 2 and not decls[name].short
    assert sorted(red.FILE_REDUCTIONS) == sorted(
        ["split3", "reach-to-2sat3", "2sat3-to-lp", "lp-to-2sat3", "degree3", "layer", "to-1nfa", "to-uock", "to-maxhpp"]
    )


# -- harness ---------------------------------------------------------------------------------

def test_r4_exhaustive_ratio():
    report = verify_catalog_entry("2sat3-to-lp", random_count=0)
    assert report.passed and report.max_ratio <= 1


def test_r3_exhaustive_complement():
    report = verify_catalog_entry("reach-to-2sat3", random_count=0)
    assert report.passed and report.instances_checked > 0


def test_sabotage_is_caught():
    report = verify_catalog_entry("2sat3-to-lp", random_count=20, sabotage=True, exhaustive=False)
    assert report.size_bound_violations and not report.passed


def test_wrong_answer_map_is_caught():
    decl = ReductionDecl("flipped", "3dstcon", "2sat3", answer_map=IDENTITY, bounds=red.R3.decl.bounds)
    report = verify_reduction(decl, reach_to_2sat3, red.random_digraphs(30, 1, "flip"), reach_closure, red.sat_oracle)
    assert len(report.answer_mismatches) == 20 or report.answer_mismatches


def test_reports_merge():
    a = verify_catalog_entry("layer", random_count=10, exhaustive=False)
    b = verify_catalog_entry("layer", random_count=10, seed=2, exhaustive=False)
    merged = a.merge(b)
    assert merged.instances_checked == 20 and merged.passed
    assert merged.max_ratio == max(a.max_ratio, b.max_ratio)


def test_uock_counter():
    report = verify_catalog_entry("to-uock", random_count=50, seed=9, exhaustive=False)
    assert report.counters["uniqueness_checked"] == 50
    assert "uniqueness_violations" not in report.counters


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_entry_random(name):
    report = verify_catalog_entry(name, random_count=60, seed=17, exhaustive=False)
    assert report.passed, report.to_dict()


@settings(max_examples=150, deadline=None)
@given(clauses=st.lists(st.lists(st.integers(-6, 6).filter(bool), min_size=1, max_size=2).map(tuple), max_size=14))
def test_split_equisatisfiable(clauses):
    f = Cnf2Formula(6, clauses)
    g = split_occurrences(f)
    assert g.max_occurrence() <= 3
    assert solve_2sat(g).satisfiable == brute_2sat(f).satisfiable
    assert red.R1.decl.bounds[0].holds(f.m_cls, g.m_cls)
