"""Acceptance suite.  Each test is one criterion and reports a pass/fail line
in the terminal summary (see conftest.py) as well as on stdout.
"""

import math
import random
import subprocess
import sys
import time

import pytest

from sublin import reductions as red
from sublin.instances import Digraph, gen_random, size_param, validate
from sublin.reductions import dstcon_to_maxhpp, dstcon_to_uock, exhaustive_digraphs, exhaustive_formulas
from sublin.snl import TOY_MACHINES, build_acceptance_formula, cert_size, decide_snl, simulate, universe_bound
from sublin.solvers import brute_2sat, reach_decide, solve_2sat, solve_maxhpp
from sublin.spacebound import MeteredWorkspace, reach_space, twosat_space


def report(request, passed, detail):
    request.node.criterion_detail = detail
    num, title = request.node.get_closest_marker("criterion").args
    print(f"[{'PASS' if passed else 'FAIL'}] criterion {num}: {title} {detail}")


def random_deg3(rng, lo, hi):
    n = rng.randint(lo, hi)
    m = rng.randint(0, min(3 * n // 2, n * (n - 1)))
    return gen_random("dstcon", {"n": n, "m": m, "degree_cap": 3}, rng.randrange(2**32))


@pytest.mark.criterion(1, "2SAT solver matches brute force on every formula, n <= 3, <= 4 clauses")
def test_c1_exhaustive_2sat(request):
    start = time.perf_counter()
    checked = mismatches = 0
    for f in exhaustive_formulas(3, 4):
        fast, slow = solve_2sat(f), brute_2sat(f)
        checked += 1
        if fast.satisfiable != slow.satisfiable or (fast.satisfiable and not f.is_satisfied_by(fast.assignment)):
            mismatches += 1
    secs = time.perf_counter() - start
    ok = mismatches == 0 and secs < 60
    report(request, ok, f"checked={checked} mismatches={mismatches} secs={secs:.1f}")
    assert ok


@pytest.fixture(scope="module")
def catalog_reports():
    start = time.perf_counter()
    reports = {
        name: red.verify_catalog_entry(name, formula_vars=3, graph_vertices=4, random_count=200, seed=1)
        for name in red.CATALOG
    }
    return reports, time.perf_counter() - start


@pytest.mark.criterion(2, "reductions sound on exhaustive domains plus 200 random instances each")
def test_c2_reduction_soundness(request, catalog_reports):
    reports, secs = catalog_reports
    bad = [n for n, r in reports.items() if r.answer_mismatches or r.contract_violations]
    covered = set(red.FILE_REDUCTIONS) <= set(reports)
    ok = not bad and covered and secs < 300
    checked = sum(r.instances_checked for r in reports.values())
    report(request, ok, f"reductions={len(reports)} checked={checked} failing={bad} secs={secs:.1f}")
    assert ok


DECLARED_K = {
    "split3": ("m_cls", 4),
    "2sat3-to-reach": ("m_vbl", 2),
    "reach-to-2sat3": ("m_ver", 5),
    "2sat3-to-lp": ("m_vbl", 1),
    "lp-to-2sat3": ("m_col", 3 * 3 + 1),
    "degree3": ("m_edg", 2),
}


@pytest.mark.criterion(3, "size-bound contracts and exact size identities")
def test_c3_size_contracts(request, catalog_reports):
    reports, _ = catalog_reports
    problems = []
    for name, (kind, k) in DECLARED_K.items():
        decl = red.REDUCTIONS[name].decl
        first = decl.bounds[0]
        if (first.source_kind, first.k, first.e) != (kind, k, 1):
            problems.append(f"{name} declares {first}")
    violations = sum(len(r.size_bound_violations) for r in reports.values())
    # exact identities, checked on every degree-3 graph with up to 4 vertices plus random ones
    rng = random.Random(3)
    graphs = [g for g in exhaustive_digraphs(4) if not validate(g, degree_cap=3)]
    graphs += [random_deg3(rng, 1, 8) for _ in range(200)]
    for g in graphs:
        n = g.num_vertices
        if size_param(red.R6(g), "m_nfa") != 4 * n * n:
            problems.append(f"to-1nfa m_nfa on n={n}")
        if size_param(red.R8(g), "m_col") != n * n:
            problems.append(f"to-maxhpp m_col on n={n}")
    ok = not problems and violations == 0
    report(request, ok, f"graphs={len(graphs)} bound_violations={violations} problems={problems[:5]}")
    assert ok


@pytest.mark.criterion(4, "Max-HPP optimum equals (n^2-1)n exactly when t is reachable")
def test_c4_maxhpp_identity(request):
    start = time.perf_counter()
    rng = random.Random(4)
    graphs = [g for g in exhaustive_digraphs(3, full_up_to=3) if g.num_vertices >= 2 and not validate(g, degree_cap=3)]
    graphs += [random_deg3(rng, 2, 5) for _ in range(200)]
    wrong = 0
    for g in graphs:
        n = g.num_vertices
        value = solve_maxhpp(dstcon_to_maxhpp(g)).value
        if (value == (n * n - 1) * n) != reach_decide(g):
            wrong += 1
    secs = time.perf_counter() - start
    ok = wrong == 0 and secs < 120
    report(request, ok, f"graphs={len(graphs)} wrong={wrong} secs={secs:.1f}")
    assert ok


def max_reach_peak(n, strategy, trials, seed):
    rng = random.Random(seed)
    peak = 0
    for _ in range(trials):
        g = gen_random("dstcon", {"n": n, "m": n, "degree_cap": 3}, rng.randrange(2**32))
        ws = MeteredWorkspace()
        reach_space(g, strategy, ws)
        peak = max(peak, ws.peak_bits)
    return peak


def max_twosat_peak(n, m, strategy, trials, seed):
    rng = random.Random(seed)
    peak = 0
    for _ in range(trials):
        f = gen_random("2sat", {"n": n, "m": m, "k": 3}, rng.randrange(2**32))
        ws = MeteredWorkspace()
        twosat_space(f, strategy, ws)
        peak = max(peak, ws.peak_bits)
    return peak


@pytest.mark.criterion(5, "space hierarchy: Savitch grows polylog, BFS linear, 2SAT peak independent of m")
def test_c5_space_hierarchy(request):
    start = time.perf_counter()
    trials = 10
    sav = {n: max_reach_peak(n, "savitch", trials, n) for n in (8, 32)}
    bfs = {n: max_reach_peak(n, "bfs", trials, n) for n in (8, 32)}
    sat = {m: max_twosat_peak(12, m, "savitch", trials, 12) for m in (12, 24)}
    secs = time.perf_counter() - start
    sav_ratio = sav[32] / sav[8]
    bfs_ratio = bfs[32] / bfs[8]
    ok = sav_ratio <= 4 and bfs_ratio >= 0.9 * (32 / 8) and sat[12] == sat[24] and secs < 120
    report(
        request,
        ok,
        f"savitch={sav} ratio={sav_ratio:.2f} bfs={bfs} ratio={bfs_ratio:.2f} 2sat(m)={sat} secs={secs:.1f}",
    )
    assert ok


@pytest.mark.criterion(6, "bfs, savitch and hybrid:2/4/8 agree on 200 random graphs, n <= 32")
def test_c6_strategy_agreement(request):
    rng = random.Random(6)
    strategies = ("bfs", "savitch", "hybrid:2", "hybrid:4", "hybrid:8")
    disagreements = 0
    for _ in range(200):
        g = random_deg3(rng, 8, 32)
        answers = {reach_space(g, s, MeteredWorkspace()) for s in strategies}
        answers.add(reach_decide(g))
        disagreements += len(answers) != 1
    ok = disagreements == 0
    report(request, ok, f"graphs=200 disagreements={disagreements}")
    assert ok


@pytest.mark.criterion(7, "every UOCK instance built from a graph passes the uniqueness scan")
def test_c7_uock_uniqueness(request):
    rng = random.Random(7)
    violations = 0
    for _ in range(200):
        violations += len(validate(dstcon_to_uock(random_deg3(rng, 1, 6))))
    ok = violations == 0
    report(request, ok, f"instances=200 violations={violations}")
    assert ok


@pytest.mark.criterion(8, "SNL acceptance formula agrees with direct simulation; universe within bound")
def test_c8_snl_fidelity(request):
    cases = wrong = over = 0
    inputs = [format(b, f"0{n}b") for n in range(1, 5) for b in range(2**n)]
    for machine in TOY_MACHINES.values():
        for x in inputs:
            formula, model = build_acceptance_formula(machine, x)
            cases += 1
            wrong += decide_snl(formula, model) != simulate(machine, x)
            over += cert_size(model) > universe_bound(machine, len(x))
    ok = len(inputs) == 30 and cases == 30 * len(TOY_MACHINES) == 90 and wrong == 0 and over == 0
    report(request, ok, f"inputs={len(inputs)} machines={len(TOY_MACHINES)} runs={cases} wrong={wrong} bound_violations={over}")
    assert ok


@pytest.mark.criterion(9, "verify all --random 200 --seed 1 is byte-identical across runs")
def test_c9_determinism(request):
    cmd = [sys.executable, "-m", "sublin", "verify", "all", "--random", "200", "--seed", "1"]
    first = subprocess.run(cmd, capture_output=True, check=False).stdout
    second = subprocess.run(cmd, capture_output=True, check=False).stdout
    ok = bool(first) and first == second
    report(request, ok, f"bytes={len(first)} identical={first == second}")
    assert ok
