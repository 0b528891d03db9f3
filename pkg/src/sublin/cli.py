"""Command-line interface: ``sublin <command> ...``.

Exit codes: 0 success, 1 a "no" answer from ``solve``, 2 usage, parse or
input errors, 3 verification failure.  Machine-readable output is JSON
with sorted keys; every random choice derives from ``--seed`` through
Python's ``random.Random`` (Mersenne Twister).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import reductions as red
from . import snl
from .instances import (
    InstanceError,
    ParseError,
    applicable_kinds,
    gen_random,
    parse_instance,
    serialize,
    size_param,
    validate,
)
from .solvers import (
    reach_decide,
    search_1nfa,
    search_uock,
    solve_2sat,
    solve_lp,
    solve_maxhpp,
)
from .spacebound import (
    BUDGET_ENV,
    MeteredWorkspace,
    StepBudgetExhausted,
    Strategy,
    default_step_budget,
    reach_space,
    twosat_space,
)

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3

PROBLEM_FORMATS = {
    "2sat": "cnf",
    "2sat3": "cnf",
    "reach": "dstcon",
    "lp": "lp",
    "1nfa": "nfa",
    "uock": "uock",
    "maxhpp": "hpp",
}
FAMILY_FORMATS = {
    "2sat": "cnf",
    "2sat3": "cnf",
    "dstcon": "dstcon",
    "3dstcon": "dstcon",
    "lp": "lp",
    "lp23": "lp",
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple = ()
    strategy: Strategy | None = None
    budget: int = 1
    seed: int = 0
    output: str = "json"

    def __post_init__(self):
        if self.budget < 1:
            raise UsageError("step budget must be >= 1")
        if self.strategy is not None and self.strategy.name == "hybrid" and self.strategy.tau < 1:
            raise UsageError("hybrid threshold must be >= 1")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default)


def _json_default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, (frozenset, set)):
        return sorted(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _load(path: str, fmt: str):
    try:
        return parse_instance(fmt, _read(path))
    except (ParseError, InstanceError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _budget(args) -> int:
    budget = args.budget if getattr(args, "budget", None) is not None else default_step_budget()
    if budget < 1:
        raise UsageError("step budget must be >= 1")
    return budget


def _strategy(text):
    try:
        return Strategy.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def sizes_of(instance) -> dict:
    return {k.value: size_param(instance, k) for k in applicable_kinds(instance)}


# ---------------------------------------------------------------------------
# solve

def cmd_solve(args, out) -> int:
    fmt = PROBLEM_FORMATS[args.problem]
    x = _load(args.input, fmt)
    if args.problem == "2sat3":
        problems = validate(x, occurrence_cap=3)
        if problems:
            raise UsageError(f"{args.input}: not 2SAT_3: {'; '.join(problems)}")
    report = {"problem": args.problem, "sizes": sizes_of(x)}
    strategy = _strategy(args.strategy) if args.strategy else None
    if strategy is not None and args.problem not in ("2sat", "2sat3", "reach"):
        raise UsageError("--strategy applies to 2sat, 2sat3 and reach only")
    cfg = RunConfig("solve", (args.input,), strategy, _budget(args))
    if strategy is not None:
        ws = MeteredWorkspace(cfg.budget)
        try:
            if args.problem == "reach":
                answer = reach_space(x, strategy, ws)
            else:
                answer = twosat_space(x, strategy, ws)
        except StepBudgetExhausted:
            report.update(strategy=str(strategy), error="step budget exhausted", steps=ws.step_count,
                          peak_bits=ws.peak_bits)
            out.write(_dump(report) + "\n")
            return EXIT_USAGE
        report.update(strategy=str(strategy), peak_bits=ws.peak_bits, steps=ws.step_count)
        if args.problem != "reach" and answer:
            report["witness"] = _witness_2sat(x)
    elif args.problem in ("2sat", "2sat3"):
        res = solve_2sat(x)
        answer = res.satisfiable
        if answer:
            report["witness"] = _witness_2sat(x)
    elif args.problem == "reach":
        answer = reach_decide(x)
    elif args.problem == "lp":
        res = solve_lp(x)
        answer = res.feasible
        if answer:
            report["witness"] = list(res.x)
    elif args.problem == "1nfa":
        word = search_1nfa(x)
        answer = word is not None
        if answer:
            report["witness"] = list(word)
    elif args.problem == "uock":
        try:
            seq = search_uock(x)
        except ValueError as exc:
            raise UsageError(f"{args.input}: {exc}") from None
        answer = seq is not None
        if answer:
            report["witness"] = list(seq)
    else:
        res = solve_maxhpp(x)
        answer = True
        report.update(value=res.value, sequence=list(res.sequence))
    report["answer"] = answer
    out.write(_dump(report) + "\n")
    return EXIT_OK if answer else EXIT_NO


def _witness_2sat(formula) -> list:
    res = solve_2sat(formula)
    return [int(res.assignment[v]) for v in range(1, formula.num_vars + 1)]


# ---------------------------------------------------------------------------
# reduce

def cmd_reduce(args, out) -> int:
    if args.name not in red.REDUCTIONS or args.name not in red.FILE_REDUCTIONS:
        raise UsageError(f"unknown reduction {args.name!r}; one of {', '.join(red.FILE_REDUCTIONS)}")
    reduction = red.REDUCTIONS[args.name]
    decl = reduction.decl
    x = _load(args.input, FAMILY_FORMATS[decl.source])
    try:
        y = reduction(x)
    except ValueError as exc:
        raise UsageError(f"{args.input}: {exc}") from None
    Path(args.output).write_text(serialize(y))
    report = {
        "reduction": decl.name,
        "source": decl.source,
        "target": decl.target,
        "answer_map": decl.answer_map,
        "output": args.output,
        "bounds": [
            {
                "source_kind": b.source_kind,
                "target_kind": b.target_kind,
                "k": b.k,
                "e": b.e,
                "m1": size_param(x, b.source_kind),
                "m2": size_param(y, b.target_kind),
                "holds": b.holds(size_param(x, b.source_kind), size_param(y, b.target_kind)),
            }
            for b in decl.bounds
        ],
    }
    out.write(_dump(report) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args, out) -> int:
    names = list(red.CATALOG) if args.name == "all" else [args.name]
    for name in names:
        if name not in red.CATALOG:
            raise UsageError(f"unknown reduction {name!r}; one of all, {', '.join(red.CATALOG)}")
    exhaustive = args.exhaustive is not None
    graphs = args.exhaustive_graphs if args.exhaustive_graphs is not None else (args.exhaustive or 0) + 1
    reports = [
        red.verify_catalog_entry(
            name,
            formula_vars=args.exhaustive or 0,
            graph_vertices=graphs,
            random_count=args.random,
            seed=args.seed,
            sabotage=args.sabotage_k,
            exhaustive=exhaustive,
        )
        for name in names
    ]
    passed = all(r.passed for r in reports)
    if args.format == "table":
        out.write(f"{'reduction':<16} {'result':<6} {'checked':>8} {'mismatch':>8} {'size':>5} {'contract':>8}  max_ratio\n")
        for r in reports:
            ratio = "-" if r.max_ratio is None else f"{float(r.max_ratio):.3f}"
            out.write(
                f"{r.name:<16} {'pass' if r.passed else 'FAIL':<6} {r.instances_checked:>8} "
                f"{len(r.answer_mismatches):>8} {len(r.size_bound_violations):>5} "
                f"{len(r.contract_violations):>8}  {ratio}\n"
            )
    else:
        doc = {
            "passed": passed,
            "seed": args.seed,
            "random": args.random,
            "exhaustive": args.exhaustive,
            "sabotage_k": args.sabotage_k,
            "reports": [r.to_dict() for r in reports],
        }
        out.write(_dump(doc) + "\n")
    return EXIT_OK if passed else EXIT_VERIFY


# ---------------------------------------------------------------------------
# bench-space

def bench_rows(problem, sizes, strategies, seed, budget, clause_factor=2, trials=1):
    """One row per (size, trial, strategy); instances drawn from ``seed``."""
    rng = random.Random(seed)
    rows = []
    for n in sizes:
        for trial in range(trials):
            inst_seed = rng.randrange(2**32)
            if problem == "reach":
                x = gen_random("dstcon", {"n": n, "m": n, "degree_cap": 3}, inst_seed)
                m = len(x.edges)
            else:
                x = gen_random("2sat", {"n": n, "m": clause_factor * n, "k": 3}, inst_seed)
                m = len(x.clauses)
            for strat in strategies:
                ws = MeteredWorkspace(budget)
                try:
                    answer = reach_space(x, strat, ws) if problem == "reach" else twosat_space(x, strat, ws)
                    error = None
                except StepBudgetExhausted:
                    answer, error = None, "budget"
                row = ws.report(str(strat), n, m, answer)
                row.update(trial=trial, error=error)
                rows.append(row)
    return rows


BENCH_FIELDS = ["algorithm", "n", "m", "trial", "peak_bits", "steps", "answer", "error"]


def cmd_bench_space(args, out) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()] if args.sizes else []
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    strategies = [_strategy(s) for s in args.strategies.split(",") if s.strip()]
    rows = bench_rows(args.problem, sizes, strategies, args.seed, _budget(args), args.clause_factor, args.trials)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(_dump(rows) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# gen

GEN_FAMILIES = {"2sat": "2sat", "dstcon": "dstcon", "lp": "lp", "nfa": "nfa", "uock": "uock", "hpp": "hpp"}


def _param_value(text):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    return text


def cmd_gen(args, out) -> int:
    params = {}
    for item in args.param or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        params[key] = _param_value(val)
    try:
        x = gen_random(GEN_FAMILIES[args.family], params, args.seed)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    text = serialize(x)
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# snl

def _load_snl(path):
    try:
        return snl.loads(_read(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_snl(args, out) -> int:
    if args.snl_command == "build":
        if args.machine not in snl.TOY_MACHINES:
            raise UsageError(f"unknown machine {args.machine!r}; one of {', '.join(snl.TOY_MACHINES)}")
        if not args.input or set(args.input) - {"0", "1"}:
            raise UsageError("input must be a nonempty 0/1 string")
        formula, model = snl.build_acceptance_formula(snl.TOY_MACHINES[args.machine], args.input)
        text = snl.dumps(formula, model) + "\n"
        if args.output:
            Path(args.output).write_text(text)
        else:
            out.write(text)
        return EXIT_OK
    formula, model = _load_snl(args.file)
    try:
        if args.snl_command == "eval":
            try:
                pairs = json.loads(_read(args.relation))
                relation = {(int(i), str(u)) for i, u in pairs}
            except (ValueError, TypeError) as exc:
                raise UsageError(f"{args.relation}: {exc}") from None
            answer = snl.eval_snl(formula, model, relation)
            report = {"answer": answer, "cert_size": snl.cert_size(model)}
        else:
            res = snl.search_snl(formula, model)
            report = {
                "answer": res.found,
                "cert_size": snl.cert_size(model),
                "visited": res.visited,
                "witness": None if res.witness is None else sorted([i, u] for i, u in res.witness),
            }
    except snl.SnlError as exc:
        raise UsageError(str(exc)) from None
    out.write(_dump(report) + "\n")
    return EXIT_OK if report["answer"] else EXIT_NO


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sublin", description="Sub-linear space toolkit for parameterized NL problems.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one instance file")
    s.add_argument("--problem", required=True, choices=sorted(PROBLEM_FORMATS))
    s.add_argument("--strategy", help="bfs, savitch or hybrid:<tau> (metered run)")
    s.add_argument("--budget", type=int, help=f"step budget (default ${BUDGET_ENV} or 10^8)")
    s.add_argument("input")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("reduce", help="apply a catalog reduction to an instance file")
    r.add_argument("name")
    r.add_argument("input")
    r.add_argument("output")
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="check reductions against oracles and size bounds")
    v.add_argument("name", help="catalog name or 'all'")
    v.add_argument("--exhaustive", type=int, metavar="N", help="all formulas with at most N variables")
    v.add_argument("--exhaustive-graphs", type=int, metavar="M", help="all digraphs with at most M vertices (default N+1)")
    v.add_argument("--random", type=int, default=0, metavar="COUNT")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--sabotage-k", action="store_true", help="negative control: declare every k as 0")
    v.add_argument("--format", choices=("json", "table"), default="json")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench-space", help="peak work bits per strategy and size")
    b.add_argument("--problem", choices=("reach", "2sat"), default="reach")
    b.add_argument("--sizes", default="", help="comma-separated sizes")
    b.add_argument("--strategies", default="bfs,savitch")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--budget", type=int)
    b.add_argument("--clause-factor", type=int, default=2, help="2sat: clauses per variable")
    b.add_argument("--trials", type=int, default=1)
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.set_defaults(func=cmd_bench_space)

    g = sub.add_parser("gen", help="random instance")
    g.add_argument("family", choices=sorted(GEN_FAMILIES))
    g.add_argument("--param", action="append", metavar="KEY=VALUE")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    n = sub.add_parser("snl", help="SNL formulas")
    nsub = n.add_subparsers(dest="snl_command", required=True)
    ne = nsub.add_parser("eval", help="evaluate with an explicit T (JSON list of [i, element])")
    ne.add_argument("file")
    ne.add_argument("relation")
    nd = nsub.add_parser("decide", help="search all admissible T")
    nd.add_argument("file")
    nb = nsub.add_parser("build", help="acceptance formula of a toy machine")
    nb.add_argument("machine")
    nb.add_argument("input")
    nb.add_argument("-o", "--output")
    n.set_defaults(func=cmd_snl)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"sublin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        if os.environ.get("SUBLIN_DEBUG"):
            raise
        print(f"sublin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
