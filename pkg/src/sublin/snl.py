"""SNL formulas: syntax, semantic models and a brute-force decision procedure.

A formula is a first-order prefix plus a matrix over atoms ``T(i, v)``,
``(u1, ..., uk) in S``, ``u = v``, ``i <= j`` and ``symb(v, i) = a``.  The
second-order predicate T is existentially quantified; ``decide_snl``
enumerates every admissible T.  Evaluation is vectorized over batches of
candidate relations with numpy.

The matrix may itself contain quantifiers (the machine-acceptance formula
nests a universal block inside a conjunction); the quantifier order along
every branch must match exists* forall* exists*.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

import numpy as np

ENUMERATION_LIMIT = 2**20
BATCH = 1 << 15


class SnlError(ValueError):
    pass


class GuardExceeded(SnlError):
    pass


class SpaceBoundError(SnlError):
    pass


# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Const:
    value: str


@dataclass(frozen=True)
class Plus:
    term: "Term"
    offset: int


@dataclass(frozen=True)
class Last:
    """Largest index i with T(i, v) for some v (0 when T is empty)."""


Term = Union[Var, Num, Const, Plus, Last]


# ---------------------------------------------------------------------------
# formulas

@dataclass(frozen=True)
class TAtom:
    index: Term
    elem: Term


@dataclass(frozen=True)
class InRel:
    relation: str
    args: tuple


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Le:
    left: Term
    right: Term


@dataclass(frozen=True)
class Symb:
    elem: Term
    index: Term
    symbol: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


QUANTS = ("exists", "forall")
SORTS = ("index", "universe", "choice")


@dataclass(frozen=True)
class Quant:
    quantifier: str
    var: str
    sort: str
    domain: str
    body: "Formula"

    def __post_init__(self):
        if self.quantifier not in QUANTS:
            raise SnlError(f"unknown quantifier {self.quantifier!r}")
        if self.sort not in SORTS:
            raise SnlError(f"unknown variable sort {self.sort!r}")


Formula = Union[TAtom, InRel, Eq, Le, Symb, Not, And, Or, Implies, Quant]


@dataclass(frozen=True)
class Binder:
    quantifier: str
    var: str
    sort: str
    domain: str


@dataclass(frozen=True)
class SnlFormula:
    """``∃T`` followed by ``prefix`` and ``matrix``."""

    prefix: tuple
    matrix: Formula

    def as_tree(self) -> Formula:
        node = self.matrix
        for b in reversed(self.prefix):
            node = Quant(b.quantifier, b.var, b.sort, b.domain, node)
        return node


def term_vars(t) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Plus):
        return term_vars(t.term)
    return frozenset()


@lru_cache(maxsize=None)
def free_vars(node) -> frozenset:
    if isinstance(node, TAtom):
        return term_vars(node.index) | term_vars(node.elem)
    if isinstance(node, InRel):
        return frozenset().union(*(term_vars(a) for a in node.args))
    if isinstance(node, (Eq, Le)):
        return term_vars(node.left) | term_vars(node.right)
    if isinstance(node, Symb):
        return term_vars(node.elem) | term_vars(node.index)
    if isinstance(node, Not):
        return free_vars(node.arg)
    if isinstance(node, (And, Or)):
        return frozenset().union(*(free_vars(a) for a in node.args))
    if isinstance(node, Implies):
        return free_vars(node.left) | free_vars(node.right)
    if isinstance(node, Quant):
        return free_vars(node.body) - {node.var}
    raise SnlError(f"not a formula node: {node!r}")


@lru_cache(maxsize=None)
def mentions_t(node) -> bool:
    if isinstance(node, TAtom):
        return True
    if isinstance(node, (InRel, Eq, Le, Symb)):
        terms = node.args if isinstance(node, InRel) else [getattr(node, f) for f in ("left", "right", "elem", "index") if hasattr(node, f)]
        return any(_term_uses_last(t) for t in terms)
    if isinstance(node, Not):
        return mentions_t(node.arg)
    if isinstance(node, (And, Or)):
        return any(mentions_t(a) for a in node.args)
    if isinstance(node, Implies):
        return mentions_t(node.left) or mentions_t(node.right)
    return mentions_t(node.body)


def _term_uses_last(t) -> bool:
    return isinstance(t, Last) or (isinstance(t, Plus) and _term_uses_last(t.term))


def quantifier_paths(node, path=()):
    if isinstance(node, Quant):
        yield from quantifier_paths(node.body, path + (node.quantifier,))
    elif isinstance(node, Not):
        yield from quantifier_paths(node.arg, path)
    elif isinstance(node, (And, Or)):
        for a in node.args:
            yield from quantifier_paths(a, path)
    elif isinstance(node, Implies):
        yield from quantifier_paths(node.left, path)
        yield from quantifier_paths(node.right, path)
    else:
        yield path


def check_shape(formula: SnlFormula) -> None:
    """Reject free variables, and quantifier orders outside exists* forall* exists*."""
    tree = formula.as_tree()
    unbound = free_vars(tree)
    if unbound:
        raise SnlError(f"unbound variable(s): {', '.join(sorted(unbound))}")
    for path in quantifier_paths(tree):
        # count alternations: ∃* ∀* ∃* has at most two switches starting from ∃
        word = "".join("E" if q == "exists" else "A" for q in path)
        blocks = [k for k, _ in itertools.groupby(word)]
        if blocks and blocks[0] == "A":
            blocks = ["E"] + blocks
        if len(blocks) > 3:
            raise SnlError(f"quantifier order {word} is not of the form E*A*E*")
    for node in _walk(tree):
        negated = node.arg if isinstance(node, Not) else node.left if isinstance(node, Implies) else None
        if negated is not None and any(isinstance(n, Quant) for n in _walk(negated)):
            raise SnlError("negated quantifier changes the prefix class")


def _walk(node):
    yield node
    for child in _children(node):
        yield from _walk(child)


def _children(node):
    if isinstance(node, Not):
        return (node.arg,)
    if isinstance(node, (And, Or)):
        return node.args
    if isinstance(node, Implies):
        return (node.left, node.right)
    if isinstance(node, Quant):
        return (node.body,)
    return ()


# ---------------------------------------------------------------------------
# semantic model

@dataclass
class SemanticModel:
    positions: int
    universe: tuple
    domains: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    functional_t: bool = True
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.universe = tuple(self.universe)
        self.domains = {k: tuple(v) for k, v in self.domains.items()}
        self.domains.setdefault("U", self.universe)
        self.relations = {k: frozenset(tuple(t) for t in v) for k, v in self.relations.items()}
        self.position_of = {u: i for i, u in enumerate(self.universe)}
        if len(self.position_of) != len(self.universe):
            raise SnlError("universe elements must be distinct")

    def domain(self, name: str) -> tuple:
        try:
            return self.domains[name]
        except KeyError:
            raise SnlError(f"unknown domain {name!r}") from None

    def candidate_count(self) -> int:
        if self.functional_t:
            return len(self.universe) ** self.positions
        return 2 ** (self.positions * len(self.universe))


def cert_size(model: SemanticModel) -> int:
    return len(model.universe)


# ---------------------------------------------------------------------------
# evaluation

def _is_array(x) -> bool:
    return isinstance(x, np.ndarray)


def _all(r) -> bool:
    return bool(r.all()) if _is_array(r) else bool(r)


def _none(r) -> bool:
    return not (bool(r.any()) if _is_array(r) else bool(r))


def _and(a, b):
    if not _is_array(a) and not _is_array(b):
        return bool(a) and bool(b)
    return np.logical_and(a, b)


def _or(a, b):
    if not _is_array(a) and not _is_array(b):
        return bool(a) or bool(b)
    return np.logical_or(a, b)


def _not(a):
    return np.logical_not(a) if _is_array(a) else not a


def _lift(fn, *args):
    if not any(_is_array(a) for a in args):
        return bool(fn(*args))
    return np.vectorize(lambda *xs: bool(fn(*xs)), otypes=[bool])(*args)


class _Batch:
    """Candidate relations T for one vectorized pass.

    Functional candidates are stored as element choices per position
    (shape (B, P)); general candidates as membership bits (B, P, |U|).
    """

    def __init__(self, model: SemanticModel, choice=None, member=None):
        self.model = model
        self.choice = choice
        self.member = member
        size = (choice if choice is not None else member).shape[0]
        self.size = size
        p = model.positions
        if choice is not None:
            self.last = np.full(size, p if p else 0, dtype=np.int64)
        else:
            rows = member.any(axis=2)
            if p == 0:
                self.last = np.zeros(size, dtype=np.int64)
            else:
                rev = rows[:, ::-1].argmax(axis=1)
                self.last = np.where(rows.any(axis=1), p - rev, 0).astype(np.int64)
        self.cache = {}

    def t_atom(self, index, col):
        p = self.model.positions
        if col is None:
            return False
        if not _is_array(index):
            if not 1 <= index <= p:
                return False
            if self.choice is not None:
                return self.choice[:, index - 1] == col
            return self.member[:, index - 1, col].copy()
        valid = (index >= 1) & (index <= p)
        safe = np.clip(index - 1, 0, max(p - 1, 0))
        rows = np.arange(self.size)
        if p == 0:
            return np.zeros(self.size, dtype=bool)
        if self.choice is not None:
            hit = self.choice[rows, safe] == col
        else:
            hit = self.member[rows, safe, col]
        return hit & valid


def _term(t, env, batch):
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise SnlError(f"unbound variable {t.name!r}") from None
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Plus):
        return _term(t.term, env, batch) + t.offset
    if isinstance(t, Last):
        return batch.last
    raise SnlError(f"not a term: {t!r}")


def _compile(node, model: SemanticModel):
    """Rewrite for evaluation: implications become disjunctions, T-free
    conjuncts go first, and parts of a quantifier body that do not use the
    bound variable are moved outside it (sound for nonempty domains).
    """
    if isinstance(node, Implies):
        return _compile(Or((Not(node.left), node.right)), model)
    if isinstance(node, Not):
        return Not(_compile(node.arg, model))
    if isinstance(node, (And, Or)):
        args = [_compile(a, model) for a in node.args]
        flat = []
        for a in args:
            flat.extend(a.args if type(a) is type(node) else [a])
        flat.sort(key=mentions_t)
        return type(node)(tuple(flat))
    if isinstance(node, Quant):
        body = _compile(node.body, model)
        if isinstance(body, (And, Or)) and model.domain(node.domain):
            outer = tuple(a for a in body.args if node.var not in free_vars(a))
            inner = tuple(a for a in body.args if node.var in free_vars(a))
            if outer:
                if not inner:
                    return body
                quant = Quant(node.quantifier, node.var, node.sort, node.domain,
                              inner[0] if len(inner) == 1 else type(body)(inner))
                args = sorted(outer + (quant,), key=mentions_t)
                return type(body)(tuple(args))
        return Quant(node.quantifier, node.var, node.sort, node.domain, body)
    return node


def _eval(node, env, batch):
    if isinstance(node, TAtom):
        elem = _term(node.elem, env, batch)
        if _is_array(elem):
            raise SnlError("T's second argument must be an element, not last(T)")
        return batch.t_atom(_term(node.index, env, batch), batch.model.position_of.get(elem))
    if isinstance(node, InRel):
        try:
            rel = batch.model.relations[node.relation]
        except KeyError:
            raise SnlError(f"unknown relation {node.relation!r}") from None
        return _lift(lambda *xs: tuple(xs) in rel, *(_term(a, env, batch) for a in node.args))
    if isinstance(node, Eq):
        return _lift(lambda a, b: a == b, _term(node.left, env, batch), _term(node.right, env, batch))
    if isinstance(node, Le):
        return _lift(lambda a, b: a <= b, _term(node.left, env, batch), _term(node.right, env, batch))
    if isinstance(node, Symb):
        def symb(v, i):
            return 1 <= i <= len(v) and v[i - 1] == node.symbol
        return _lift(symb, _term(node.elem, env, batch), _term(node.index, env, batch))
    if isinstance(node, Not):
        return _not(_eval(node.arg, env, batch))
    if isinstance(node, And):
        acc = True
        for a in node.args:
            acc = _and(acc, _eval(a, env, batch))
            if _none(acc):
                return False
        return acc
    if isinstance(node, Or):
        acc = False
        for a in node.args:
            acc = _or(acc, _eval(a, env, batch))
            if _all(acc):
                return True
        return acc
    if isinstance(node, Quant):
        key = (id(node), tuple((v, env[v]) for v in sorted(free_vars(node)) if v in env))
        hit = batch.cache.get(key)
        if hit is not None:
            return hit
        values = batch.model.domain(node.domain)
        if node.quantifier == "exists":
            acc = False
            for val in values:
                acc = _or(acc, _eval(node.body, {**env, node.var: val}, batch))
                if _all(acc):
                    acc = True
                    break
        else:
            acc = True
            for val in values:
                acc = _and(acc, _eval(node.body, {**env, node.var: val}, batch))
                if _none(acc):
                    acc = False
                    break
        batch.cache[key] = acc
        return acc
    raise SnlError(f"not a formula node: {node!r}")


def _broadcast(result, size) -> np.ndarray:
    if _is_array(result):
        return result
    return np.full(size, bool(result))


def _check_relation(model: SemanticModel, t_rel) -> np.ndarray:
    p = model.positions
    member = np.zeros((1, p, len(model.universe)), dtype=bool)
    for i, u in t_rel:
        if not (isinstance(i, int) and 1 <= i <= p) or u not in model.position_of:
            raise SnlError(f"T contains ({i}, {u!r}) outside [{p}] x U")
        member[0, i - 1, model.position_of[u]] = True
    if model.functional_t and not (member.sum(axis=2) == 1).all():
        raise SnlError("T is not a function from positions to the universe")
    return member


def eval_snl(formula: SnlFormula, model: SemanticModel, t_rel) -> bool:
    """Truth of the first-order part of ``formula`` for one explicit T."""
    check_shape(formula)
    member = _check_relation(model, t_rel)
    if model.functional_t:
        batch = _Batch(model, choice=member[0].argmax(axis=1)[None, :] if model.positions else np.zeros((1, 0), dtype=np.int64))
    else:
        batch = _Batch(model, member=member)
    return bool(_broadcast(_eval(_compile(formula.as_tree(), model), {}, batch), 1)[0])


@dataclass
class SearchResult:
    found: bool
    witness: Optional[frozenset]
    visited: int
    satisfying: int


def _functional_batches(model: SemanticModel, batch_size: int):
    u, p = len(model.universe), model.positions
    total = u**p
    weights = u ** np.arange(p - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, batch_size):
        idx = np.arange(start, min(total, start + batch_size), dtype=np.int64)
        choice = (idx[:, None] // weights[None, :]) % u if p else np.zeros((len(idx), 0), dtype=np.int64)
        yield start, _Batch(model, choice=choice)


def _subset_batches(model: SemanticModel, batch_size: int):
    u, p = len(model.universe), model.positions
    bits = u * p
    total = 1 << bits
    shifts = np.arange(bits, dtype=np.int64)
    for start in range(0, total, batch_size):
        idx = np.arange(start, min(total, start + batch_size), dtype=np.int64)
        member = ((idx[:, None] >> shifts[None, :]) & 1).astype(bool).reshape(len(idx), p, u)
        yield start, _Batch(model, member=member)


def _witness(model: SemanticModel, batch: _Batch, row: int) -> frozenset:
    if batch.choice is not None:
        return frozenset((i + 1, model.universe[c]) for i, c in enumerate(batch.choice[row]))
    ii, uu = np.nonzero(batch.member[row])
    return frozenset((int(i) + 1, model.universe[u]) for i, u in zip(ii, uu))


def search_snl(
    formula: SnlFormula,
    model: SemanticModel,
    *,
    stop_at_first: bool = True,
    limit: int = ENUMERATION_LIMIT,
    batch_size: int = BATCH,
) -> SearchResult:
    """Enumerate admissible T (total functions [P] -> U, or all subsets of
    [P] x U) in index order; candidate 0 maps every position to the first
    universe element, and position 1 is the most significant digit.
    """
    check_shape(formula)
    count = model.candidate_count()
    if count > limit:
        raise GuardExceeded(f"{count} candidate relations exceed the enumeration limit {limit}")
    tree = _compile(formula.as_tree(), model)
    batches = _functional_batches if model.functional_t else _subset_batches
    visited = satisfying = 0
    witness = None
    for _, batch in batches(model, batch_size):
        truth = _broadcast(_eval(tree, {}, batch), batch.size)
        hits = np.flatnonzero(truth)
        if witness is None and len(hits):
            witness = _witness(model, batch, int(hits[0]))
            if stop_at_first:
                return SearchResult(True, witness, visited + int(hits[0]) + 1, 1)
        visited += batch.size
        satisfying += len(hits)
    return SearchResult(witness is not None, witness, visited, satisfying)


def decide_snl(formula: SnlFormula, model: SemanticModel) -> bool:
    return search_snl(formula, model).found


# ---------------------------------------------------------------------------
# JSON

def term_to_json(t):
    if isinstance(t, Var):
        return {"var": t.name}
    if isinstance(t, Num):
        return {"num": t.value}
    if isinstance(t, Const):
        return {"const": t.value}
    if isinstance(t, Plus):
        return {"plus": term_to_json(t.term), "offset": t.offset}
    if isinstance(t, Last):
        return {"last": True}
    raise SnlError(f"not a term: {t!r}")


def term_from_json(d):
    if "var" in d:
        return Var(d["var"])
    if "num" in d:
        return Num(int(d["num"]))
    if "const" in d:
        return Const(str(d["const"]))
    if "plus" in d:
        return Plus(term_from_json(d["plus"]), int(d["offset"]))
    if "last" in d:
        return Last()
    raise SnlError(f"bad term {d!r}")


def node_to_json(node):
    if isinstance(node, TAtom):
        return {"op": "T", "index": term_to_json(node.index), "elem": term_to_json(node.elem)}
    if isinstance(node, InRel):
        return {"op": "in", "rel": node.relation, "args": [term_to_json(a) for a in node.args]}
    if isinstance(node, Eq):
        return {"op": "eq", "args": [term_to_json(node.left), term_to_json(node.right)]}
    if isinstance(node, Le):
        return {"op": "le", "args": [term_to_json(node.left), term_to_json(node.right)]}
    if isinstance(node, Symb):
        return {"op": "symb", "elem": term_to_json(node.elem), "index": term_to_json(node.index), "symbol": node.symbol}
    if isinstance(node, Not):
        return {"op": "not", "arg": node_to_json(node.arg)}
    if isinstance(node, And):
        return {"op": "and", "args": [node_to_json(a) for a in node.args]}
    if isinstance(node, Or):
        return {"op": "or", "args": [node_to_json(a) for a in node.args]}
    if isinstance(node, Implies):
        return {"op": "implies", "args": [node_to_json(node.left), node_to_json(node.right)]}
    if isinstance(node, Quant):
        return {"op": node.quantifier, "var": node.var, "sort": node.sort, "domain": node.domain,
                "body": node_to_json(node.body)}
    raise SnlError(f"not a formula node: {node!r}")


def node_from_json(d):
    op = d.get("op")
    if op == "T":
        return TAtom(term_from_json(d["index"]), term_from_json(d["elem"]))
    if op == "in":
        return InRel(d["rel"], tuple(term_from_json(a) for a in d["args"]))
    if op in ("eq", "le"):
        a, b = (term_from_json(x) for x in d["args"])
        return Eq(a, b) if op == "eq" else Le(a, b)
    if op == "symb":
        return Symb(term_from_json(d["elem"]), term_from_json(d["index"]), d["symbol"])
    if op == "not":
        return Not(node_from_json(d["arg"]))
    if op in ("and", "or"):
        args = tuple(node_from_json(a) for a in d["args"])
        return And(args) if op == "and" else Or(args)
    if op == "implies":
        a, b = (node_from_json(x) for x in d["args"])
        return Implies(a, b)
    if op in QUANTS:
        return Quant(op, d["var"], d["sort"], d["domain"], node_from_json(d["body"]))
    raise SnlError(f"bad formula node {d!r}")


def formula_to_json(formula: SnlFormula) -> dict:
    return {
        "prefix": [{"q": b.quantifier, "var": b.var, "sort": b.sort, "domain": b.domain} for b in formula.prefix],
        "matrix": node_to_json(formula.matrix),
    }


def formula_from_json(d: dict) -> SnlFormula:
    prefix = tuple(Binder(b["q"], b["var"], b["sort"], b["domain"]) for b in d.get("prefix", []))
    return SnlFormula(prefix, node_from_json(d["matrix"]))


def model_to_json(model: SemanticModel) -> dict:
    return {
        "positions": model.positions,
        "universe": list(model.universe),
        "domains": {k: list(v) for k, v in sorted(model.domains.items()) if k != "U"},
        "relations": {k: sorted(list(t) for t in v) for k, v in sorted(model.relations.items())},
        "functional_t": model.functional_t,
        "metadata": dict(sorted(model.metadata.items())),
    }


def model_from_json(d: dict) -> SemanticModel:
    return SemanticModel(
        int(d["positions"]),
        d["universe"],
        d.get("domains", {}),
        d.get("relations", {}),
        bool(d.get("functional_t", True)),
        d.get("metadata", {}),
    )


def dumps(formula: SnlFormula, model: SemanticModel) -> str:
    return json.dumps({"formula": formula_to_json(formula), "model": model_to_json(model)}, sort_keys=True, indent=1)


def loads(text: str):
    d = json.loads(text)
    return formula_from_json(d["formula"]), model_from_json(d["model"])


# ---------------------------------------------------------------------------
# machines and the acceptance formula

@dataclass(frozen=True)
class Machine:
    """Deterministic machine with a read-only input tape and a small work tape.

    ``delta`` maps (state, input symbol, work symbol) to (state, written
    symbol, input move, work move).  The input symbol under the head on the
    last cell carries a ``$`` suffix so the machine can see the end of its
    input.  ``accept_head`` is "first" or "last": where the input head rests
    in the unique accepting configuration.
    """

    name: str
    states: tuple
    start: str
    accept: str
    gamma: tuple
    work_cells: int
    c: int
    delta: dict
    steps: object  # callable: input length -> number of configurations P
    accept_head: str = "first"

    @property
    def blank(self) -> str:
        return self.gamma[0]


def digits_needed(base: int, count: int) -> int:
    """Fewest base-``base`` digits that can name ``count`` values."""
    d = 0
    while base**d < count:
        d += 1
    return d


@dataclass(frozen=True)
class Packing:
    base: int
    head_digits: int
    whead_digits: int
    state_digits: int
    work_cells: int
    length: int


def packing_for(machine: Machine, m: int) -> Packing:
    b = len(machine.gamma)
    head = digits_needed(b, m)
    whead = digits_needed(b, machine.work_cells)
    state = digits_needed(b, len(machine.states))
    if whead + state + machine.work_cells > machine.c:
        raise SpaceBoundError(f"{machine.name}: state and work tape need more than c={machine.c} cells")
    return Packing(b, head, whead, state, machine.work_cells, head + machine.c)


def _digits(value: int, count: int, base: int) -> list:
    out = []
    for _ in range(count):
        value, r = divmod(value, base)
        out.append(r)
    return out[::-1]


def _undigits(ds) -> int:
    n = 0
    for d, base in ds:
        n = n * base + d
    return n


def encode_config(machine: Machine, pk: Packing, state: int, head: int, whead: int, work) -> str:
    g = machine.gamma
    cells = _digits(head, pk.head_digits, pk.base) + _digits(whead, pk.whead_digits, pk.base)
    cells += _digits(state, pk.state_digits, pk.base)
    cells += [g.index(s) for s in work]
    cells += [0] * (pk.length - len(cells))
    return "".join(g[d] for d in cells)


def decode_config(machine: Machine, pk: Packing, config: str, m: int):
    """(state, head, work head, work content), or None for a non-configuration."""
    g = machine.gamma
    ds = [g.index(ch) for ch in config]
    pos = 0

    def take(n):
        nonlocal pos
        part = ds[pos:pos + n]
        pos += n
        return _undigits((d, pk.base) for d in part)

    head = take(pk.head_digits)
    whead = take(pk.whead_digits)
    state = take(pk.state_digits)
    work = tuple(g[d] for d in ds[pos:pos + pk.work_cells])
    pos += pk.work_cells
    if any(ds[pos:]) or state >= len(machine.states) or head >= m or whead >= max(machine.work_cells, 1):
        return None
    return state, head, whead, work


def _read(x: str, head: int) -> str:
    return x[head] + ("$" if head == len(x) - 1 else "")


def step(machine: Machine, x: str, state: int, head: int, whead: int, work: tuple):
    """One transition, or None when the machine halts (accepting state loops)."""
    name = machine.states[state]
    if name == machine.accept:
        return state, head, whead, work
    wsym = work[whead] if machine.work_cells else machine.blank
    move = machine.delta.get((name, _read(x, head), wsym))
    if move is None:
        return None
    nstate, write, dh, dw = move
    work = list(work)
    if machine.work_cells:
        work[whead] = write
    return machine.states.index(nstate), head + dh, whead + dw, tuple(work)


def simulate(machine: Machine, x: str, max_steps: int = 10_000) -> bool:
    """Direct run; accepts iff the accepting state is reached with a blank work tape."""
    state, head, whead = machine.states.index(machine.start), 0, 0
    work = (machine.blank,) * machine.work_cells
    for _ in range(max_steps):
        if machine.states[state] == machine.accept:
            return all(s == machine.blank for s in work)
        nxt = step(machine, x, state, head, whead, work)
        if nxt is None:
            return False
        state, head, whead, work = nxt
        if not 0 <= head < len(x):
            raise SpaceBoundError("input head left the input")
    raise RuntimeError(f"{machine.name} did not halt within {max_steps} steps")


def acceptance_formula() -> SnlFormula:
    """∃v0 ∃v1 [T(1,v0) ∧ v0∈INIT ∧ T(last,v1) ∧ v1∈ACC ∧
    ∀i ∀v ∃w (T(i,v) → (v,w)∈Tran ∧ T(i+1,w))], with i over [P-1]."""
    v0, v1, i, v, w = (Var(n) for n in ("v0", "v1", "i", "v", "w"))
    step_clause = Quant(
        "forall", "i", "index", "I",
        Quant("forall", "v", "universe", "U",
              Quant("exists", "w", "universe", "U",
                    Implies(TAtom(i, v), And((InRel("Tran", (v, w)), TAtom(Plus(i, 1), w)))))),
    )
    matrix = And((
        TAtom(Num(1), v0),
        InRel("INIT", (v0,)),
        TAtom(Last(), v1),
        InRel("ACC", (v1,)),
        step_clause,
    ))
    prefix = (Binder("exists", "v0", "universe", "U"), Binder("exists", "v1", "universe", "U"))
    return SnlFormula(prefix, matrix)


def build_acceptance_formula(machine: Machine, x: str, m: Optional[int] = None):
    """Formula and model whose T encodes a run of ``machine`` on ``x``."""
    if not x:
        raise SnlError("input must be nonempty")
    m = len(x) if m is None else m
    if m < len(x):
        raise SnlError("size parameter must cover every input position")
    pk = packing_for(machine, m)
    universe = ["".join(t) for t in itertools.product(machine.gamma, repeat=pk.length)]
    tran = []
    for config in universe:
        decoded = decode_config(machine, pk, config, m)
        if decoded is None or decoded[1] >= len(x):
            continue
        nxt = step(machine, x, *decoded)
        if nxt is None:
            continue
        state, head, whead, work = nxt
        if not 0 <= head < len(x) or not 0 <= whead < max(machine.work_cells, 1):
            raise SpaceBoundError(f"{machine.name} leaves its tape bounds from {config}")
        tran.append((config, encode_config(machine, pk, state, head, whead, work)))
    blank_work = (machine.blank,) * machine.work_cells
    init = encode_config(machine, pk, machine.states.index(machine.start), 0, 0, blank_work)
    acc_head = 0 if machine.accept_head == "first" else len(x) - 1
    acc = encode_config(machine, pk, machine.states.index(machine.accept), acc_head, 0, blank_work)
    positions = machine.steps(len(x))
    model = SemanticModel(
        positions,
        universe,
        {"I": range(1, positions)},
        {"Tran": tran, "INIT": [(init,)], "ACC": [(acc,)]},
        functional_t=True,
        metadata={"machine": machine.name, "input": x, "m": m, "c": machine.c, "gamma": len(machine.gamma)},
    )
    return acceptance_formula(), model


def universe_bound(machine: Machine, m: int) -> int:
    """|Γ|^(c+1) * m."""
    return len(machine.gamma) ** (machine.c + 1) * m


TRIVIAL = Machine("trivial", ("acc",), "acc", "acc", ("0", "1"), 0, 1, {}, lambda n: 1)

FIRST_ONE = Machine(
    "first-one",
    ("start", "acc"),
    "start",
    "acc",
    ("0", "1"),
    0,
    1,
    {("start", "1", "0"): ("acc", "0", 0, 0), ("start", "1$", "0"): ("acc", "0", 0, 0)},
    lambda n: 2,
)

# accepts inputs with an odd number of 1s; the work cell holds the running parity
PARITY = Machine(
    "parity",
    ("scan", "acc"),
    "scan",
    "acc",
    ("0", "1"),
    1,
    2,
    {
        ("scan", "0", "0"): ("scan", "0", 1, 0),
        ("scan", "0", "1"): ("scan", "1", 1, 0),
        ("scan", "1", "0"): ("scan", "1", 1, 0),
        ("scan", "1", "1"): ("scan", "0", 1, 0),
        ("scan", "0$", "1"): ("acc", "0", 0, 0),
        ("scan", "1$", "0"): ("acc", "0", 0, 0),
    },
    lambda n: n + 1,
    accept_head="last",
)

TOY_MACHINES = {mach.name: mach for mach in (TRIVIAL, FIRST_ONE, PARITY)}
