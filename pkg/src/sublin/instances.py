"""Parameterized problem instances: 2CNF formulas, digraphs, 2-variable LP
systems, 1-way NFAs, ordered-concatenation knapsack and hot-potato matrices.

All instances are frozen dataclasses and use 1-based indices for variables,
vertices, rows, columns and NFA states.  Each family has a line-oriented
text format (see ``serialize``/``parse_instance``).
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Union

import numpy as np

__all__ = [
    "Literal",
    "Cnf2Formula",
    "Digraph",
    "LpSystem",
    "NfaSpec",
    "UockInstance",
    "HppInstance",
    "SizeParamKind",
    "InstanceError",
    "ParseError",
    "parse_instance",
    "serialize",
    "size_param",
    "encoding_length",
    "applicable_kinds",
    "normalize_cnf",
    "validate",
    "gen_random",
    "family_of",
]


class InstanceError(ValueError):
    """An instance violates an invariant of its family."""


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    positive: bool = True

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit > 0)

    def to_int(self) -> int:
        return self.var if self.positive else -self.var

    def __neg__(self) -> "Literal":
        return Literal(self.var, not self.positive)

    def __str__(self):
        return ("" if self.positive else "¬") + f"x{self.var}"


# ---------------------------------------------------------------------------
# 2CNF

@dataclass(frozen=True)
class Cnf2Formula:
    """Conjunction of clauses with one or two literals.

    Literals are signed ints (DIMACS convention); ``Literal`` converts.
    """

    num_vars: int
    clauses: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))

    @property
    def m_vbl(self) -> int:
        return self.num_vars

    @property
    def m_cls(self) -> int:
        return len(self.clauses)

    @cached_property
    def occurrences(self) -> tuple:
        """occ[v] = occurrences of v and ¬v over all clauses; index 0 unused."""
        occ = [0] * (self.num_vars + 1)
        for clause in self.clauses:
            for lit in clause:
                if 1 <= abs(lit) <= self.num_vars:
                    occ[abs(lit)] += 1
        return tuple(occ)

    def occ(self, v: int) -> int:
        return self.occurrences[v]

    def max_occurrence(self) -> int:
        return max(self.occurrences[1:], default=0)

    def is_satisfied_by(self, assignment) -> bool:
        """``assignment`` maps var -> 0/1 (dict or 1-based sequence with a pad)."""
        def value(lit):
            b = assignment[abs(lit)]
            return bool(b) if lit > 0 else not b
        return all(any(value(lit) for lit in clause) for clause in self.clauses)


# ---------------------------------------------------------------------------
# digraphs

@dataclass(frozen=True)
class Digraph:
    num_vertices: int
    edges: tuple = ()
    source: int = 1
    target: int = 1

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))

    @property
    def m_ver(self) -> int:
        return self.num_vertices

    @property
    def m_edg(self) -> int:
        return len(self.edges)

    @cached_property
    def _out(self) -> tuple:
        out = [[] for _ in range(self.num_vertices + 1)]
        for u, v in self.edges:
            out[u].append(v)
        return tuple(tuple(sorted(o)) for o in out)

    @cached_property
    def _in(self) -> tuple:
        inc = [[] for _ in range(self.num_vertices + 1)]
        for u, v in self.edges:
            inc[v].append(u)
        return tuple(tuple(sorted(i)) for i in inc)

    def out_neighbors(self, v: int) -> tuple:
        """Out-neighbours in ascending vertex order."""
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple:
        return self._in[v]

    def degree(self, v: int) -> int:
        return len(self._out[v]) + len(self._in[v])

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(1, self.num_vertices + 1)), default=0)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.num_vertices, self.num_vertices), dtype=bool)
        for u, v in self.edges:
            a[u - 1, v - 1] = True
        return a


# ---------------------------------------------------------------------------
# {0,1} linear programs with two variables per row

def _as_fraction(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class LpSystem:
    """Ax >= b over x in {0,1}^n.

    ``rows[r]`` is a tuple of ``(col, coefficient)`` pairs sorted by column
    with nonzero coefficients only; ``bounds[r]`` is b_r.
    """

    num_rows: int
    num_cols: int
    rows: tuple = ()
    bounds: tuple = ()

    def __post_init__(self):
        rows = tuple(
            tuple(sorted((int(c), _as_fraction(a)) for c, a in row if a != 0))
            for row in self.rows
        )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "bounds", tuple(_as_fraction(b) for b in self.bounds))

    @property
    def m_row(self) -> int:
        return self.num_rows

    @property
    def m_col(self) -> int:
        return self.num_cols

    def column_counts(self) -> list:
        counts = [0] * (self.num_cols + 1)
        for row in self.rows:
            for c, _ in row:
                if 1 <= c <= self.num_cols:
                    counts[c] += 1
        return counts

    def max_column_count(self) -> int:
        return max(self.column_counts()[1:], default=0)

    def row_value(self, r: int, x) -> Fraction:
        """Left-hand side of row ``r`` under the 0-based vector ``x``."""
        return sum((a * x[c - 1] for c, a in self.rows[r]), Fraction(0))

    def is_satisfied_by(self, x) -> bool:
        return all(self.row_value(r, x) >= self.bounds[r] for r in range(self.num_rows))

    def to_arrays(self):
        """Integer (A, b) with each row scaled by the lcm of its denominators."""
        a = np.zeros((self.num_rows, self.num_cols), dtype=np.int64)
        b = np.zeros(self.num_rows, dtype=np.int64)
        for r, (row, bound) in enumerate(zip(self.rows, self.bounds)):
            scale = math.lcm(bound.denominator, *(c.denominator for _, c in row))
            for c, coef in row:
                a[r, c - 1] += int(coef * scale)
            b[r] = int(bound * scale)
        return a, b


# ---------------------------------------------------------------------------
# one-way NFAs

@dataclass(frozen=True)
class NfaSpec:
    """λ-free 1nfa with states 1..num_states and symbols 0..alphabet_size-1.

    ``length`` is the requested input length n (the unary 1^n parameter).
    """

    num_states: int
    alphabet_size: int
    length: int
    initial: int = 1
    finals: frozenset = frozenset()
    transitions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(
            self, "transitions", tuple(sorted(set((int(q), int(a), int(p)) for q, a, p in self.transitions)))
        )

    @property
    def m_nfa(self) -> int:
        return self.num_states * self.alphabet_size * self.length

    @cached_property
    def _delta(self) -> dict:
        table = {}
        for q, a, p in self.transitions:
            table.setdefault((q, a), []).append(p)
        return {key: tuple(sorted(v)) for key, v in table.items()}

    def delta(self, state: int, symbol: int) -> tuple:
        return self._delta.get((state, symbol), ())

    def step(self, states: Iterable[int], symbol: int) -> frozenset:
        return frozenset(p for q in states for p in self.delta(q, symbol))

    def accepts(self, word) -> bool:
        """Prefix acceptance: some run is in a final state after j <= |word| symbols."""
        current = frozenset([self.initial])
        if current & self.finals:
            return True
        for a in word:
            current = self.step(current, a)
            if current & self.finals:
                return True
            if not current:
                return False
        return False


# ---------------------------------------------------------------------------
# unique ordered concatenation knapsack

UOCK_ALPHABET = frozenset("01#")


def count_occurrences(text: str, pattern: str) -> int:
    """Overlapping occurrence count; the empty pattern occurs len(text)+1 times."""
    if not pattern:
        return len(text) + 1
    count, start = 0, text.find(pattern)
    while start != -1:
        count += 1
        start = text.find(pattern, start + 1)
    return count


@dataclass(frozen=True)
class UockInstance:
    target: str
    pieces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    @property
    def m_elm(self) -> int:
        return len(self.pieces)

    def uniqueness_violations(self) -> list:
        out = []
        for i, piece in enumerate(self.pieces, 1):
            c = count_occurrences(self.target, piece)
            if c > 1:
                out.append(f"piece {i} {piece!r} occurs {c} times in target")
        return out


# ---------------------------------------------------------------------------
# hot potato

@dataclass(frozen=True)
class HppInstance:
    size: int
    matrix: tuple
    length: int
    start: int = 1

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(int(a) for a in row) for row in self.matrix))

    @property
    def m_col(self) -> int:
        return self.size

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.matrix, dtype=np.int64).reshape(self.size, self.size)
        a.setflags(write=False)
        return a

    def measure(self, sequence) -> int:
        return sum(self.matrix[a - 1][b - 1] for a, b in zip(sequence, sequence[1:]))


Instance = Union[Cnf2Formula, Digraph, LpSystem, NfaSpec, UockInstance, HppInstance]

_FAMILIES = {
    Cnf2Formula: "cnf",
    Digraph: "dstcon",
    LpSystem: "lp",
    NfaSpec: "nfa",
    UockInstance: "uock",
    HppInstance: "hpp",
}


def family_of(instance) -> str:
    try:
        return _FAMILIES[type(instance)]
    except KeyError:
        raise TypeError(f"not a problem instance: {type(instance).__name__}") from None


# ---------------------------------------------------------------------------
# size parameters

class SizeParamKind(str, enum.Enum):
    m_vbl = "m_vbl"
    m_cls = "m_cls"
    m_ver = "m_ver"
    m_edg = "m_edg"
    m_row = "m_row"
    m_col = "m_col"
    m_nfa = "m_nfa"
    m_elm = "m_elm"
    bitlength = "bitlength"


_KINDS = {
    "cnf": {"m_vbl": lambda x: x.num_vars, "m_cls": lambda x: len(x.clauses)},
    "dstcon": {"m_ver": lambda x: x.num_vertices, "m_edg": lambda x: len(x.edges)},
    "lp": {"m_row": lambda x: x.num_rows, "m_col": lambda x: x.num_cols},
    "nfa": {"m_nfa": lambda x: x.m_nfa},
    "uock": {"m_elm": lambda x: len(x.pieces)},
    "hpp": {"m_col": lambda x: x.size},
}


def applicable_kinds(instance) -> list:
    return [SizeParamKind(k) for k in _KINDS[family_of(instance)]] + [SizeParamKind.bitlength]


def encoding_length(instance) -> int:
    """|x|: characters of the canonical text plus one cell per declared index.

    Counts are written in binary in the text formats, so the declared
    universe (variables, vertices, rows + columns, the NFA transition table
    and its unary 1^n) is charged separately, as in a standard encoding that
    lists every element.
    """
    n = len(serialize(instance))
    fam = family_of(instance)
    if fam == "cnf":
        n += instance.num_vars
    elif fam == "dstcon":
        n += instance.num_vertices
    elif fam == "lp":
        n += instance.num_rows + instance.num_cols
    elif fam == "nfa":
        n += instance.num_states * instance.alphabet_size + instance.length
    return n


def size_param(instance, kind) -> int:
    kind = SizeParamKind(kind)
    if kind is SizeParamKind.bitlength:
        return encoding_length(instance)
    table = _KINDS[family_of(instance)]
    if kind.value not in table:
        raise ValueError(f"{kind.value} is not a size parameter of {family_of(instance)} instances")
    return table[kind.value](instance)


# ---------------------------------------------------------------------------
# serialization

def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def serialize(instance) -> str:
    fam = family_of(instance)
    lines = []
    if fam == "cnf":
        lines.append(f"p cnf {instance.num_vars} {len(instance.clauses)}")
        lines += [" ".join(str(l) for l in c) + " 0" for c in instance.clauses]
    elif fam == "dstcon":
        g = instance
        lines.append(f"p dstcon {g.num_vertices} {len(g.edges)} {g.source} {g.target}")
        lines += [f"e {u} {v}" for u, v in g.edges]
    elif fam == "lp":
        lines.append(f"p lp {instance.num_rows} {instance.num_cols}")
        for row, b in zip(instance.rows, instance.bounds):
            terms = " ".join(f"{c}:{_frac(a)}" for c, a in row)
            lines.append(f"r {terms} >= {_frac(b)}" if terms else f"r >= {_frac(b)}")
    elif fam == "nfa":
        a = instance
        lines.append(f"p nfa {a.num_states} {a.alphabet_size} {a.length} {a.initial}")
        lines += [f"f {q}" for q in sorted(a.finals)]
        lines += [f"t {q} {s} {p}" for q, s, p in a.transitions]
    elif fam == "uock":
        lines = [instance.target, str(len(instance.pieces)), *instance.pieces]
    elif fam == "hpp":
        h = instance
        lines.append(f"p hpp {h.size} {h.length} {h.start}")
        lines += [" ".join(map(str, row)) for row in h.matrix]
    return "\n".join(lines) + "\n"


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno) from None


def _rational(tok: str, lineno: int) -> Fraction:
    p, _, q = tok.partition("/")
    num = _int(p, lineno)
    den = _int(q, lineno) if q else 1
    if den <= 0:
        raise ParseError(f"denominator must be positive in {tok!r}", lineno)
    return Fraction(num, den)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line.split()


def _header(lines, tag, arity):
    try:
        lineno, toks = next(lines)
    except StopIteration:
        raise ParseError("empty input") from None
    if toks[:2] != ["p", tag] or len(toks) != arity + 2:
        raise ParseError(f"expected header 'p {tag}' with {arity} fields", lineno)
    return lineno, [_int(t, lineno) for t in toks[2:]]


def _parse_cnf(text):
    lines = _content_lines(text)
    hl, (n, m) = _header(lines, "cnf", 2)
    clauses = []
    for lineno, toks in lines:
        lits = [_int(t, lineno) for t in toks]
        if not lits or lits[-1] != 0 or 0 in lits[:-1]:
            raise ParseError("clause must be literals terminated by a single 0", lineno)
        lits = lits[:-1]
        if not 1 <= len(lits) <= 2:
            raise ParseError(f"clause width {len(lits)} (must be 1 or 2)", lineno)
        bad = [l for l in lits if abs(l) > n]
        if bad:
            raise ParseError(f"literal {bad[0]} out of range 1..{n}", lineno)
        clauses.append(tuple(lits))
    if len(clauses) != m:
        raise ParseError(f"header declares {m} clauses, found {len(clauses)}", hl)
    return Cnf2Formula(n, clauses)


def _parse_dstcon(text):
    lines = _content_lines(text)
    hl, (n, m, s, t) = _header(lines, "dstcon", 4)
    edges = []
    for lineno, toks in lines:
        if toks[0] != "e" or len(toks) != 3:
            raise ParseError("expected 'e <u> <v>'", lineno)
        edges.append((_int(toks[1], lineno), _int(toks[2], lineno)))
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}", hl)
    return Digraph(n, edges, s, t)


def _parse_lp(text):
    lines = _content_lines(text)
    hl, (m, n) = _header(lines, "lp", 2)
    rows, bounds = [], []
    for lineno, toks in lines:
        if toks[0] != "r" or len(toks) < 3 or toks[-2] != ">=":
            raise ParseError("expected 'r <col>:<p>/<q> ... >= <p>/<q>'", lineno)
        row = []
        for term in toks[1:-2]:
            col, sep, coef = term.partition(":")
            if not sep:
                raise ParseError(f"malformed term {term!r}", lineno)
            row.append((_int(col, lineno), _rational(coef, lineno)))
        rows.append(row)
        bounds.append(_rational(toks[-1], lineno))
    if len(rows) != m:
        raise ParseError(f"header declares {m} rows, found {len(rows)}", hl)
    return LpSystem(m, n, rows, bounds)


def _parse_nfa(text):
    lines = _content_lines(text)
    _, (q, sigma, n, q0) = _header(lines, "nfa", 4)
    finals, trans = [], []
    for lineno, toks in lines:
        if toks[0] == "f" and len(toks) == 2:
            finals.append(_int(toks[1], lineno))
        elif toks[0] == "t" and len(toks) == 4:
            trans.append(tuple(_int(t, lineno) for t in toks[1:]))
        else:
            raise ParseError("expected 'f <q>' or 't <q> <a> <q2>'", lineno)
    return NfaSpec(q, sigma, n, q0, frozenset(finals), tuple(trans))


def _parse_uock(text):
    # no comments here: '#' is a symbol of the alphabet
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2:
        raise ParseError("expected target line and piece count")
    n = _int(lines[1].strip(), 2)
    if len(lines) != n + 2:
        raise ParseError(f"piece count {n} but {len(lines) - 2} piece lines", 2)
    return UockInstance(lines[0], tuple(lines[2:]))


def _parse_hpp(text):
    lines = _content_lines(text)
    hl, (size, d, start) = _header(lines, "hpp", 3)
    matrix = []
    for lineno, toks in lines:
        row = [_int(t, lineno) for t in toks]
        if len(row) != size:
            raise ParseError(f"row has {len(row)} entries, expected {size}", lineno)
        matrix.append(row)
    if len(matrix) != size:
        raise ParseError(f"expected {size} matrix rows, found {len(matrix)}", hl)
    return HppInstance(size, matrix, d, start)


_PARSERS = {
    "cnf": _parse_cnf,
    "dstcon": _parse_dstcon,
    "lp": _parse_lp,
    "nfa": _parse_nfa,
    "uock": _parse_uock,
    "hpp": _parse_hpp,
}


def parse_instance(format_tag: str, text: str):
    """Parse and validate one instance; raises ParseError or InstanceError."""
    try:
        parser = _PARSERS[format_tag]
    except KeyError:
        raise ValueError(f"unknown format {format_tag!r}; one of {sorted(_PARSERS)}") from None
    instance = parser(text)
    problems = validate(instance)
    if problems:
        raise InstanceError("; ".join(problems))
    return instance


# ---------------------------------------------------------------------------
# validation

def validate(instance, *, degree_cap=None, occurrence_cap=None, column_cap=None) -> list:
    """Return the list of invariant violations (empty when valid).

    The caps select the restricted families: ``degree_cap=3`` checks 3DSTCON,
    ``occurrence_cap=3`` checks 2SAT_3, ``column_cap=k`` checks LP_{2,k}.
    """
    fam = family_of(instance)
    out = []
    if fam == "cnf":
        if instance.num_vars < 0:
            out.append("negative variable count")
        for i, clause in enumerate(instance.clauses, 1):
            if len(clause) not in (1, 2):
                out.append(f"clause {i} has width {len(clause)}")
            for lit in clause:
                if lit == 0 or abs(lit) > instance.num_vars:
                    out.append(f"clause {i}: literal {lit} out of range")
        if occurrence_cap is not None:
            for v in range(1, instance.num_vars + 1):
                if instance.occ(v) > occurrence_cap:
                    out.append(f"occ(x{v})={instance.occ(v)}>{occurrence_cap}")
    elif fam == "dstcon":
        g = instance
        n = g.num_vertices
        if n < 1:
            out.append("digraph needs at least one vertex")
        for name, v in (("s", g.source), ("t", g.target)):
            if not 1 <= v <= n:
                out.append(f"{name}={v} not in 1..{n}")
        bad = [e for e in g.edges if not (1 <= e[0] <= n and 1 <= e[1] <= n)]
        out += [f"edge {e} out of range" for e in bad]
        if len(set(g.edges)) != len(g.edges):
            out.append("duplicate edges")
        if degree_cap is not None and not bad:
            for v in range(1, n + 1):
                if g.degree(v) > degree_cap:
                    out.append(f"degree({v})={g.degree(v)}>{degree_cap}")
    elif fam == "lp":
        lp = instance
        if len(lp.rows) != lp.num_rows or len(lp.bounds) != lp.num_rows:
            out.append("row count does not match header")
        for r, row in enumerate(lp.rows, 1):
            cols = [c for c, _ in row]
            if len(cols) > 2:
                out.append(f"row {r} has {len(cols)} nonzeros")
            if len(set(cols)) != len(cols):
                out.append(f"row {r} repeats a column")
            out += [f"row {r}: column {c} out of range" for c in cols if not 1 <= c <= lp.num_cols]
        if column_cap is not None:
            for c, k in enumerate(lp.column_counts()):
                if c and k > column_cap:
                    out.append(f"column {c} has {k}>{column_cap} nonzeros")
    elif fam == "nfa":
        a = instance
        if a.num_states < 1 or a.alphabet_size < 1 or a.length < 0:
            out.append("nfa needs >=1 state, >=1 symbol and length >= 0")
        if not 1 <= a.initial <= a.num_states:
            out.append(f"initial state {a.initial} out of range")
        out += [f"final state {q} out of range" for q in sorted(a.finals) if not 1 <= q <= a.num_states]
        for q, s, p in a.transitions:
            if not (1 <= q <= a.num_states and 1 <= p <= a.num_states and 0 <= s < a.alphabet_size):
                out.append(f"transition {(q, s, p)} out of range")
    elif fam == "uock":
        chars = set(instance.target).union(*map(set, instance.pieces))
        if not chars <= UOCK_ALPHABET:
            out.append(f"symbols outside {{0,1,#}}: {sorted(chars - UOCK_ALPHABET)}")
        out += instance.uniqueness_violations()
    elif fam == "hpp":
        h = instance
        n = h.size
        if n < 1:
            out.append("matrix dimension must be >= 1")
        if len(h.matrix) != n or any(len(r) != n for r in h.matrix):
            out.append("matrix is not N x N")
        elif any(not 1 <= a <= n for r in h.matrix for a in r):
            out.append(f"matrix entries must lie in 1..{n}")
        if not 1 <= h.length <= n:
            out.append(f"d={h.length} not in 1..{n}")
        if not 1 <= h.start <= n:
            out.append(f"start={h.start} not in 1..{n}")
    return out


# ---------------------------------------------------------------------------
# normalization

def normalize_cnf(formula: Cnf2Formula) -> Cnf2Formula:
    """Drop repeated literals and duplicate clauses, renumber used variables densely.

    Tautologies are kept.  Variable order is preserved.
    """
    seen = set()
    kept = []
    for clause in formula.clauses:
        lits = tuple(dict.fromkeys(clause))
        key = frozenset(lits)
        if key not in seen:
            seen.add(key)
            kept.append(lits)
    used = sorted({abs(l) for c in kept for l in c})
    new = {v: i for i, v in enumerate(used, 1)}
    clauses = [tuple(new[abs(l)] * (1 if l > 0 else -1) for l in c) for c in kept]
    return Cnf2Formula(len(used), clauses)


# ---------------------------------------------------------------------------
# random generation

def gen_random(family: str, params: dict | None = None, seed: int = 0):
    """Deterministic random instance of ``family``.

    Families and their knobs (defaults in brackets):

    * ``2sat``: n [8], m [n], k occurrence cap [None], unit_prob [0.1]
    * ``dstcon``: n [8], m [n], degree_cap [None], self_loops [False]
    * ``lp``: rows [n], cols [6], k column cap [3], coef [2]
    * ``nfa``: states [4], symbols [2], length [5], density [0.3], finals [1]
    * ``uock``: tokens [6], pieces [6], noise [2]
    * ``hpp``: n [4], d [n], start [1]

    All randomness comes from ``random.Random(seed)`` (Mersenne Twister).
    """
    params = dict(params or {})
    rng = random.Random(seed)
    try:
        gen = _GENERATORS[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; one of {sorted(_GENERATORS)}") from None
    return gen(rng, **params)


def _gen_2sat(rng, n=8, m=None, k=None, unit_prob=0.1):
    m = n if m is None else m
    if m and n < 1:
        raise ValueError("clauses requested over zero variables")
    if k is not None and k * n < m:
        raise ValueError(f"occurrence cap {k} over {n} variables cannot hold {m} clauses")
    cap = [math.inf if k is None else k] * (n + 1)
    clauses = []
    for i in range(m):
        remaining = m - i - 1
        free = [v for v in range(1, n + 1) if cap[v] > 0]
        spare = sum(min(c, 2 * m) for c in cap[1:])
        width = 2 if rng.random() >= unit_prob else 1
        if len(free) < 2 or spare - 2 < remaining:
            width = 1
        vs = rng.sample(free, width)
        for v in vs:
            cap[v] -= 1
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return Cnf2Formula(n, clauses)


def _gen_dstcon(rng, n=8, m=None, degree_cap=None, self_loops=False):
    m = n if m is None else m
    if n < 1:
        raise ValueError("digraph needs at least one vertex")
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if self_loops or u != v]
    cap = math.inf if degree_cap is None else degree_cap
    if m > len(pairs) or 2 * m > cap * n:
        raise ValueError(f"cannot place {m} edges on {n} vertices with degree cap {degree_cap}")
    for _ in range(100):
        edges = _place_edges(rng, n, m, pairs, cap)
        if edges is not None:
            s, t = rng.randint(1, n), rng.randint(1, n)
            return Digraph(n, sorted(edges), s, t)
    raise ValueError(f"failed to place {m} edges with degree cap {degree_cap}")


def _place_edges(rng, n, m, pairs, cap):
    pair_set = set(pairs)
    deg = [0] * (n + 1)
    edges = set()

    def apply(remove=(), add=()):
        delta = {}
        for u, v in remove:
            delta[u] = delta.get(u, 0) - 1
            delta[v] = delta.get(v, 0) - 1
        for u, v in add:
            delta[u] = delta.get(u, 0) + 1
            delta[v] = delta.get(v, 0) + 1
        if any(deg[v] + d > cap for v, d in delta.items()):
            return False
        for v, d in delta.items():
            deg[v] += d
        edges.difference_update(remove)
        edges.update(add)
        return True

    order = pairs[:]
    rng.shuffle(order)
    for e in order:
        if len(edges) == m:
            break
        apply(add=[e])
    # switch repair: swap an edge (x, y) for (x, b) and (a, y) where a, b have room
    for _ in range(50 * (m + 1)):
        if len(edges) == m:
            break
        spare = [v for v in range(1, n + 1) if deg[v] < cap]
        a, b = rng.choice(spare), rng.choice(spare)
        if (a, b) in pair_set and (a, b) not in edges and apply(add=[(a, b)]):
            continue
        if not edges:
            continue
        x, y = rng.choice(sorted(edges))
        new = [(x, b), (a, y)]
        if new[0] == new[1] or (x, y) in new:
            continue
        if all(e in pair_set and e not in edges for e in new):
            apply(remove=[(x, y)], add=new)
    return edges if len(edges) == m else None


def _gen_lp(rng, rows=None, cols=6, k=3, coef=2):
    rows = cols if rows is None else rows
    if rows and (cols < 1 or k < 1):
        raise ValueError("rows requested with no column capacity")
    if k is not None and rows > k * cols:
        raise ValueError(f"column cap {k} over {cols} columns cannot hold {rows} rows")
    cap = [k] * (cols + 1)
    out_rows, bounds = [], []
    choices = [Fraction(c) for c in range(-coef, coef + 1) if c] + [Fraction(1, 2), Fraction(-1, 2)]
    for i in range(rows):
        free = [c for c in range(1, cols + 1) if cap[c] > 0]
        width = 2 if len(free) >= 2 and rng.random() < 0.75 and sum(cap[1:]) - 2 >= rows - i - 1 else 1
        support = sorted(rng.sample(free, width))
        for c in support:
            cap[c] -= 1
        row = [(c, rng.choice(choices)) for c in support]
        lo = sum(min(a, 0) for _, a in row)
        hi = sum(max(a, 0) for _, a in row)
        bounds.append(Fraction(rng.randint(int(math.floor(lo)) - 1, int(math.ceil(hi)) + 1), rng.choice([1, 1, 2])))
        out_rows.append(row)
    return LpSystem(rows, cols, out_rows, bounds)


def _gen_nfa(rng, states=4, symbols=2, length=5, density=0.3, finals=1):
    trans = [
        (q, a, p)
        for q in range(1, states + 1)
        for a in range(symbols)
        for p in range(1, states + 1)
        if rng.random() < density
    ]
    f = frozenset(rng.sample(range(1, states + 1), min(finals, states)))
    return NfaSpec(states, symbols, length, rng.randint(1, states), f, trans)


def _gen_uock(rng, tokens=6, pieces=6, noise=2):
    if tokens < 1:
        raise ValueError("need at least one token")
    width = max(1, tokens.bit_length())
    tok = [format(i, f"0{width}b") + "#" for i in range(1, tokens + 1)]
    target = "".join(tok)
    out = []
    for _ in range(pieces):
        i = rng.randrange(tokens)
        j = rng.randrange(i, min(tokens, i + 3))
        out.append("".join(tok[i : j + 1]))
    for _ in range(noise):
        # "##" never occurs in the target, so these pieces are vacuously unique
        out.append("##" + "".join(rng.choice("01") for _ in range(rng.randint(0, 3))))
    rng.shuffle(out)
    return UockInstance(target, tuple(out))


def _gen_hpp(rng, n=4, d=None, start=None):
    d = n if d is None else d
    start = rng.randint(1, n) if start is None else start
    matrix = [[rng.randint(1, n) for _ in range(n)] for _ in range(n)]
    return HppInstance(n, matrix, d, start)


_GENERATORS = {
    "2sat": _gen_2sat,
    "dstcon": _gen_dstcon,
    "lp": _gen_lp,
    "nfa": _gen_nfa,
    "uock": _gen_uock,
    "hpp": _gen_hpp,
}
