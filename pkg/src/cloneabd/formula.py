"""Formula ASTs over a declared connective set: parsing, printing,
evaluation, substitution, balanced-tree rewriting, connective replacement and
CNF gate encoding.

Concrete syntax is s-expressions: ``formula := var | '0' | '1' |
'(' fname formula+ ')'``.  Variables match ``[a-zA-Z_][a-zA-Z0-9_']*``.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .errors import InputError
from .truthtable import FunctionSet, TruthTable, eval_fn, row_assignment

VAR_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_']*")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class App:
    fn: TruthTable
    args: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if len(self.args) != self.fn.arity:
            raise InputError(
                f"connective {self.fn.name!r} expects {self.fn.arity} "
                f"arguments, got {len(self.args)}")


Formula = Union[Var, Const, App]


@dataclass(frozen=True)
class Literal:
    var: str
    positive: bool

    def negated(self) -> "Literal":
        return Literal(self.var, not self.positive)

    def __str__(self) -> str:
        return self.var if self.positive else "!" + self.var


def parse_literal(text: str) -> Literal:
    positive = True
    if text.startswith("!"):
        positive = False
        text = text[1:]
    if not VAR_RE.fullmatch(text):
        raise InputError(f"bad literal syntax: {text!r}")
    return Literal(text, positive)


# ---------------------------------------------------------------------------
# Parsing / printing

def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        else:
            m = re.match(r"[^\s()]+", text[i:])
            tokens.append((m.group(0), i))
            i += m.end()
    return tokens


def parse_formula(text: str, fns: FunctionSet) -> Formula:
    tokens = _tokenize(text)
    pos = 0

    def fail(msg: str, at: int) -> None:
        raise InputError(f"parse error at position {at}: {msg}")

    def parse_one() -> Formula:
        nonlocal pos
        if pos >= len(tokens):
            fail("unexpected end of input", len(text))
        tok, at = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens):
                fail("expected connective name", at)
            name, nat = tokens[pos]
            pos += 1
            if name in "()":
                fail("expected connective name", nat)
            if name not in fns:
                fail(f"unknown connective {name!r}", nat)
            fn = fns.get(name)
            args = []
            while pos < len(tokens) and tokens[pos][0] != ")":
                args.append(parse_one())
            if pos >= len(tokens):
                fail("missing ')'", len(text))
            pos += 1  # consume ')'
            if len(args) != fn.arity:
                fail(f"connective {name!r} expects {fn.arity} arguments, "
                     f"got {len(args)}", at)
            return App(fn, tuple(args))
        if tok == ")":
            fail("unexpected ')'", at)
        if tok in ("0", "1"):
            return Const(int(tok))
        if not VAR_RE.fullmatch(tok):
            fail(f"bad variable name {tok!r}", at)
        return Var(tok)

    result = parse_one()
    if pos != len(tokens):
        fail("trailing input", tokens[pos][1])
    return result


def render_formula(phi: Formula) -> str:
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, Const):
        return str(phi.value)
    return "(" + " ".join([phi.fn.name] + [render_formula(a) for a in phi.args]) + ")"


# ---------------------------------------------------------------------------
# Semantics

def eval_formula(phi: Formula, sigma: Mapping[str, int]) -> int:
    if isinstance(phi, Var):
        if phi.name not in sigma:
            raise InputError(f"unassigned variable {phi.name!r}")
        return sigma[phi.name] & 1
    if isinstance(phi, Const):
        return phi.value
    return eval_fn(phi.fn, [eval_formula(a, sigma) for a in phi.args])


def substitute(phi: Formula, alpha: Formula, beta: Formula) -> Formula:
    """Replace all occurrences of alpha (a Var or Const) with beta."""
    if phi == alpha:
        return beta
    if isinstance(phi, App):
        return App(phi.fn, tuple(substitute(a, alpha, beta) for a in phi.args))
    return phi


def substitute_map(phi: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Simultaneously replace variables by formulas."""
    if isinstance(phi, Var):
        return mapping.get(phi.name, phi)
    if isinstance(phi, App):
        return App(phi.fn, tuple(substitute_map(a, mapping) for a in phi.args))
    return phi


def free_vars(phi: Formula | Iterable[Formula]) -> list[str]:
    """Sorted variable names of a formula or an iterable of formulas."""
    seen: set[str] = set()

    def walk(f: Formula) -> None:
        if isinstance(f, Var):
            seen.add(f.name)
        elif isinstance(f, App):
            for a in f.args:
                walk(a)

    if isinstance(phi, (Var, Const, App)):
        walk(phi)
    else:
        for f in phi:
            walk(f)
    return sorted(seen)


def formula_size(phi: Formula) -> int:
    if isinstance(phi, App):
        return 1 + sum(formula_size(a) for a in phi.args)
    return 1


def formula_depth(phi: Formula) -> int:
    if isinstance(phi, App):
        return 1 + max((formula_depth(a) for a in phi.args), default=0)
    return 0


def table_of(phi: Formula, variables: Sequence[str] | None = None) -> TruthTable:
    """Truth table of a formula over the given (sorted) variable list."""
    if variables is None:
        variables = free_vars(phi)
    n = len(variables)
    bits = []
    for i in range(1 << n):
        sigma = dict(zip(variables, row_assignment(i, n)))
        bits.append(eval_formula(phi, sigma))
    return TruthTable("anon", n, tuple(bits))


# ---------------------------------------------------------------------------
# Balanced trees and connective replacement

def _check_associative(op: TruthTable) -> None:
    k = op.arity
    if k == 2:
        # op(op(x,y),z) == op(x,op(y,z))
        for i in range(8):
            x, y, z = row_assignment(i, 3)
            if op(op(x, y), z) != op(x, op(y, z)):
                raise InputError(f"connective {op.name!r} is not associative")
    elif k == 3:
        # regrouping identity for ternary chains
        for i in range(32):
            a, b, c, d, e = row_assignment(i, 5)
            if op(op(a, b, c), d, e) != op(a, b, op(c, d, e)):
                raise InputError(
                    f"connective {op.name!r} does not regroup associatively")
    else:
        raise InputError(
            f"balanced trees support arity 2 or 3, not {k} ({op.name!r})")


def _split_sizes(n: int, k: int) -> list[int]:
    """Split n leaves into k parts, each congruent to 1 mod (k-1), balanced."""
    sizes = [1] * k
    rest = n - k
    step = k - 1
    i = 0
    while rest > 0:
        sizes[i % k] += step
        rest -= step
        i += 1
    return sizes


def balanced_tree(op: TruthTable, operands: Sequence[Formula],
                  pad: Formula | None = None) -> Formula:
    """Combine operands under an associative op into a log-depth tree,
    equivalent to the left-nested chain.

    A k-ary tree needs 1 mod (k-1) operands; when ``pad`` (the op's identity
    element) is given, the operand list is padded to fit.
    """
    if not operands:
        raise InputError("balanced_tree needs at least one operand")
    _check_associative(op)
    k = op.arity
    ops = list(operands)
    while len(ops) > 1 and (len(ops) - 1) % (k - 1) != 0:
        if pad is None:
            raise InputError(
                f"{len(ops)} operands cannot fill a {k}-ary tree without padding")
        ops.append(pad)

    def build(chunk: list[Formula]) -> Formula:
        if len(chunk) == 1:
            return chunk[0]
        parts = []
        start = 0
        for size in _split_sizes(len(chunk), k):
            parts.append(build(chunk[start:start + size]))
            start += size
        return App(op, tuple(parts))

    return build(ops)


def replace_connectives(phi: Formula,
                        repr_map: Mapping[str, Formula]) -> Formula:
    """Rewrite every connective by its template formula (over x1..xk).

    Templates typically come from representation synthesis.  Callers should
    balance chains first; a warning is emitted when the input depth exceeds
    2*ceil(log2(size)) + 1, since template substitution then risks a large
    size blow-up.
    """
    size = formula_size(phi)
    depth = formula_depth(phi)
    if depth > 2 * math.ceil(math.log2(max(size, 2))) + 1:
        warnings.warn(
            f"replace_connectives: depth {depth} formula of size {size}; "
            "balance the tree first to avoid size explosion",
            stacklevel=2)

    def rewrite(f: Formula) -> Formula:
        if not isinstance(f, App):
            return f
        args = [rewrite(a) for a in f.args]
        if f.fn.name not in repr_map:
            raise InputError(
                f"no replacement template for connective {f.fn.name!r}")
        template = repr_map[f.fn.name]
        mapping = {f"x{i + 1}": arg for i, arg in enumerate(args)}
        return substitute_map(template, mapping)

    return rewrite(phi)


def identity_templates(fns: FunctionSet) -> dict[str, Formula]:
    """Template map leaving every connective of fns unchanged."""
    return {f.name: App(f, tuple(Var(f"x{i + 1}") for i in range(f.arity)))
            for f in fns}


# ---------------------------------------------------------------------------
# CNF gate encoding

@dataclass
class CnfEncoding:
    clauses: list[list[int]]
    var_of: dict[str, int]
    num_vars: int

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def lit(self, literal: Literal) -> int:
        v = self.var_of.get(literal.var)
        if v is None:
            v = self.new_var()
            self.var_of[literal.var] = v
        return v if literal.positive else -v


def encode_cnf(formulas: Iterable[Formula],
               assumptions: Iterable[Literal] = (),
               variables: Iterable[str] = ()) -> CnfEncoding:
    """Tseitin-style gate encoding of a conjunction of formulas plus
    assumption literals.

    One fresh variable per internal node; per gate, one clause per table row
    (full equivalence), so satisfying assignments project bijectively onto
    the original variables.  Extra ``variables`` are allocated even when they
    do not occur, so projections and model counts range over them too.
    """
    enc = CnfEncoding([], {}, 0)
    for v in sorted(set(variables)):
        enc.lit(Literal(v, True))

    def gate(phi: Formula) -> int:
        """Returns a CNF literal equivalent to phi."""
        if isinstance(phi, Var):
            return enc.lit(Literal(phi.name, True))
        if isinstance(phi, Const):
            g = enc.new_var()
            enc.clauses.append([g if phi.value else -g])
            return g
        child = [gate(a) for a in phi.args]
        g = enc.new_var()
        k = phi.fn.arity
        for row in range(1 << k):
            assignment = row_assignment(row, k)
            out = phi.fn.bits[row]
            clause = [-child[j] if assignment[j] else child[j]
                      for j in range(k)]
            clause.append(g if out else -g)
            enc.clauses.append(clause)
        return g

    for phi in formulas:
        enc.clauses.append([gate(phi)])
    for lit in assumptions:
        enc.clauses.append([enc.lit(lit)])
    return enc
