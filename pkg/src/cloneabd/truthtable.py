"""Truth-table representation of Boolean functions and the predicates that
carve the lattice of clones, plus a brute-force closure oracle.

Row convention: the assignment (a1, ..., an) is stored at index
sum a_j * 2**(n-j), i.e. x1 is the most significant bit.  Index 0 comes
first in every serialized bitstring.  This convention is bit-exact and used
everywhere (files, closure, synthesis).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Sequence

from .errors import InputError

MAX_ARITY = 6
CLOSURE_MAX_ARITY = 4

INFINITE = math.inf


def row_index(args: Sequence[int]) -> int:
    """Index of the table row for an argument tuple (x1 most significant)."""
    idx = 0
    for a in args:
        idx = (idx << 1) | (a & 1)
    return idx


def row_assignment(index: int, arity: int) -> tuple[int, ...]:
    """Inverse of :func:`row_index`."""
    return tuple((index >> (arity - 1 - j)) & 1 for j in range(arity))


@dataclass(frozen=True)
class TruthTable:
    """A Boolean function of fixed arity as a 2^n bit vector."""

    name: str
    arity: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.arity <= MAX_ARITY:
            raise InputError(
                f"function {self.name!r}: arity {self.arity} outside 0..{MAX_ARITY}")
        if len(self.bits) != 1 << self.arity:
            raise InputError(
                f"function {self.name!r}: expected {1 << self.arity} table entries, "
                f"got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise InputError(f"function {self.name!r}: table entries must be 0 or 1")

    @classmethod
    def from_bitstring(cls, name: str, arity: int, bitstring: str) -> "TruthTable":
        if any(c not in "01" for c in bitstring):
            raise InputError(f"function {name!r}: bitstring must be over 0/1")
        return cls(name, arity, tuple(int(c) for c in bitstring))

    @classmethod
    def from_callable(cls, name: str, arity: int,
                      fn: Callable[..., int]) -> "TruthTable":
        bits = tuple(fn(*row_assignment(i, arity)) & 1 for i in range(1 << arity))
        return cls(name, arity, bits)

    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __call__(self, *args: int) -> int:
        return eval_fn(self, args)

    def renamed(self, name: str) -> "TruthTable":
        return TruthTable(name, self.arity, self.bits)

    def same_function(self, other: "TruthTable") -> bool:
        """Table equality, ignoring the name."""
        return self.arity == other.arity and self.bits == other.bits

    def preimage(self, c: int) -> list[tuple[int, ...]]:
        """All assignments mapped to c."""
        return [row_assignment(i, self.arity)
                for i, b in enumerate(self.bits) if b == c]


class FunctionSet:
    """An ordered collection of named truth tables (the connective set B)."""

    def __init__(self, functions: Iterable[TruthTable]):
        self.functions: list[TruthTable] = list(functions)
        self.by_name: dict[str, TruthTable] = {}
        for f in self.functions:
            if f.name in self.by_name:
                raise InputError(f"duplicate function name {f.name!r}")
            self.by_name[f.name] = f

    def __iter__(self) -> Iterator[TruthTable]:
        return iter(self.functions)

    def __len__(self) -> int:
        return len(self.functions)

    def __contains__(self, name: str) -> bool:
        return name in self.by_name

    def get(self, name: str) -> TruthTable:
        try:
            return self.by_name[name]
        except KeyError:
            raise InputError(f"unknown function {name!r}") from None

    def extended(self, *extra: TruthTable) -> "FunctionSet":
        return FunctionSet(self.functions + list(extra))

    def without(self, *names: str) -> "FunctionSet":
        drop = set(names)
        return FunctionSet(f for f in self.functions if f.name not in drop)

    def __repr__(self) -> str:
        return "FunctionSet({%s})" % ", ".join(f.name for f in self.functions)


@dataclass(frozen=True)
class PropertyRecord:
    """The per-function predicates that define the named clones."""

    reproduces0: bool
    reproduces1: bool
    monotone: bool
    self_dual: bool
    affine: bool
    is_disjunction: bool
    is_conjunction: bool
    is_unary: bool
    is_projection_or_constant: bool

    @property
    def shape(self) -> str:
        if self.is_projection_or_constant:
            return "projection-or-constant"
        if self.is_unary:
            return "essentially-unary"
        if self.is_disjunction:
            return "disjunction"
        if self.is_conjunction:
            return "conjunction"
        return "general"


def eval_fn(f: TruthTable, args: Sequence[int]) -> int:
    """Table lookup under the row convention."""
    if len(args) != f.arity:
        raise InputError(
            f"function {f.name!r} expects {f.arity} arguments, got {len(args)}")
    return f.bits[row_index(args)]


def dual_fn(f: TruthTable) -> TruthTable:
    """dual(f)(a1,...,an) = not f(not a1, ..., not an)."""
    full = (1 << f.arity) - 1
    bits = tuple(1 - f.bits[full ^ i] for i in range(1 << f.arity))
    return TruthTable(f"dual_{f.name}", f.arity, bits)


def _essential_positions(f: TruthTable) -> list[int]:
    """Positions (0-based) the function actually depends on."""
    essential = []
    n = f.arity
    for j in range(n):
        flip = 1 << (n - 1 - j)
        if any(f.bits[i] != f.bits[i ^ flip] for i in range(1 << n)):
            essential.append(j)
    return essential


def _is_disjunction(f: TruthTable) -> bool:
    """f equals a disjunction of a variable subset, or a constant."""
    n = f.arity
    if all(b == f.bits[0] for b in f.bits):
        return True
    if f.bits[0] != 0:
        return False
    support = [j for j in range(n) if f.bits[1 << (n - 1 - j)] == 1]
    mask = 0
    for j in support:
        mask |= 1 << (n - 1 - j)
    return all(f.bits[i] == (1 if i & mask else 0) for i in range(1 << n))


def _is_affine(f: TruthTable) -> bool:
    """f equals the XOR of a variable subset plus a constant.

    Coefficients are derived from f(0,...,0) and the unit vectors, then
    verified on every row.
    """
    n = f.arity
    c = f.bits[0]
    coeff_mask = 0
    for j in range(n):
        unit = 1 << (n - 1 - j)
        if f.bits[unit] != c:
            coeff_mask |= unit
    for i in range(1 << n):
        parity = bin(i & coeff_mask).count("1") & 1
        if f.bits[i] != c ^ parity:
            return False
    return True


def function_properties(f: TruthTable) -> PropertyRecord:
    n = f.arity
    size = 1 << n

    monotone = True
    for i in range(size):
        for j in range(n):
            flip = 1 << (n - 1 - j)
            if not i & flip and f.bits[i] > f.bits[i | flip]:
                monotone = False
                break
        if not monotone:
            break

    dual = dual_fn(f)
    essential = _essential_positions(f)
    is_unary = len(essential) <= 1
    is_proj_or_const = False
    if not essential:
        is_proj_or_const = True  # constant
    elif len(essential) == 1:
        j = essential[0]
        flip = 1 << (n - 1 - j)
        is_proj_or_const = all(f.bits[i] == (1 if i & flip else 0)
                               for i in range(size))

    return PropertyRecord(
        reproduces0=f.bits[0] == 0,
        reproduces1=f.bits[size - 1] == 1,
        monotone=monotone,
        self_dual=f.bits == dual.bits,
        affine=_is_affine(f),
        is_disjunction=_is_disjunction(f),
        is_conjunction=_is_disjunction(dual),
        is_unary=is_unary,
        is_projection_or_constant=is_proj_or_const,
    )


def separating_degree(f: TruthTable, c: int) -> float:
    """Largest k >= 2 such that every size-k subset of f^{-1}(c) shares a
    coordinate fixed to c; INFINITE when the whole preimage does (the fully
    c-separating case, vacuously including an empty preimage); 1 when even
    size-2 subsets fail.
    """
    pre = f.preimage(c)
    n = f.arity

    def common_coordinate(rows: Sequence[tuple[int, ...]]) -> bool:
        return any(all(r[i] == c for r in rows) for i in range(n)) or not rows

    if common_coordinate(pre):
        return INFINITE
    # Here |pre| >= 1 and no coordinate separates the whole preimage, so any
    # witnessed degree is < |pre|.  The property is downward closed in k.
    best = 1
    for k in range(2, len(pre)):
        if all(common_coordinate(sub) for sub in combinations(pre, k)):
            best = k
        else:
            break
    return best


def compose(f: TruthTable, children_bits: Sequence[int], m: int) -> int:
    """Pointwise composition: the arity-m table (as an int bit mask, row i in
    bit i) of f applied to arity-m tables given as int masks."""
    out = 0
    for row in range(1 << m):
        args = tuple((cb >> row) & 1 for cb in children_bits)
        if f.bits[row_index(args)]:
            out |= 1 << row
    return out


def projection_mask(j: int, m: int) -> int:
    """Arity-m table of the j-th projection (0-based) as an int mask."""
    out = 0
    for row in range(1 << m):
        if row_assignment(row, m)[j]:
            out |= 1 << row
    return out


def mask_to_table(mask: int, m: int, name: str | None = None) -> TruthTable:
    bits = tuple((mask >> row) & 1 for row in range(1 << m))
    if name is None:
        name = "fn_" + "".join(str(b) for b in bits)
    return TruthTable(name, m, bits)


def table_to_mask(f: TruthTable) -> int:
    mask = 0
    for row, b in enumerate(f.bits):
        if b:
            mask |= 1 << row
    return mask


def clone_closure_masks(fns: FunctionSet, m: int,
                        budget: int | None = None) -> set[int]:
    """All arity-m members of [B] as int table masks (fixpoint iteration)."""
    if m > CLOSURE_MAX_ARITY:
        raise InputError(
            f"closure arity {m} exceeds oracle cap {CLOSURE_MAX_ARITY}")
    known: set[int] = {projection_mask(j, m) for j in range(m)}
    frontier: set[int] = set(known)
    while frontier:
        settled = sorted(known)
        new: set[int] = set()
        for f in fns:
            k = f.arity
            if k == 0:
                # arity-0 constant lifted to arity m
                mask = ((1 << (1 << m)) - 1) if f.bits[0] else 0
                if mask not in known:
                    new.add(mask)
                continue
            for children in product(settled, repeat=k):
                # skip tuples already explored in an earlier round
                if not any(c in frontier for c in children):
                    continue
                mask = compose(f, children, m)
                if mask not in known:
                    new.add(mask)
        known |= new
        frontier = new
        if budget is not None and len(known) > budget:
            from .errors import ResourceBudgetError
            raise ResourceBudgetError(
                f"closure exceeded budget of {budget} tables")
    return known


def clone_closure(fns: FunctionSet, m: int) -> list[TruthTable]:
    """The arity-m members of [B], deterministically ordered by table mask."""
    masks = clone_closure_masks(fns, m)
    return [mask_to_table(mask, m) for mask in sorted(masks)]


def parse_function_line(line: str) -> TruthTable:
    """Parse a `fn <name> <arity> <bitstring>` line (the `fn` keyword is
    optional)."""
    parts = line.split()
    if parts and parts[0] == "fn":
        parts = parts[1:]
    if len(parts) != 3 or not parts[1].isdigit():
        raise InputError(
            f"expected `fn <name> <arity> <bitstring>`, got {line!r}")
    return TruthTable.from_bitstring(parts[0], int(parts[1]), parts[2])


def parse_function_set(text: str) -> FunctionSet:
    """Parse a file of `fn` lines; blanks and `#` comments are skipped."""
    fns = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fns.append(parse_function_line(line))
    return FunctionSet(fns)


# Frequently used tables.
def _tt(name: str, arity: int, s: str) -> TruthTable:
    return TruthTable.from_bitstring(name, arity, s)


CONST0 = _tt("const0", 0, "0")
CONST1 = _tt("const1", 0, "1")
IDENTITY = _tt("id", 1, "01")
NOT = _tt("not", 1, "10")
AND = _tt("and", 2, "0001")
OR = _tt("or", 2, "0111")
XOR = _tt("xor", 2, "0110")
XNOR = _tt("xnor", 2, "1001")
IMPLIES = _tt("implies", 2, "1101")
ANDNOT = _tt("andnot", 2, "0010")  # x and not y
XOR3 = TruthTable.from_callable("xor3", 3, lambda x, y, z: x ^ y ^ z)
MAJ3 = TruthTable.from_callable("maj3", 3,
                                lambda x, y, z: (x & y) | (x & z) | (y & z))
