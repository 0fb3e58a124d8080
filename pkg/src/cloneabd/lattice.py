"""Identification of the clone generated by a connective set, lattice
inclusion queries, base tables, complexity classification and representation
synthesis.

Clone names follow the classical table of all Boolean clones; parametric
families carry a separation degree and serialize as e.g. ``S02^2``.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass

from .errors import (InputError, NoRepresentationError, ResourceBudgetError,
                     UnsupportedError)
from .formula import App, Formula, Var, render_formula, table_of
from .truthtable import (AND, ANDNOT, CLOSURE_MAX_ARITY, CONST0, CONST1,
                         IDENTITY, IMPLIES, INFINITE, MAJ3, NOT, OR, XNOR,
                         XOR, XOR3, FunctionSet, TruthTable, compose,
                         dual_fn, function_properties, projection_mask,
                         separating_degree)

Degree = float  # int >= 1, or INFINITE

PARAMETRIC_FAMILIES = ("S0", "S1", "S00", "S01", "S02", "S10", "S11", "S12")

NONPARAMETRIC_FAMILIES = (
    "BF", "R0", "R1", "R2", "M", "M0", "M1", "M2",
    "S0", "S1", "S00", "S01", "S02", "S10", "S11", "S12",
    "D", "D1", "D2", "L", "L0", "L1", "L2", "L3",
    "V", "V0", "V1", "V2", "E", "E0", "E1", "E2",
    "N", "N2", "I", "I0", "I1", "I2",
)


@dataclass(frozen=True)
class CloneId:
    family: str
    degree: int | None = None

    def __post_init__(self) -> None:
        if self.family not in NONPARAMETRIC_FAMILIES:
            raise InputError(f"unknown clone family {self.family!r}")
        if self.degree is not None:
            if self.family not in PARAMETRIC_FAMILIES:
                raise InputError(
                    f"clone {self.family} takes no degree parameter")
            if self.degree < 2:
                raise InputError("parametric degree must be >= 2")

    @property
    def name(self) -> str:
        if self.degree is None:
            return self.family
        return f"{self.family}^{self.degree}"

    def __str__(self) -> str:
        return self.name


_CLONE_NAME_RE = re.compile(r"([A-Z]+[0-9]*)(?:\^([0-9]+))?$")


def parse_clone_name(text: str) -> CloneId:
    m = _CLONE_NAME_RE.match(text)
    if not m:
        raise InputError(f"bad clone name {text!r}")
    degree = int(m.group(2)) if m.group(2) else None
    return CloneId(m.group(1), degree)


@dataclass(frozen=True)
class CloneSignature:
    """Aggregated properties of a function set (conjunction / minimum of the
    per-function predicates)."""

    all_reproduce0: bool
    all_reproduce1: bool
    all_monotone: bool
    all_self_dual: bool
    all_affine: bool
    all_disjunction: bool
    all_conjunction: bool
    all_unary: bool
    all_projection_or_constant: bool
    sep0_degree: Degree
    sep1_degree: Degree


def signature_of(fns: FunctionSet) -> CloneSignature:
    props = [function_properties(f) for f in fns]
    return CloneSignature(
        all_reproduce0=all(p.reproduces0 for p in props),
        all_reproduce1=all(p.reproduces1 for p in props),
        all_monotone=all(p.monotone for p in props),
        all_self_dual=all(p.self_dual for p in props),
        all_affine=all(p.affine for p in props),
        all_disjunction=all(p.is_disjunction for p in props),
        all_conjunction=all(p.is_conjunction for p in props),
        all_unary=all(p.is_unary for p in props),
        all_projection_or_constant=all(p.is_projection_or_constant
                                       for p in props),
        sep0_degree=min((separating_degree(f, 0) for f in fns),
                        default=INFINITE),
        sep1_degree=min((separating_degree(f, 1) for f in fns),
                        default=INFINITE),
    )


# ---------------------------------------------------------------------------
# Defining constraints per clone (the intersection definitions of the
# classical clone table; the N2 row uses N ∩ D, matching the base {¬x}).

@dataclass(frozen=True)
class _Constraints:
    r0: bool = False
    r1: bool = False
    m: bool = False
    d: bool = False
    l: bool = False
    v: bool = False
    e: bool = False
    n: bool = False
    i: bool = False
    s0: Degree = 1  # membership requires sep0 >= s0 (1 = no constraint)
    s1: Degree = 1


_BOOL_FIELDS = ("r0", "r1", "m", "d", "l", "v", "e", "n", "i")

# family -> (bool constraint names, uses s0 degree, uses s1 degree);
# parametric families get the concrete degree at CloneId level, the
# non-parametric S-families mean "fully separating" (degree INFINITE).
_FAMILY_DEFS: dict[str, tuple[tuple[str, ...], str | None]] = {
    "BF": ((), None),
    "R0": (("r0",), None),
    "R1": (("r1",), None),
    "R2": (("r0", "r1"), None),
    "M": (("m",), None),
    "M0": (("m", "r0"), None),
    "M1": (("m", "r1"), None),
    "M2": (("m", "r0", "r1"), None),
    "S0": ((), "s0"),
    "S1": ((), "s1"),
    "S02": (("r0", "r1"), "s0"),
    "S01": (("m",), "s0"),
    "S00": (("r0", "r1", "m"), "s0"),
    "S12": (("r0", "r1"), "s1"),
    "S11": (("m",), "s1"),
    "S10": (("r0", "r1", "m"), "s1"),
    "D": (("d",), None),
    "D1": (("d", "r0", "r1"), None),
    "D2": (("d", "m"), None),
    "L": (("l",), None),
    "L0": (("l", "r0"), None),
    "L1": (("l", "r1"), None),
    "L2": (("l", "r0", "r1"), None),
    "L3": (("l", "d"), None),
    "V": (("v",), None),
    "V0": (("v", "r0"), None),
    "V1": (("v", "r1"), None),
    "V2": (("v", "r0", "r1"), None),
    "E": (("e",), None),
    "E0": (("e", "r0"), None),
    "E1": (("e", "r1"), None),
    "E2": (("e", "r0", "r1"), None),
    "N": (("n",), None),
    "N2": (("n", "d"), None),
    "I": (("i",), None),
    "I0": (("i", "r0"), None),
    "I1": (("i", "r1"), None),
    "I2": (("i", "r0", "r1"), None),
}


def constraints_of(clone: CloneId) -> _Constraints:
    bools, sep = _FAMILY_DEFS[clone.family]
    kwargs: dict = {b: True for b in bools}
    if sep is not None:
        degree: Degree = clone.degree if clone.degree is not None else INFINITE
        kwargs[sep] = degree
    return _Constraints(**kwargs)


def _sig_satisfies(sig: CloneSignature, cons: _Constraints) -> bool:
    """Does every function of a set with this signature lie in the clone?"""
    checks = {
        "r0": sig.all_reproduce0, "r1": sig.all_reproduce1,
        "m": sig.all_monotone, "d": sig.all_self_dual, "l": sig.all_affine,
        "v": sig.all_disjunction, "e": sig.all_conjunction,
        "n": sig.all_unary, "i": sig.all_projection_or_constant,
    }
    if any(getattr(cons, name) and not checks[name] for name in _BOOL_FIELDS):
        return False
    return sig.sep0_degree >= cons.s0 and sig.sep1_degree >= cons.s1


def function_in_clone(f: TruthTable, clone: CloneId) -> bool:
    return _sig_satisfies(signature_of(FunctionSet([f])), constraints_of(clone))


def set_in_clone(fns: FunctionSet, clone: CloneId) -> bool:
    return _sig_satisfies(signature_of(fns), constraints_of(clone))


# ---------------------------------------------------------------------------
# Semantic closure of a constraint record: add every property that provably
# holds for all members of the described class.  Used for inclusion tests.

def _close_constraints(cons: _Constraints) -> _Constraints:
    c = {name: getattr(cons, name) for name in _BOOL_FIELDS}
    s0, s1 = cons.s0, cons.s1
    changed = True
    while changed:
        changed = False

        def set_bool(name: str) -> None:
            nonlocal changed
            if not c[name]:
                c[name] = True
                changed = True

        if c["i"]:
            for name in ("n", "v", "e", "m", "l"):
                set_bool(name)
        if c["n"]:
            set_bool("l")
        if c["v"] or c["e"]:
            set_bool("m")
        if s0 >= 2:
            set_bool("r1")
        if s1 >= 2:
            set_bool("r0")
        if c["d"] and (c["m"] or c["r0"] or c["r1"]):
            set_bool("r0")
            set_bool("r1")
        if c["d"] and c["m"] and (s0 < 2 or s1 < 2):
            s0, s1 = max(s0, 2), max(s1, 2)
            changed = True
        if c["l"] and c["r0"] and c["r1"]:
            set_bool("d")
        if ((c["l"] and c["m"]) or (c["v"] and c["e"]) or (c["n"] and c["m"])
                or (c["n"] and c["r0"]) or (c["n"] and c["r1"])
                or (c["l"] and c["v"]) or (c["l"] and c["e"])):
            set_bool("i")
        if (c["v"] and c["d"]) or (c["e"] and c["d"]):
            set_bool("i")
            set_bool("r0")
            set_bool("r1")
        if c["v"] and c["r1"] and s0 != INFINITE:
            s0 = INFINITE
            changed = True
        if c["e"] and c["r0"] and s1 != INFINITE:
            s1 = INFINITE
            changed = True
    return _Constraints(s0=s0, s1=s1, **c)


def clone_record_leq(c1: CloneId, c2: CloneId) -> bool:
    """Inclusion by closing c1's defining constraints under known
    implications.  Sound for all encoded clones; used directly when degrees
    exceed the tabulation cap."""
    strong = _close_constraints(constraints_of(c1))
    weak = constraints_of(c2)
    if any(getattr(weak, name) and not getattr(strong, name)
           for name in _BOOL_FIELDS):
        return False
    return strong.s0 >= weak.s0 and strong.s1 >= weak.s1


def clone_leq(c1: CloneId, c2: CloneId) -> bool:
    """True iff clone c1 is included in clone c2 in the lattice.

    Since membership in a clone of the table is a pointwise property, [B1] is
    included in C2 exactly when every base function of C1 lies in C2.
    """
    if c1.degree is not None and c1.degree > 4:
        return clone_record_leq(c1, c2)
    return set_in_clone(base_of(c1), c2)


def identify_clone(fns: FunctionSet) -> CloneId:
    """The smallest clone containing the function set, resolved to a name."""
    sig = signature_of(fns)
    candidates = []
    for family in NONPARAMETRIC_FAMILIES:
        clone = CloneId(family)
        if _sig_satisfies(sig, constraints_of(clone)):
            candidates.append(clone)
    for family in PARAMETRIC_FAMILIES:
        # the degree relevant to the family's separation side
        sep = sig.sep0_degree if family.startswith("S0") else sig.sep1_degree
        if 2 <= sep < INFINITE:
            clone = CloneId(family, int(sep))
            if _sig_satisfies(sig, constraints_of(clone)):
                candidates.append(clone)
    best = candidates[0]
    for clone in candidates[1:]:
        if clone_leq(clone, best):
            best = clone
    # the lattice guarantees a unique minimum; check it
    assert all(clone_leq(best, c) for c in candidates), \
        f"no unique minimal clone among {[c.name for c in candidates]}"
    return best


# ---------------------------------------------------------------------------
# Bases (the Base column of the classical clone table)

def h_fn(n: int) -> TruthTable:
    """h_n: the (n+1)-ary function OR_i AND_{j != i} x_j  (h_2 = MAJ3)."""
    if n + 1 > 6:
        raise UnsupportedError(f"h_{n} needs arity {n + 1} > 6")

    def fn(*args: int) -> int:
        return 1 if sum(args) >= n else 0

    return TruthTable.from_callable(f"h{n}", n + 1, fn)


def _tt_lambda(name: str, arity: int, fn) -> TruthTable:
    return TruthTable.from_callable(name, arity, fn)


_OR_AND_NOT_Z = _tt_lambda("or_and_not", 3, lambda x, y, z: x | (y & (1 - z)))
_AND_OR_NOT_Z = _tt_lambda("and_or_not", 3, lambda x, y, z: x & (y | (1 - z)))
_OR_AND = _tt_lambda("or_and", 3, lambda x, y, z: x | (y & z))
_AND_OR = _tt_lambda("and_or", 3, lambda x, y, z: x & (y | z))
_D_BASE = _tt_lambda("dbase", 3, lambda x, y, z:
                     (x & (1 - y)) | (x & (1 - z)) | ((1 - y) & (1 - z)))
_D1_BASE = _tt_lambda("d1base", 3, lambda x, y, z:
                      (x & y) | (x & (1 - z)) | (y & (1 - z)))
_XOR3_NOT = _tt_lambda("xnor3", 3, lambda x, y, z: x ^ y ^ z ^ 1)
_AND_XNOR = _tt_lambda("and_xnor", 3, lambda x, y, z: x & (y ^ z ^ 1))


def base_of(clone: CloneId) -> FunctionSet:
    """A finite base generating the clone; parametric degrees up to 4."""
    fam, deg = clone.family, clone.degree
    if deg is not None and deg > 4:
        raise UnsupportedError(
            f"base of {clone.name}: degree {deg} exceeds the arity cap")

    def hn() -> TruthTable:
        assert deg is not None
        return h_fn(deg)

    def dual_hn() -> TruthTable:
        return dual_fn(h_fn(deg)).renamed(f"dual_h{deg}")

    fixed: dict[str, list[TruthTable]] = {
        "BF": [AND, NOT],
        "R0": [AND, XOR],
        "R1": [OR, XNOR],
        "R2": [OR, _AND_XNOR],
        "M": [OR, AND, CONST0, CONST1],
        "M0": [OR, AND, CONST0],
        "M1": [OR, AND, CONST1],
        "M2": [OR, AND],
        "D": [_D_BASE],
        "D1": [_D1_BASE],
        "D2": [MAJ3.renamed("maj3")],
        "L": [XOR, CONST1],
        "L0": [XOR],
        "L1": [XNOR],
        "L2": [XOR3],
        "L3": [_XOR3_NOT],
        "V": [OR, CONST0, CONST1],
        "V0": [OR, CONST0],
        "V1": [OR, CONST1],
        "V2": [OR],
        "E": [AND, CONST0, CONST1],
        "E0": [AND, CONST0],
        "E1": [AND, CONST1],
        "E2": [AND],
        "N": [NOT, CONST0, CONST1],
        "N2": [NOT],
        "I": [IDENTITY, CONST0, CONST1],
        "I0": [IDENTITY, CONST0],
        "I1": [IDENTITY, CONST1],
        "I2": [IDENTITY],
    }
    if fam in fixed and deg is None:
        return FunctionSet(fixed[fam])
    if deg is None:
        limit: dict[str, list[TruthTable]] = {
            "S0": [IMPLIES],
            "S1": [ANDNOT],
            "S02": [_OR_AND_NOT_Z],
            "S12": [_AND_OR_NOT_Z],
            "S01": [_OR_AND, CONST1],
            "S11": [_AND_OR, CONST0],
            "S00": [_OR_AND],
            "S10": [_AND_OR],
        }
        return FunctionSet(limit[fam])
    parametric: dict[str, list[TruthTable]] = {
        "S0": [IMPLIES, dual_hn()],
        "S1": [ANDNOT, hn()],
        "S02": [_OR_AND_NOT_Z, dual_hn()],
        "S12": [_AND_OR_NOT_Z, hn()],
        "S01": [dual_hn(), CONST1],
        "S11": [hn(), CONST0],
        "S00": [_OR_AND, dual_hn()],
        "S10": [_AND_OR, hn()],
    }
    return FunctionSet(parametric[fam])


def all_clone_ids(parametric_degrees: tuple[int, ...] = (2, 3)) -> list[CloneId]:
    """Every encoded clone name, parametric families at the given degrees."""
    out = [CloneId(f) for f in NONPARAMETRIC_FAMILIES]
    for fam in PARAMETRIC_FAMILIES:
        for deg in parametric_degrees:
            out.append(CloneId(fam, deg))
    return out


# ---------------------------------------------------------------------------
# Complexity classification

IN_L = "IN_L"
P_PARITYL_HARD = "P_PARITYL_HARD"
NP_COMPLETE = "NP_COMPLETE"
SIGMA2P_COMPLETE = "SIGMA2P_COMPLETE"
FP = "FP"
SHARP_P_COMPLETE = "SHARP_P_COMPLETE"
SHARP_CONP_COMPLETE = "SHARP_CONP_COMPLETE"

VARIANTS = ("Q", "C", "T", "F")

_S02 = CloneId("S02")
_S12 = CloneId("S12")
_S00 = CloneId("S00")
_S10 = CloneId("S10")
_D1 = CloneId("D1")
_D2 = CloneId("D2")
_V2 = CloneId("V2")
_L2 = CloneId("L2")
_M = CloneId("M")
_L = CloneId("L")


def classify_clone_decision(clone: CloneId, variant: str) -> str:
    if variant not in VARIANTS:
        raise InputError(f"unknown variant {variant!r}")

    def above(lower: CloneId) -> bool:
        return clone_leq(lower, clone)

    def below(upper: CloneId) -> bool:
        return clone_leq(clone, upper)

    if variant in ("Q", "C"):
        if above(_S02) or above(_S12) or above(_D1):
            return SIGMA2P_COMPLETE
        if (above(_S00) or above(_S10) or above(_D2)) and below(_M):
            return NP_COMPLETE
    elif variant == "T":
        if above(_S02) or above(_S12) or above(_D1):
            return SIGMA2P_COMPLETE
        if (above(_V2) or above(_S10) or above(_D2)) and below(_M):
            return NP_COMPLETE
    else:  # F
        if above(_S00) or above(_S10) or above(_D2):
            return SIGMA2P_COMPLETE
    if above(_L2) and below(_L):
        return P_PARITYL_HARD
    return IN_L


def classify_decision(fns: FunctionSet, variant: str) -> str:
    return classify_clone_decision(identify_clone(fns), variant)


def classify_clone_counting(clone: CloneId) -> str:
    def above(lower: CloneId) -> bool:
        return clone_leq(lower, clone)

    if above(_S02) or above(_S12) or above(_D1):
        return SHARP_CONP_COMPLETE
    if (above(_V2) or above(_S10) or above(_D2)) and clone_leq(clone, _M):
        return SHARP_P_COMPLETE
    return FP


def classify_counting(fns: FunctionSet) -> str:
    return classify_clone_counting(identify_clone(fns))


# ---------------------------------------------------------------------------
# Representation synthesis via closure with witness formulas

def synthesize_representation(fns: FunctionSet, target: TruthTable,
                              budget: int = 200000) -> Formula:
    """A formula over the given connectives computing the target table.

    Uniform-cost search over derived tables: witnesses are settled smallest
    first (size, then rendered text), so the first representation found is
    the canonical one.  Variables are named x1..xn positionally.
    """
    m = target.arity
    if m > CLOSURE_MAX_ARITY:
        raise UnsupportedError(
            f"synthesis capped at arity {CLOSURE_MAX_ARITY}, target has {m}")
    target_mask = 0
    for row, b in enumerate(target.bits):
        if b:
            target_mask |= 1 << row

    settled: dict[int, Formula] = {}
    heap: list[tuple[int, str, int, Formula]] = []

    def push(mask: int, phi: Formula, size: int) -> None:
        heapq.heappush(heap, (size, render_formula(phi), mask, phi))

    for j in range(m):
        push(projection_mask(j, m), Var(f"x{j + 1}"), 1)
    for f in fns:
        if f.arity == 0:
            cmask = ((1 << (1 << m)) - 1) if f.bits[0] else 0
            push(cmask, App(f, ()), 1)
    expansions = 0
    while heap:
        size, _, mask, phi = heapq.heappop(heap)
        if mask in settled:
            continue
        settled[mask] = phi
        if mask == target_mask:
            check = table_of(phi, [f"x{j + 1}" for j in range(m)])
            assert check.bits == target.bits, "synthesized witness re-check failed"
            return phi
        order = sorted(settled)
        for f in fns:
            k = f.arity
            if k == 0:
                continue  # seeded up front
            # tuples containing the newly settled mask at least once
            for combo in _tuples_with(order, mask, k):
                expansions += 1
                if expansions > budget:
                    raise ResourceBudgetError(
                        f"synthesis budget {budget} exceeded")
                new_mask = compose(f, combo, m)
                if new_mask in settled:
                    continue
                args = tuple(settled[c] for c in combo)
                node = App(f, args)
                push(new_mask, node, 1 + sum(_size(a) for a in args))
    raise NoRepresentationError(
        f"{target.name!r} is not generated by the given connectives at "
        f"arity {m}")


def _size(phi: Formula) -> int:
    if isinstance(phi, App):
        return 1 + sum(_size(a) for a in phi.args)
    return 1


def _tuples_with(order: list[int], required: int, k: int):
    """All k-tuples over `order` containing `required` at least once."""
    from itertools import product as _product
    for combo in _product(order, repeat=k):
        if required in combo:
            yield combo


def representation_map(fns: FunctionSet, targets: list[TruthTable],
                       budget: int = 200000) -> dict[str, Formula]:
    """Templates (over x1..xk) for each target connective, for use with
    replace_connectives."""
    return {t.name: synthesize_representation(fns, t, budget) for t in targets}
