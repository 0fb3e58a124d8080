"""Abduction instances, explanation checking, the brute-force oracle, the
constant-elimination transforms and the instance file format.

An instance is (Gamma, A, psi): a knowledge base of formulas over a declared
connective set, a set of hypothesis variables, and a manifestation which is a
literal (variant Q), a clause (C), a term (T) or a formula (F).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence, Union

from .errors import InputError, ResourceBudgetError
from .formula import (App, Const, Formula, Literal, Var, encode_cnf,
                      free_vars, parse_formula, parse_literal, render_formula,
                      substitute_map)
from .sat import sat_solve
from .truthtable import NOT, OR, FunctionSet, TruthTable

ORACLE_MAX_HYP = 16
ORACLE_MAX_VARS = 20

Manifestation = Union[Literal, tuple[Literal, ...], Formula]


@dataclass(frozen=True)
class AbductionInstance:
    fns: FunctionSet
    kb: tuple[Formula, ...]
    hypotheses: tuple[str, ...]  # sorted variable names
    variant: str  # "Q" | "C" | "T" | "F"
    manifestation: Manifestation

    def __post_init__(self) -> None:
        if self.variant not in ("Q", "C", "T", "F"):
            raise InputError(f"unknown variant {self.variant!r}")
        object.__setattr__(self, "hypotheses",
                           tuple(sorted(set(self.hypotheses))))

    @property
    def kb_vars(self) -> list[str]:
        return free_vars(self.kb)

    @property
    def manifestation_vars(self) -> list[str]:
        if self.variant == "Q":
            return [self.manifestation.var]
        if self.variant in ("C", "T"):
            return sorted({l.var for l in self.manifestation})
        return free_vars(self.manifestation)

    @property
    def variables(self) -> list[str]:
        """The variable universe: KB, hypotheses and manifestation variables.

        Hypotheses and manifestation variables that do not occur in the KB
        are semantically free; keeping them in the universe makes counting
        and enumeration well defined for such (technically invalid but
        useful) instances.
        """
        return sorted(set(self.kb_vars) | set(self.hypotheses)
                      | set(self.manifestation_vars))

    def manifestation_text(self) -> str:
        if self.variant == "Q":
            return str(self.manifestation)
        if self.variant in ("C", "T"):
            return " ".join(str(l) for l in self.manifestation)
        return render_formula(self.manifestation)


@dataclass(frozen=True)
class Explanation:
    """A consistent set of literals over the hypothesis variables."""

    literals: tuple[Literal, ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(set(self.literals), key=lambda l: l.var))
        object.__setattr__(self, "literals", ordered)
        polarities: dict[str, bool] = {}
        for l in ordered:
            if polarities.setdefault(l.var, l.positive) != l.positive:
                raise InputError(
                    f"inconsistent explanation: both polarities of {l.var!r}")

    @property
    def atoms(self) -> list[str]:
        return [l.var for l in self.literals]

    def is_full(self, hypotheses: Sequence[str]) -> bool:
        return set(self.atoms) == set(hypotheses)

    def serialize(self) -> str:
        return " ".join(str(l) for l in self.literals)

    @classmethod
    def parse(cls, text: str) -> "Explanation":
        parts = text.split()
        return cls(tuple(parse_literal(p) for p in parts))

    def __str__(self) -> str:
        return self.serialize() if self.literals else "(empty)"


EMPTY_EXPLANATION = Explanation(())


@dataclass(frozen=True)
class SolveOutcome:
    found: bool
    explanation: Explanation | None
    method: str
    certificate_checked: bool = False
    candidates_tried: int = 0
    sat_calls: int = 0

    def __post_init__(self) -> None:
        if self.found:
            assert self.certificate_checked, \
                "positive outcomes must carry a checked certificate"


def validate_instance(inst: AbductionInstance) -> list[str]:
    """All invariant violations, located; empty list when the instance is
    well formed."""
    errors = []
    kb_vars = set(inst.kb_vars)
    outside = sorted(set(inst.hypotheses) - kb_vars)
    if outside:
        errors.append(
            f"hypothesis outside knowledge base: {', '.join(outside)}")
    overlap = sorted(set(inst.manifestation_vars) & set(inst.hypotheses))
    if overlap:
        errors.append(
            f"manifestation overlaps hypotheses: {', '.join(overlap)}")
    m_outside = sorted(set(inst.manifestation_vars) - kb_vars)
    if m_outside:
        errors.append(
            f"manifestation variable outside knowledge base: "
            f"{', '.join(m_outside)}")
    if inst.variant == "F":
        bad = _foreign_connectives(inst.manifestation, inst.fns)
        if bad:
            errors.append(
                f"manifestation uses connectives outside the declared set: "
                f"{', '.join(sorted(bad))}")
    return errors


def _foreign_connectives(phi: Formula, fns: FunctionSet) -> set[str]:
    if isinstance(phi, App):
        out = set() if phi.fn.name in fns else {phi.fn.name}
        for a in phi.args:
            out |= _foreign_connectives(a, fns)
        return out
    return set()


def _check_candidate(inst: AbductionInstance, e: Explanation) -> None:
    extra = set(e.atoms) - set(inst.hypotheses)
    if extra:
        raise InputError(
            f"explanation mentions non-hypothesis variables: "
            f"{', '.join(sorted(extra))}")


def _kb_sat(inst: AbductionInstance, assumptions: Iterable[Literal]) -> bool:
    enc = encode_cnf(inst.kb, assumptions, inst.variables)
    return sat_solve(enc.clauses, enc.num_vars).is_sat


def entails_manifestation(inst: AbductionInstance,
                          assumptions: Iterable[Literal]) -> bool:
    """Gamma + assumptions |= psi, by refutation SAT calls."""
    assumptions = list(assumptions)
    if inst.variant == "Q":
        return not _kb_sat(inst, assumptions + [inst.manifestation.negated()])
    if inst.variant == "C":
        negated = [l.negated() for l in inst.manifestation]
        return not _kb_sat(inst, assumptions + negated)
    if inst.variant == "T":
        return all(not _kb_sat(inst, assumptions + [l.negated()])
                   for l in inst.manifestation)
    negation = App(NOT, (inst.manifestation,))
    enc = encode_cnf(list(inst.kb) + [negation], assumptions, inst.variables)
    return not sat_solve(enc.clauses, enc.num_vars).is_sat


def is_explanation(inst: AbductionInstance, e: Explanation) -> bool:
    """Gamma and E consistent, and Gamma and E entail the manifestation."""
    _check_candidate(inst, e)
    if not _kb_sat(inst, e.literals):
        return False
    return entails_manifestation(inst, e.literals)


# ---------------------------------------------------------------------------
# Canonical candidate order: hypothesis variables ascending; the candidate
# index is read as a binary counter with the first variable most significant
# and bit 0 mapping to the negative literal.

def candidate_explanation(hypotheses: Sequence[str], index: int) -> Explanation:
    n = len(hypotheses)
    return Explanation(tuple(
        Literal(v, bool((index >> (n - 1 - j)) & 1))
        for j, v in enumerate(hypotheses)))


def _oracle_scale_check(inst: AbductionInstance) -> None:
    if len(inst.hypotheses) > ORACLE_MAX_HYP:
        raise ResourceBudgetError(
            f"oracle limited to {ORACLE_MAX_HYP} hypotheses, "
            f"got {len(inst.hypotheses)}")
    if len(inst.variables) > ORACLE_MAX_VARS:
        raise ResourceBudgetError(
            f"oracle limited to {ORACLE_MAX_VARS} variables, "
            f"got {len(inst.variables)}")


def oracle_solve(inst: AbductionInstance) -> SolveOutcome:
    """Exhaustive scan over full candidates in canonical order.

    Sound and complete for existence because every explanation extends to a
    full one.
    """
    _oracle_scale_check(inst)
    hyp = inst.hypotheses
    for index in range(1 << len(hyp)):
        e = candidate_explanation(hyp, index)
        if is_explanation(inst, e):
            return SolveOutcome(True, e, "oracle", certificate_checked=True,
                                candidates_tried=index + 1)
    return SolveOutcome(False, None, "oracle",
                        candidates_tried=1 << len(hyp))


def oracle_count_full(inst: AbductionInstance) -> int:
    _oracle_scale_check(inst)
    hyp = inst.hypotheses
    return sum(
        1 for index in range(1 << len(hyp))
        if is_explanation(inst, candidate_explanation(hyp, index)))


def oracle_enumerate(inst: AbductionInstance) -> list[Explanation]:
    """All full explanations, in canonical candidate order."""
    _oracle_scale_check(inst)
    hyp = inst.hypotheses
    return [e for index in range(1 << len(hyp))
            if is_explanation(inst, e := candidate_explanation(hyp, index))]


# ---------------------------------------------------------------------------
# Constant elimination

def _is_const(phi: Formula, value: int) -> bool:
    if isinstance(phi, Const) and phi.value == value:
        return True
    return (isinstance(phi, App) and phi.fn.arity == 0
            and phi.fn.bits[0] == value)


def _contains_const(phi: Formula, value: int) -> bool:
    if _is_const(phi, value):
        return True
    if isinstance(phi, App):
        return any(_contains_const(a, value) for a in phi.args)
    return False


def _replace_const(phi: Formula, value: int, repl: Formula) -> Formula:
    if _is_const(phi, value):
        return repl
    if isinstance(phi, App):
        return App(phi.fn,
                   tuple(_replace_const(a, value, repl) for a in phi.args))
    return phi


def fresh_variable(inst: AbductionInstance, prefix: str) -> str:
    used = set(inst.variables)
    i = 1
    while f"{prefix}{i}" in used:
        i += 1
    return f"{prefix}{i}"


def eliminate_true(inst: AbductionInstance) -> AbductionInstance:
    """Replace every occurrence of the constant 1 by a fresh variable forced
    true by a unit formula.  Parsimonious: full-explanation sets are
    unchanged.  Instances without the constant are returned as-is."""
    targets = list(inst.kb)
    if inst.variant == "F":
        targets.append(inst.manifestation)
    if not any(_contains_const(phi, 1) for phi in targets):
        return inst
    t = fresh_variable(inst, "_t")
    tvar = Var(t)
    kb = tuple(_replace_const(phi, 1, tvar) for phi in inst.kb) + (tvar,)
    manifestation = inst.manifestation
    if inst.variant == "F":
        manifestation = _replace_const(manifestation, 1, tvar)
    return replace(inst, kb=kb, manifestation=manifestation)


def eliminate_false(inst: AbductionInstance) -> AbductionInstance:
    """Rewrite each KB formula phi to (phi[0/f] or f) with f a fresh
    hypothesis variable, using a representation of OR over the declared
    connectives.  Explanation existence is preserved (every explanation of
    the image must contain the negative literal on f).  Instances without
    the constant are returned as-is."""
    if inst.variant == "F":
        raise InputError("eliminate_false supports variants Q, C and T only")
    if not any(_contains_const(phi, 0) for phi in inst.kb):
        return inst
    from .errors import NoRepresentationError
    from .lattice import synthesize_representation
    # synthesize over the constant-0-free part so the representation cannot
    # smuggle the constant we are eliminating back in
    source = FunctionSet(f for f in inst.fns
                         if not (f.arity == 0 and f.bits[0] == 0))
    try:
        or_repr = synthesize_representation(source, OR)
    except NoRepresentationError:
        raise InputError(
            "eliminate_false requires a binary OR expressible over the "
            "declared connectives") from None
    f = fresh_variable(inst, "_f")
    fvar = Var(f)
    kb = tuple(
        substitute_map(or_repr,
                       {"x1": _replace_const(phi, 0, fvar), "x2": fvar})
        for phi in inst.kb)
    return replace(inst, kb=kb,
                   hypotheses=inst.hypotheses + (f,))


def extend_to_full(inst: AbductionInstance, e: Explanation) -> Explanation:
    """Extend an explanation to a full one: missing hypothesis variables in
    sorted order, positive literal first, kept when Gamma plus the extended
    set stays satisfiable."""
    if not is_explanation(inst, e):
        raise InputError("extend_to_full requires an explanation")
    literals = list(e.literals)
    assigned = set(e.atoms)
    for v in inst.hypotheses:
        if v in assigned:
            continue
        positive = Literal(v, True)
        if _kb_sat(inst, literals + [positive]):
            literals.append(positive)
        else:
            literals.append(Literal(v, False))
    full = Explanation(tuple(literals))
    assert is_explanation(inst, full)
    return full


# ---------------------------------------------------------------------------
# Instance files: `fn` lines, then `kb` lines, `hyp` lines and exactly one
# manifestation line (`query`, `clause`, `term` or `qformula`).

_VARIANT_OF_KEY = {"query": "Q", "clause": "C", "term": "T", "qformula": "F"}
_KEY_OF_VARIANT = {v: k for k, v in _VARIANT_OF_KEY.items()}


def parse_instance(text: str) -> AbductionInstance:
    fns_acc: list[TruthTable] = []
    kb: list[Formula] = []
    hyp: list[str] = []
    manifestation: Manifestation | None = None
    variant: str | None = None
    fns = FunctionSet([])
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()

        def bad(msg: str) -> None:
            raise InputError(f"instance line {lineno}: {msg}")

        if key == "fn":
            parts = rest.split()
            if len(parts) != 3:
                bad("expected `fn <name> <arity> <bitstring>`")
            name, arity_s, bits = parts
            if not arity_s.isdigit():
                bad(f"bad arity {arity_s!r}")
            fns_acc.append(TruthTable.from_bitstring(name, int(arity_s), bits))
            fns = FunctionSet(fns_acc)
        elif key == "kb":
            kb.append(parse_formula(rest, fns))
        elif key == "hyp":
            hyp.extend(rest.split())
        elif key in _VARIANT_OF_KEY:
            if variant is not None:
                bad("multiple manifestation lines")
            variant = _VARIANT_OF_KEY[key]
            if key == "query":
                if len(rest.split()) != 1:
                    bad("query takes exactly one literal")
                manifestation = parse_literal(rest)
            elif key in ("clause", "term"):
                lits = tuple(parse_literal(p) for p in rest.split())
                if not lits:
                    bad(f"{key} needs at least one literal")
                manifestation = lits
            else:
                manifestation = parse_formula(rest, fns)
        else:
            bad(f"unknown directive {key!r}")
    if variant is None or manifestation is None:
        raise InputError("instance has no manifestation line")
    return AbductionInstance(fns, tuple(kb), tuple(hyp), variant,
                             manifestation)


def serialize_instance(inst: AbductionInstance) -> str:
    lines = [f"fn {f.name} {f.arity} {f.bitstring()}" for f in inst.fns]
    lines += [f"kb {render_formula(phi)}" for phi in inst.kb]
    lines.append(("hyp " + " ".join(inst.hypotheses)).rstrip())
    lines.append(f"{_KEY_OF_VARIANT[inst.variant]} "
                 f"{inst.manifestation_text()}")
    return "\n".join(lines) + "\n"
