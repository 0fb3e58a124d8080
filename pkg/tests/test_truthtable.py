"""Tables, function properties and the clone-closure oracle."""

import pytest

from cloneabd.errors import InputError
from cloneabd.truthtable import (AND, ANDNOT, CONST0, CONST1, IDENTITY,
                                 IMPLIES, MAJ3, NOT, OR, XNOR, XOR, XOR3,
                                 FunctionSet, TruthTable, clone_closure,
                                 clone_closure_masks, dual_fn, eval_fn,
                                 function_properties, parse_function_line,
                                 parse_function_set, row_assignment,
                                 row_index, separating_degree)


def test_row_index_convention():
    # x1 is the most significant position
    assert row_index((1, 0, 1)) == 5
    assert row_index((0, 1, 1)) == 3
    assert row_assignment(5, 3) == (1, 0, 1)
    for i in range(8):
        assert row_index(row_assignment(i, 3)) == i


def test_known_tables():
    assert AND.bits == (0, 0, 0, 1)
    assert OR.bits == (0, 1, 1, 1)
    assert NOT.bits == (1, 0)
    assert IMPLIES.bits == (1, 1, 0, 1)
    assert XOR3.bits == (0, 1, 1, 0, 1, 0, 0, 1)
    assert MAJ3.bits == (0, 0, 0, 1, 0, 1, 1, 1)


def test_eval_fn():
    assert eval_fn(IMPLIES, (1, 0)) == 0
    assert eval_fn(IMPLIES, (0, 0)) == 1
    assert eval_fn(MAJ3, (1, 0, 1)) == 1
    assert eval_fn(CONST1, ()) == 1


def test_bitstring_roundtrip():
    for f in (AND, OR, NOT, XOR3, MAJ3, CONST0, CONST1):
        again = TruthTable.from_bitstring(f.name, f.arity, f.bitstring())
        assert again.bits == f.bits and again.arity == f.arity


def test_from_callable():
    f = TruthTable.from_callable("nand", 2, lambda a, b: 1 - (a & b))
    assert f.bits == (1, 1, 1, 0)


def test_dual_fn():
    assert dual_fn(AND).bits == OR.bits
    assert dual_fn(OR).bits == AND.bits
    assert dual_fn(MAJ3).bits == MAJ3.bits  # self-dual
    assert dual_fn(CONST0).bits == CONST1.bits


def test_function_properties():
    p = function_properties(OR)
    assert p.reproduces0 and p.reproduces1 and p.monotone
    assert not p.self_dual and not p.affine
    q = function_properties(XOR3)
    assert q.affine and q.self_dual and q.reproduces0 and q.reproduces1
    r = function_properties(NOT)
    assert not r.reproduces0 and not r.reproduces1 and not r.monotone
    assert r.self_dual and r.affine


def test_separating_degree_basics():
    # AND: f^-1(1) = {11} shares every coordinate fixed to 1
    assert separating_degree(AND, 1) == float("inf")
    assert separating_degree(AND, 0) == 1
    # OR dually
    assert separating_degree(OR, 0) == float("inf")
    assert separating_degree(OR, 1) == 1
    # IMPLIES is 0-separating (only 10 maps to 0)
    assert separating_degree(IMPLIES, 0) == float("inf")
    assert separating_degree(IMPLIES, 1) == 1
    # negation separates neither value beyond degree 1
    assert separating_degree(NOT, 0) == 1
    assert separating_degree(NOT, 1) == 1


def test_separating_degree_majority():
    # MAJ3 preimage of 1 = {011,101,110,111}: every pair shares a
    # 1-coordinate but the whole set does not
    assert separating_degree(MAJ3, 1) == 2
    assert separating_degree(MAJ3, 0) == 2


def test_separating_degree_constants():
    assert separating_degree(CONST1, 1) == 1  # empty index set, degree floor
    assert separating_degree(CONST1, 0) == float("inf")  # empty preimage
    assert separating_degree(CONST0, 0) == 1
    assert separating_degree(CONST0, 1) == float("inf")


def test_function_set_lookup():
    fns = FunctionSet([AND, NOT])
    assert "and" in fns
    assert "or" not in fns
    assert fns.get("not").bits == (1, 0)
    ext = fns.extended(OR)
    assert "or" in ext and "or" not in fns


def test_clone_closure_or():
    members = clone_closure(FunctionSet([OR]), 2)
    bit_sets = {m.bits for m in members}
    # projections and binary disjunction, nothing else
    assert (0, 1, 1, 1) in bit_sets
    assert (0, 0, 1, 1) in bit_sets and (0, 1, 0, 1) in bit_sets
    assert (0, 0, 0, 1) not in bit_sets  # no conjunction from OR alone


def test_clone_closure_bf_is_everything():
    masks = clone_closure_masks(FunctionSet([AND, NOT]), 2)
    assert len(masks) == 16


def test_clone_closure_affine():
    masks = clone_closure_masks(FunctionSet([XOR3]), 3)
    # arity-3 members of L2: xor of an odd number of the three inputs
    assert len(masks) == 3 + 1  # three projections plus the ternary xor


def test_parse_function_line():
    f = parse_function_line("fn maj 3 00010111")
    assert f.name == "maj" and f.bits == MAJ3.bits
    g = parse_function_line("or 2 0111")  # keyword optional
    assert g.bits == OR.bits
    with pytest.raises(InputError):
        parse_function_line("fn bad 2 01")  # wrong bit count


def test_parse_function_set():
    text = "# comment\nfn and 2 0001\n\nfn not 1 10\n"
    fns = parse_function_set(text)
    assert sorted(f.name for f in fns) == ["and", "not"]
