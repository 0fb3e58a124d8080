"""The DPLL-style decision procedure and projected model enumeration."""

import itertools
import random

import pytest

from cloneabd.errors import ResourceBudgetError
from cloneabd.sat import SatStats, enumerate_models, sat_solve


def brute_sat(clauses, n):
    for bits in itertools.product((False, True), repeat=n):
        model = {i + 1: bits[i] for i in range(n)}
        if all(any(model[abs(l)] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def test_empty_and_trivial():
    assert sat_solve([], 0).is_sat
    assert sat_solve([[1]], 1).is_sat
    assert not sat_solve([[1], [-1]], 1).is_sat
    assert not sat_solve([[]], 0).is_sat


def test_unit_propagation_chain():
    clauses = [[1], [-1, 2], [-2, 3], [-3, 4]]
    res = sat_solve(clauses, 4)
    assert res.is_sat
    assert all(res.model[v] for v in (1, 2, 3, 4))


def test_random_agreement_with_brute_force():
    rng = random.Random(42)
    for _ in range(200):
        n = rng.randint(1, 6)
        clauses = []
        for _ in range(rng.randint(1, 10)):
            width = rng.randint(1, 3)
            clause = [rng.choice([-1, 1]) * rng.randint(1, n)
                      for _ in range(width)]
            clauses.append(clause)
        assert sat_solve(clauses, n).is_sat == brute_sat(clauses, n)


def test_model_is_total():
    res = sat_solve([[1, 2]], 3)
    assert res.is_sat
    assert set(res.model) == {1, 2, 3}


def test_stats_counted():
    stats = SatStats()
    sat_solve([[1, 2], [-1, 2], [1, -2], [-1, -2]], 2, stats=stats)
    assert stats.conflicts > 0


def test_conflict_cap():
    clauses = [[1, 2], [-1, 2], [1, -2], [-1, -2]]
    with pytest.raises(ResourceBudgetError):
        sat_solve(clauses, 2, conflict_cap=0)


def test_enumerate_models_full():
    models = enumerate_models([[1, 2]], 2)
    assert models == sorted(models)
    assert len(models) == 3
    assert (False, False) not in models


def test_enumerate_models_projected():
    # y is free: projection onto x collapses model pairs
    models = enumerate_models([[1]], 2, project=[1])
    assert models == [(True,)]


def test_enumerate_models_sorted_no_duplicates():
    clauses = [[1, 2, 3]]
    models = enumerate_models(clauses, 3)
    assert len(models) == len(set(models)) == 7
    assert models == sorted(models)
