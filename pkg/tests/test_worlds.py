import random

import pytest

from campaignlogic.errors import VariableLimitExceeded
from campaignlogic.formula import Theory, VarUniverse, parse_theory
from campaignlogic.worlds import (SolverConfig, World, count_models, enumerate_models, is_satisfiable,
                                  model_indices)

import oracles


def theory(text, names):
    return parse_theory(text, VarUniverse(tuple(names)))


def bits(worlds):
    return [w.bits for w in worlds]


class TestWorld:
    def test_numeric_view(self):
        u = VarUniverse(("a", "b"))
        w = World(u, (True, False))
        assert w.signs == (1, -1)
        assert w.sign("b") == -1

    def test_index_round_trip(self):
        u = oracles.universe(5)
        for i in range(32):
            assert World.from_index(u, i).index == i

    def test_first_variable_is_most_significant(self):
        u = oracles.universe(3)
        assert World.from_index(u, 4).bits == (True, False, False)

    def test_length_checked(self):
        with pytest.raises(ValueError):
            World(oracles.universe(2), (True,))


class TestEnumerate:
    def test_single_model(self):
        assert bits(enumerate_models(theory("x1", ["x1"]))) == [(True,)]

    def test_empty_theory_in_order(self):
        got = bits(enumerate_models(theory("", ["x1", "x2"])))
        assert got == [(False, False), (False, True), (True, False), (True, True)]

    def test_disjunction(self):
        got = bits(enumerate_models(theory("x1 | x2", ["x1", "x2"])))
        assert got == [(False, True), (True, False), (True, True)]

    def test_limit(self):
        with pytest.raises(VariableLimitExceeded):
            list(enumerate_models(Theory(oracles.universe(5)), SolverConfig(n_max=4)))

    def test_empty_universe(self):
        assert bits(enumerate_models(Theory(VarUniverse()))) == [()]


class TestCount:
    def test_free_variables(self):
        mc = count_models(Theory(oracles.universe(3)))
        assert mc.total == 8
        assert mc.per_variable_true == (4, 4, 4)

    def test_unique_model(self):
        mc = count_models(theory("x1 & x2", ["x1", "x2"]))
        assert (mc.total, mc.per_variable_true) == (1, (1, 1))

    def test_disjunction(self):
        mc = count_models(theory("x1 | x2", ["x1", "x2"]))
        assert (mc.total, mc.per_variable_true) == (3, (2, 2))


class TestSatisfiable:
    def test_contradiction(self):
        assert not is_satisfiable(theory("x1\n!x1", ["x1"]))

    def test_empty(self):
        assert is_satisfiable(Theory(oracles.universe(2)))

    def test_modus_tollens(self):
        assert not is_satisfiable(theory("x1 -> x2\nx1\n!x2", ["x1", "x2"]))


@pytest.mark.parametrize("seed", range(40))
def test_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 10)
    statements = tuple(oracles.random_formula(rng, n) for _ in range(rng.randint(0, 3)))
    t = Theory(oracles.universe(n), statements)
    expected = oracles.models(statements, n)
    assert bits(enumerate_models(t)) == expected
    mc = count_models(t)
    assert mc.total == len(expected) == len(model_indices(t))
    assert mc.per_variable_true == tuple(sum(b[i] for b in expected) for i in range(n))
    assert is_satisfiable(t) == bool(expected)
    for c in mc.per_variable_true:
        assert 0 <= c <= mc.total <= 2 ** n


@pytest.mark.parametrize("seed", range(20))
def test_fresh_variable_doubles_counts(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    t = oracles.random_satisfiable_theory(rng, n)
    wider = t.over(t.universe.extend(["fresh"]))
    a, b = count_models(t), count_models(wider)
    assert b.total == 2 * a.total
    assert b.per_variable_true[:n] == tuple(2 * c for c in a.per_variable_true)


@pytest.mark.parametrize("seed", range(20))
def test_strengthening_shrinks_models(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    t = oracles.random_satisfiable_theory(rng, n)
    t2 = t.add(oracles.random_formula(rng, n))
    assert set(model_indices(t2).tolist()) <= set(model_indices(t).tolist())


@pytest.mark.parametrize("workers,chunk_bits", [(1, 1), (4, 2), (3, 3), (8, 16)])
def test_partitioned_enumeration_is_deterministic(workers, chunk_bits):
    rng = random.Random(7)
    t = oracles.random_satisfiable_theory(rng, 9, size=2)
    config = SolverConfig(workers=workers, chunk_bits=chunk_bits)
    assert bits(enumerate_models(t, config)) == bits(enumerate_models(t))
    assert count_models(t, config) == count_models(t)
