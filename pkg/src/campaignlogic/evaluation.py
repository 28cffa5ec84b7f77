"""Optimistic, pessimistic and expected-value utility of a theory for a voter."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InconsistentTheory, MissingThreshold
from .formula import Theory, VarUniverse
from .voters import Kind, Voter, world_utility
from .worlds import SolverConfig, World, bit_columns, count_models, enumerate_models, model_indices

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class UtilityResult:
    value: Fraction
    witness: World | None = None


def integer_prefs(voter: Voter, universe: VarUniverse) -> tuple[list[int], int]:
    """Preferences scaled by the lcm of their denominators, and that scale."""
    prefs = voter.pref_vector(universe)
    scale = math.lcm(*(p.denominator for p in prefs)) if prefs else 1
    return [int(p * scale) for p in prefs], scale


def scaled_utilities(ints: Sequence[int], n: int, idx: np.ndarray) -> np.ndarray:
    """Integer utility (times the preference scale) of every world index in ``idx``."""
    wide = sum(abs(p) for p in ints) >= _INT64_SAFE
    dtype = object if wide else np.int64
    out = np.zeros(len(idx), dtype=dtype)
    for p, col in zip(ints, bit_columns(n, idx)):
        if p:
            signs = np.where(col, 1, -1).astype(dtype)
            out += signs * p
    return out


def _models(theory: Theory, config) -> np.ndarray:
    idx = model_indices(theory, config)
    if len(idx) == 0:
        raise InconsistentTheory("theory has no models")
    return idx


def _extreme(theory, voter, config, pick):
    universe = theory.universe
    idx = _models(theory, config)
    ints, scale = integer_prefs(voter, universe)
    values = scaled_utilities(ints, universe.n, idx)
    j = int(pick(values))
    return UtilityResult(Fraction(int(values[j]), scale), World.from_index(universe, int(idx[j])))


def utility_optimistic(theory: Theory, voter: Voter, config: SolverConfig | None = None) -> UtilityResult:
    """Best world utility over the models of ``theory``; the witness is the first maximizer."""
    return _extreme(theory, voter, config, np.argmax)


def utility_pessimistic(theory: Theory, voter: Voter, config: SolverConfig | None = None) -> UtilityResult:
    """Worst world utility over the models of ``theory``; the witness is the first minimizer."""
    return _extreme(theory, voter, config, np.argmin)


def utility_expected(theory: Theory, voter: Voter, method: str = "count",
                     config: SolverConfig | None = None) -> UtilityResult:
    """Mean world utility over the models of ``theory``.

    ``method="enumerate"`` sums exact per-world utilities. ``method="count"``
    uses only the model count C and the per-variable true counts C_i, via
    sum_i p_i * (2 * C_i - C) / C.
    """
    if method == "enumerate":
        total = Fraction(0)
        count = 0
        for world in enumerate_models(theory, config):
            total += world_utility(voter, world)
            count += 1
        if count == 0:
            raise InconsistentTheory("theory has no models")
        return UtilityResult(total / count)
    if method == "count":
        mc = count_models(theory, config)
        if mc.total == 0:
            raise InconsistentTheory("theory has no models")
        prefs = voter.pref_vector(theory.universe)
        value = sum((p * (2 * c - mc.total) for p, c in zip(prefs, mc.per_variable_true)), Fraction(0))
        return UtilityResult(value / mc.total)
    raise ValueError(f"unknown method {method!r}")


def utility(theory: Theory, voter: Voter, config: SolverConfig | None = None) -> UtilityResult:
    if voter.kind is Kind.OPTIMISTIC:
        return utility_optimistic(theory, voter, config)
    if voter.kind is Kind.PESSIMISTIC:
        return utility_pessimistic(theory, voter, config)
    return utility_expected(theory, voter, config=config)


def meets_threshold(theory: Theory, voter: Voter, k=None, config: SolverConfig | None = None) -> bool:
    if k is None:
        k = voter.threshold
    if k is None:
        raise MissingThreshold(f"voter {voter.id} has no threshold")
    return utility(theory, voter, config).value >= k


def total_utility(theory: Theory, voters: Sequence[Voter], config: SolverConfig | None = None) -> Fraction:
    return sum((utility(theory, v, config).value for v in voters), Fraction(0))
