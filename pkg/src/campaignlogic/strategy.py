"""Candidate strategy: optimal theories, optimal completions and turnout problems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import EmptyPopulation, InconsistentTheory, MissingThreshold, PopulationLimitExceeded
from .evaluation import integer_prefs, scaled_utilities
from .formula import Theory, VarUniverse, conjoin, disjoin
from .voters import Kind, Voter, aggregate_preferences, best_possible_utility, universe_of, world_utility
from .worlds import DEFAULT_CONFIG, SolverConfig, World, check_size, map_chunks, model_indices

BRUTE_FORCE_N_MAX = 12


@dataclass(frozen=True)
class StrategyResult:
    theory: Theory
    total: Fraction
    world: World | None = None
    ops: int = 0


@dataclass(frozen=True)
class TurnoutInstance:
    voters: tuple[Voter, ...]
    h: int
    universe: VarUniverse = None

    def __post_init__(self):
        object.__setattr__(self, "voters", tuple(self.voters))
        object.__setattr__(self, "universe", universe_of(self.voters, self.universe))
        if not 0 <= self.h <= len(self.voters):
            raise ValueError(f"h={self.h} must lie between 0 and {len(self.voters)}")
        for v in self.voters:
            if v.threshold is None:
                raise MissingThreshold(f"voter {v.id} has no threshold")


@dataclass(frozen=True)
class TurnoutResult:
    decision: bool
    theory: Theory | None
    satisfied: tuple[str, ...] = ()
    best_utilities: dict = field(default_factory=dict)


def _check_kind(voters, kind):
    kind = Kind(kind)
    if kind is Kind.OPTIMISTIC:
        raise ValueError("optimistic voters are best served by the empty theory; no complete theory is needed")
    wrong = [v.id for v in voters if v.kind is not kind]
    if wrong:
        raise ValueError(f"voters {wrong} are not {kind.value}")
    return kind


def complete_theory(world: World) -> Theory:
    return Theory(world.universe, world.literals())


def optimal_complete_theory(voters: Sequence[Voter], kind, universe: VarUniverse | None = None) -> StrategyResult:
    """Complete theory maximizing total utility, in O(n*m) arithmetic operations.

    Each variable takes the sign of the population-mean preference; a mean
    of exactly zero picks true.
    """
    if not voters:
        raise EmptyPopulation("no voters")
    _check_kind(voters, kind)
    universe = universe_of(voters, universe)
    counter = [0]
    agg = aggregate_preferences(voters, universe, counter)
    bits = []
    for name in universe.names:
        bits.append(agg.prefs[name] >= 0)
        counter[0] += 1
    world = World(universe, tuple(bits))
    # On a single-world theory every kind evaluates to the world utility.
    total = Fraction(0)
    for v in voters:
        for p, b in zip(v.pref_vector(universe), bits):
            total += p if b else -p
            counter[0] += 1
    return StrategyResult(complete_theory(world), total, world, counter[0])


def brute_force_best_theory(voters: Sequence[Voter], kind, universe: VarUniverse | None = None) -> StrategyResult:
    """Scan every complete theory; exponential, meant as an oracle."""
    if not voters:
        raise EmptyPopulation("no voters")
    _check_kind(voters, kind)
    universe = universe_of(voters, universe)
    check_size(universe.n, limit=BRUTE_FORCE_N_MAX)
    idx = np.arange(1 << universe.n, dtype=np.int64)
    total, scale = _population_total(voters, universe, idx)
    j = int(np.argmax(total))
    world = World.from_index(universe, j)
    return StrategyResult(complete_theory(world), Fraction(int(total[j]), scale), world)


def _population_total(voters, universe, idx):
    """Summed world utility of the population at each index, as integers over a common scale."""
    parts = []
    for v in voters:
        ints, scale = integer_prefs(v, universe)
        parts.append((scaled_utilities(ints, universe.n, idx), scale))
    scale_all = math.lcm(*(scale for _, scale in parts))
    total = np.zeros(len(idx), dtype=object)
    for values, scale in parts:
        total = total + values.astype(object) * (scale_all // scale)
    return total, scale_all


def optimal_completion(theory: Theory, voters: Sequence[Voter], kind,
                       config: SolverConfig | None = None) -> StrategyResult:
    """Extend ``theory`` with literals pinning its model of highest total utility."""
    if not voters:
        raise EmptyPopulation("no voters")
    _check_kind(voters, kind)
    universe = universe_of(voters, theory.universe)
    theory = theory.over(universe)
    idx = model_indices(theory, config)
    if len(idx) == 0:
        raise InconsistentTheory("theory has no models")
    total, scale_all = _population_total(voters, universe, idx)
    j = int(np.argmax(total))
    world = World.from_index(universe, int(idx[j]))
    completed = theory.add(conjoin(world.literals()))
    return StrategyResult(completed, Fraction(int(total[j]), scale_all), world)


# -- turnout ---------------------------------------------------------------

def _require_kinds(inst, allowed):
    wrong = [v.id for v in inst.voters if v.kind not in allowed]
    if wrong:
        names = "/".join(k.value for k in allowed)
        raise ValueError(f"voters {wrong} are not {names}")


def _meets(inst, idx):
    """Boolean (voters x worlds) matrix: voter i meets its threshold at world idx[j]."""
    n = inst.universe.n
    rows = []
    for v in inst.voters:
        ints, scale = integer_prefs(v, inst.universe)
        k = v.threshold * scale
        values = scaled_utilities(ints, n, idx)
        # values are integers; u >= k  <=>  u >= ceil(k)
        rows.append(values >= -((-k.numerator) // k.denominator))
    return np.array(rows, dtype=bool).reshape(len(inst.voters), len(idx))


def _satisfied_by(inst, worlds):
    """Ids of voters meeting their thresholds on the theory modeling exactly ``worlds``."""
    out = []
    for v in inst.voters:
        utils = [world_utility(v, w) for w in worlds]
        value = max(utils) if v.kind is Kind.OPTIMISTIC else min(utils)
        if value >= v.threshold:
            out.append(v.id)
    return tuple(out)


def optimistic_turnout(inst: TurnoutInstance) -> TurnoutResult:
    """Optimists all do best under the empty theory, so compare each best world to its threshold."""
    _require_kinds(inst, (Kind.OPTIMISTIC,))
    best = {v.id: best_possible_utility(v) for v in inst.voters}
    satisfied = tuple(v.id for v in inst.voters if best[v.id] >= v.threshold)
    decision = len(satisfied) >= inst.h
    return TurnoutResult(decision, Theory(inst.universe), satisfied, best)


def pessimistic_turnout(inst: TurnoutInstance, config: SolverConfig | None = None) -> TurnoutResult:
    """Search single worlds: any theory serving h pessimists can be completed without losing one."""
    _require_kinds(inst, (Kind.PESSIMISTIC,))

    def first_hit(idx):
        counts = _meets(inst, idx).sum(axis=0)
        hits = np.flatnonzero(counts >= inst.h)
        return int(idx[hits[0]]) if len(hits) else None

    for hit in map_chunks(first_hit, inst.universe.n, config):
        if hit is not None:
            world = World.from_index(inst.universe, hit)
            return TurnoutResult(True, complete_theory(world), _satisfied_by(inst, [world]))
    return TurnoutResult(False, None)


def _pack(rows: np.ndarray) -> np.ndarray:
    """Pack a (k x worlds) boolean matrix into per-world uint64 bitmask words."""
    k, size = rows.shape
    words = max(1, -(-k // 64))
    out = np.zeros((size, words), dtype=np.uint64)
    for i in range(k):
        out[:, i // 64] |= rows[i].astype(np.uint64) << np.uint64(i % 64)
    return out


def mixed_turnout(inst: TurnoutInstance, config: SolverConfig | None = None) -> TurnoutResult:
    """Turnout for a population of optimists and pessimists.

    For every subset P of the pessimists (ascending bitmask order), A(P) is
    the set of worlds at which all of P meet their thresholds. If A(P) is
    nonempty, the disjunction of one A(P) world per reachable optimist
    satisfies P plus every optimist with some acceptable world in A(P).
    Those counts are computed for all subsets at once with a superset
    sum over the pessimist lattice.
    """
    config = config or DEFAULT_CONFIG
    _require_kinds(inst, (Kind.OPTIMISTIC, Kind.PESSIMISTIC))
    pess = [i for i, v in enumerate(inst.voters) if v.kind is Kind.PESSIMISTIC]
    opt = [i for i, v in enumerate(inst.voters) if v.kind is Kind.OPTIMISTIC]
    if len(pess) > config.p_max:
        raise PopulationLimitExceeded(len(pess), config.p_max)
    n = inst.universe.n
    check_size(n, config)
    n_sub = 1 << len(pess)
    words = max(1, -(-len(opt) // 64))
    reach = np.zeros((n_sub, words), dtype=np.uint64)
    nonempty = np.zeros(n_sub, dtype=bool)

    def scan(idx):
        meets = _meets(inst, idx)
        pmask = _pack(meets[pess])[:, 0] if pess else np.zeros(len(idx), dtype=np.uint64)
        omask = _pack(meets[opt]) if opt else np.zeros((len(idx), words), dtype=np.uint64)
        return pmask, omask

    for pmask, omask in map_chunks(scan, n, config):
        order = np.argsort(pmask, kind="stable")
        keys, starts = np.unique(pmask[order], return_index=True)
        ored = np.bitwise_or.reduceat(omask[order], starts, axis=0)
        keys = keys.astype(np.int64)
        nonempty[keys] = True
        reach[keys] |= ored

    # Superset sum: afterwards reach[P] is the OR over all world masks M containing P.
    for j in range(len(pess)):
        bit = 1 << j
        lower = np.flatnonzero((np.arange(n_sub) & bit) == 0)
        reach[lower] |= reach[lower | bit]
        nonempty[lower] |= nonempty[lower | bit]

    sizes = np.bitwise_count(np.arange(n_sub, dtype=np.uint64)).astype(np.int64)
    reached = np.bitwise_count(reach).sum(axis=1).astype(np.int64)
    counts = np.where(nonempty, sizes + reached, -1)
    hits = np.flatnonzero(counts >= inst.h)
    if not len(hits):
        return TurnoutResult(False, None)
    subset = int(hits[0])
    chosen = [pess[j] for j in range(len(pess)) if subset >> j & 1]
    theory = _witness_theory(inst, chosen, opt, config)
    worlds = [World.from_index(inst.universe, int(i)) for i in model_indices(theory, config)]
    return TurnoutResult(True, theory, _satisfied_by(inst, worlds))


def _witness_theory(inst, chosen, opt, config):
    """Disjunction of the first A(P) world for each optimist that A(P) can satisfy."""
    picks = {}
    fallback = None

    def scan(idx):
        meets = _meets(inst, idx)
        safe = meets[chosen].all(axis=0) if chosen else np.ones(len(idx), dtype=bool)
        first_safe = int(idx[np.argmax(safe)]) if safe.any() else None
        firsts = {}
        for i in opt:
            ok = safe & meets[i]
            if ok.any():
                firsts[i] = int(idx[np.argmax(ok)])
        return first_safe, firsts

    for first_safe, firsts in map_chunks(scan, inst.universe.n, config):
        if fallback is None:
            fallback = first_safe
        for i, w in firsts.items():
            picks.setdefault(i, w)
    indices = sorted(set(picks.values())) or [fallback]
    worlds = [World.from_index(inst.universe, i) for i in indices]
    statement = disjoin([conjoin(w.literals()) for w in worlds])
    return Theory(inst.universe, (statement,))


def turnout(inst: TurnoutInstance, config: SolverConfig | None = None) -> TurnoutResult:
    """Dispatch on the kinds present in the population."""
    kinds = {v.kind for v in inst.voters}
    if Kind.EXPECTED in kinds:
        raise ValueError("turnout is defined for optimistic and pessimistic voters only")
    if kinds <= {Kind.OPTIMISTIC}:
        return optimistic_turnout(inst)
    if kinds == {Kind.PESSIMISTIC}:
        return pessimistic_turnout(inst, config)
    return mixed_turnout(inst, config)
