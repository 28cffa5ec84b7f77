"""Generators for the hardness gadgets, each paired with a read-back of the source answer.

Every generator returns an instance of the target problem together with
``solve()``, which runs the exact target solver from this package and maps
its answer back to the source problem, and ``recipe``, a one-line
description of that mapping.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import NotCNF, ParseError, UnsatisfiableSource
from .evaluation import meets_threshold, utility_expected, utility_optimistic, utility_pessimistic
from .formula import (And, Const, Formula, Implies, Not, Or, Theory, Var, VarUniverse, conjoin, disjoin,
                      literal)
from .strategy import TurnoutInstance, pessimistic_turnout
from .voters import Kind, Voter, parse_rational
from .worlds import SolverConfig, check_size, is_satisfiable, DEFAULT_CONFIG


@dataclass(frozen=True)
class ReductionInstance:
    name: str
    theory: Theory
    voters: tuple[Voter, ...]
    recipe: str
    read_back: Callable
    threshold: Fraction | None = None

    def solve(self, config: SolverConfig | None = None):
        return self.read_back(self, config)


def _star_instance(name, phi, universe, pref, kind, recipe):
    star = universe.fresh("x_star")
    u = universe.extend([star])
    theory = Theory(u, (Implies(Var(u.index(star)), phi),))
    voter = Voter("v", kind, {star: pref}, Fraction(1))

    def read_back(inst, config):
        return meets_threshold(inst.theory, inst.voters[0], inst.threshold, config)

    return ReductionInstance(name, theory, (voter,), recipe, read_back, Fraction(1))


def sat_to_optimistic_threshold(phi: Formula, universe: VarUniverse) -> ReductionInstance:
    """SAT(phi) iff the optimist of {x_star -> phi} with p(x_star) = 1 reaches utility 1."""
    return _star_instance("sat-optimistic", phi, universe, 1, Kind.OPTIMISTIC,
                          "phi is satisfiable iff optimistic utility >= 1")


def unsat_to_pessimistic_threshold(phi: Formula, universe: VarUniverse) -> ReductionInstance:
    """UNSAT(phi) iff the pessimist of {x_star -> phi} with p(x_star) = -1 reaches utility 1."""
    return _star_instance("unsat-pessimistic", phi, universe, -1, Kind.PESSIMISTIC,
                          "phi is unsatisfiable iff pessimistic utility >= 1")


# -- weighted satisfiability -----------------------------------------------

@dataclass(frozen=True)
class WsatInstance:
    formula: Formula
    universe: VarUniverse
    weights: tuple[Fraction, ...]
    direction: str = "max"

    def __post_init__(self):
        weights = tuple(parse_rational(r) for r in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != self.universe.n:
            raise ValueError("one weight per variable is required")
        if any(r <= 0 for r in weights):
            raise ValueError("weights must be positive")
        if self.direction not in ("max", "min"):
            raise ValueError(f"direction must be 'max' or 'min', not {self.direction!r}")

    @property
    def max_weight(self) -> Fraction:
        return max(self.weights)


def weight_from_utility(u: Fraction, weights: Sequence[Fraction]) -> Fraction:
    """Total weight of true variables, given the utility under p_i = r_i / R."""
    return (u * max(weights) + sum(weights)) / 2


def wsat_to_evaluation(inst: WsatInstance, config: SolverConfig | None = None) -> ReductionInstance:
    """Weighted satisfiability as optimistic (max) or pessimistic (min) utility of {phi}."""
    theory = Theory(inst.universe, (inst.formula,))
    if not is_satisfiable(theory, config):
        raise UnsatisfiableSource("the weighted instance has no satisfying assignment")
    R = inst.max_weight
    prefs = {name: r / R for name, r in zip(inst.universe.names, inst.weights)}
    kind = Kind.OPTIMISTIC if inst.direction == "max" else Kind.PESSIMISTIC
    voter = Voter("v", kind, prefs)

    def read_back(red, cfg):
        solve = utility_optimistic if kind is Kind.OPTIMISTIC else utility_pessimistic
        result = solve(red.theory, red.voters[0], cfg)
        return weight_from_utility(result.value, inst.weights), result.witness

    recipe = f"W = (u * {R} + {sum(inst.weights)}) / 2"
    return ReductionInstance(f"wsat-{inst.direction}", theory, (voter,), recipe, read_back)


# -- counting --------------------------------------------------------------

@dataclass(frozen=True)
class CountGadget:
    source: Formula
    universe: VarUniverse
    psi: Theory
    psi_prime: Theory
    voter: Voter


def build_count_gadget(phi: Formula, universe: VarUniverse) -> CountGadget:
    """psi = phi & y & z and psi' = psi | (y & !z & x_1 & ... & x_n), with D caring only about y and z."""
    y = universe.fresh("y")
    z = universe.extend([y]).fresh("z")
    u = universe.extend([y, z])
    yv, zv = Var(u.index(y)), Var(u.index(z))
    psi = conjoin([phi, yv, zv])
    extra = conjoin([yv, Not(zv)] + [Var(i) for i in range(universe.n)])
    psi_prime = Or((psi, extra))
    voter = Voter("D", Kind.EXPECTED, {y: 1, z: 1})
    return CountGadget(phi, universe, Theory(u, (psi,)), Theory(u, (psi_prime,)), voter)


def count_via_expected_utility(phi: Formula, universe: VarUniverse, config: SolverConfig | None = None) -> int:
    """Model count of ``phi`` from two expected-utility evaluations: S = 1 / (ut(psi) / ut(psi') - 1)."""
    config = config or DEFAULT_CONFIG
    check_size(universe.n, limit=config.n_max - 2)
    gadget = build_count_gadget(phi, universe)
    ut_prime = utility_expected(gadget.psi_prime, gadget.voter, config=config).value
    if ut_prime == 0:
        # only the extra world models psi', so phi is unsatisfiable
        return 0
    ut_psi = utility_expected(gadget.psi, gadget.voter, config=config).value
    s = 1 / (ut_psi / ut_prime - 1)
    if s.denominator != 1:
        raise ArithmeticError(f"non-integral count {s}")
    return int(s)


# -- CNF and turnout -------------------------------------------------------

@dataclass(frozen=True)
class Cnf:
    """Clauses of nonzero DIMACS-style literals over ``universe`` (variable i is index i-1)."""

    universe: VarUniverse
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.universe.n:
                    raise NotCNF(f"literal {lit} out of range")
            if len(set(clause)) != len(clause):
                raise NotCNF(f"duplicate literal in clause {clause}")

    def to_formula(self) -> Formula:
        return conjoin([disjoin([literal(abs(l) - 1, l > 0) for l in c]) for c in self.clauses])

    @classmethod
    def from_formula(cls, f: Formula, universe: VarUniverse) -> Cnf:
        """Read clausal structure off ``f``: a conjunction of disjunctions of literals."""
        def lit(g):
            if isinstance(g, Var):
                return g.index + 1
            if isinstance(g, Not) and isinstance(g.child, Var):
                return -(g.child.index + 1)
            raise NotCNF("clauses must be disjunctions of variables and negated variables")

        def clause(g):
            if isinstance(g, Or):
                return tuple(lit(c) for c in g.children)
            if isinstance(g, Const) and not g.value:
                return ()
            return (lit(g),)

        if isinstance(f, Const) and f.value:
            return cls(universe, ())
        parts = f.children if isinstance(f, And) else (f,)
        return cls(universe, tuple(clause(p) for p in parts))


def parse_dimacs(text: str, universe: VarUniverse | None = None) -> Cnf:
    """Parse DIMACS CNF (``c`` comments, ``p cnf n m`` header, 0-terminated clauses).

    Variables are named ``x1..xn`` unless a universe of size n is supplied.
    """
    n = m = None
    lits = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf" or n is not None:
                raise ParseError(f"line {lineno}: bad problem line {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {lineno}: bad problem line {line!r}") from None
            continue
        if n is None:
            raise ParseError(f"line {lineno}: clause before 'p cnf' header")
        try:
            lits.extend(int(tok) for tok in line.split())
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer literal") from None
    if n is None:
        raise ParseError("missing 'p cnf' header")
    clauses, current = [], []
    for lit in lits:
        if lit == 0:
            clauses.append(tuple(current))
            current = []
        else:
            current.append(lit)
    if current:
        clauses.append(tuple(current))
    if len(clauses) != m:
        raise ParseError(f"header declares {m} clauses, found {len(clauses)}")
    if universe is None:
        universe = VarUniverse(tuple(f"x{i}" for i in range(1, n + 1)))
    elif universe.n != n:
        raise ParseError(f"header declares {n} variables, universe has {universe.n}")
    return Cnf(universe, clauses)


def looks_like_dimacs(text: str) -> bool:
    return re.search(r"^\s*p\s+cnf\b", text, re.MULTILINE) is not None


def cnfsat_to_pessimistic_turnout(cnf: Cnf) -> TurnoutInstance:
    """One pessimist per clause; every clause satisfiable at once iff all h = #clauses voters turn out.

    A clause with r literals gives p = +-1/r on its variables and threshold
    -(r-1)/r. An empty clause gives an indifferent voter with threshold 1,
    which no theory can meet. A clause containing a variable with both
    polarities is always satisfied; it gives an indifferent voter with
    threshold 0.
    """
    names = cnf.universe.names
    voters = []
    for i, clause in enumerate(cnf.clauses, 1):
        vid = f"c{i}"
        variables = {abs(l) for l in clause}
        if not clause:
            voters.append(Voter(vid, Kind.PESSIMISTIC, {}, Fraction(1)))
        elif len(variables) < len(clause):
            voters.append(Voter(vid, Kind.PESSIMISTIC, {}, Fraction(0)))
        else:
            r = len(clause)
            prefs = {names[abs(l) - 1]: Fraction(1 if l > 0 else -1, r) for l in clause}
            voters.append(Voter(vid, Kind.PESSIMISTIC, prefs, Fraction(-(r - 1), r)))
    return TurnoutInstance(tuple(voters), len(voters), cnf.universe)


def cnf_satisfiable_via_turnout(cnf: Cnf, config: SolverConfig | None = None) -> bool:
    return pessimistic_turnout(cnfsat_to_pessimistic_turnout(cnf), config).decision
