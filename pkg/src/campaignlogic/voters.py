"""Voters, their preference functions, and per-world utility.

Preferences and thresholds are exact :class:`fractions.Fraction` values.
They are parsed from integer strings or ``"a/b"`` strings only; floats are
refused so that nothing downstream ever rounds.

Voter file format (JSON)::

    {
      "variables": ["x1", "x2"],                  # optional
      "voters": [
        {"id": "v1", "kind": "optimistic",
         "prefs": {"x1": "1/2", "x2": "-1"},
         "threshold": "-1/2"}                      # optional
      ]
    }

Preference values may also be JSON integers. Missing preference entries
mean indifference (0).
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import EmptyPopulation, ParseError
from .formula import VarUniverse

_RATIONAL = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*\Z")


class Kind(str, enum.Enum):
    OPTIMISTIC = "optimistic"
    PESSIMISTIC = "pessimistic"
    EXPECTED = "expected"

    def __str__(self):
        return self.value


def parse_rational(value) -> Fraction:
    """Exact rational from an int, a Fraction, or a string ``"a"`` / ``"a/b"``."""
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL.match(value)
        if m:
            num, den = m.groups()
            if den is not None and int(den) == 0:
                raise ParseError(f"zero denominator in {value!r}")
            return Fraction(int(num), int(den) if den else 1)
    raise ParseError(f"not an exact rational (use 'a/b' or an integer): {value!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Voter:
    id: str
    kind: Kind
    prefs: Mapping[str, Fraction] = field(default_factory=dict)
    threshold: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        prefs = {name: parse_rational(p) for name, p in dict(self.prefs).items()}
        for name, p in prefs.items():
            if not -1 <= p <= 1:
                raise ValueError(f"voter {self.id}: preference for {name} is {p}, outside [-1, 1]")
        object.__setattr__(self, "prefs", prefs)
        if self.threshold is not None:
            object.__setattr__(self, "threshold", parse_rational(self.threshold))

    def __hash__(self):
        return hash((self.id, self.kind, tuple(sorted(self.prefs.items())), self.threshold))

    def pref(self, name: str) -> Fraction:
        return self.prefs.get(name, Fraction(0))

    def pref_vector(self, universe: VarUniverse) -> tuple[Fraction, ...]:
        extra = set(self.prefs) - set(universe.names)
        if extra:
            raise ValueError(f"voter {self.id} has preferences on variables outside the universe: {sorted(extra)}")
        return tuple(self.pref(name) for name in universe.names)

    def negated(self) -> Voter:
        return Voter(self.id, self.kind, {k: -p for k, p in self.prefs.items()}, self.threshold)

    def with_kind(self, kind) -> Voter:
        return Voter(self.id, kind, self.prefs, self.threshold)

    def with_threshold(self, threshold) -> Voter:
        return Voter(self.id, self.kind, self.prefs, threshold)


def world_utility(voter: Voter, world) -> Fraction:
    """Sum of p_v(x) * w(x) over the world's universe, with w(x) in {-1, +1}."""
    prefs = voter.pref_vector(world.universe)
    return sum((p if b else -p for p, b in zip(prefs, world.bits)), Fraction(0))


def aggregate_preferences(voters: Sequence[Voter], universe: VarUniverse | None = None,
                          counter: list[int] | None = None) -> Voter:
    """A single voter whose preference on each variable is the population mean.

    Summed over a population, world utilities equal ``len(voters)`` times the
    aggregate's utility on every world. ``counter``, if given, has its first
    element incremented once per arithmetic operation.
    """
    if not voters:
        raise EmptyPopulation("cannot aggregate an empty population")
    universe = universe or universe_of(voters)
    m = len(voters)
    ops = 0
    prefs = {}
    for name in universe.names:
        total = Fraction(0)
        for v in voters:
            total += v.pref(name)
            ops += 1
        prefs[name] = total / m
        ops += 1
    if counter is not None:
        counter[0] += ops
    return Voter("aggregate", voters[0].kind, prefs)


def best_possible_utility(voter: Voter) -> Fraction:
    return sum((abs(p) for p in voter.prefs.values()), Fraction(0))


def universe_of(voters: Iterable[Voter], base: VarUniverse | None = None) -> VarUniverse:
    """``base`` extended by every preference key, in order of first appearance."""
    universe = base or VarUniverse()
    for v in voters:
        universe = universe.extend(v.prefs)
    return universe


# -- file format -----------------------------------------------------------

def loads_voters(text: str) -> tuple[list[Voter], VarUniverse | None]:
    """Parse a voter file. Returns the voters and the declared universe, if any."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid voter file: {exc.msg}", exc.pos) from None
    if not isinstance(data, dict) or not isinstance(data.get("voters"), list):
        raise ParseError("voter file must be an object with a 'voters' list")
    universe = None
    if "variables" in data:
        try:
            universe = VarUniverse(tuple(data["variables"]))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad 'variables' list: {exc}") from None
    voters = []
    seen = set()
    for entry in data["voters"]:
        try:
            vid = str(entry["id"])
            kind = Kind(entry["kind"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad voter entry {entry!r}: {exc}") from None
        if vid in seen:
            raise ParseError(f"duplicate voter id {vid!r}")
        seen.add(vid)
        prefs = {str(k): parse_rational(p) for k, p in entry.get("prefs", {}).items()}
        threshold = entry.get("threshold")
        try:
            voter = Voter(vid, kind, prefs, None if threshold is None else parse_rational(threshold))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        if universe is not None:
            missing = set(prefs) - set(universe.names)
            if missing:
                raise ParseError(f"voter {vid} refers to undeclared variables {sorted(missing)}")
        voters.append(voter)
    return voters, universe


def dumps_voters(voters: Sequence[Voter], universe: VarUniverse | None = None) -> str:
    out = {}
    if universe is not None:
        out["variables"] = list(universe.names)
    entries = []
    for v in voters:
        entry = {"id": v.id, "kind": v.kind.value,
                 "prefs": {k: format_rational(p) for k, p in v.prefs.items()}}
        if v.threshold is not None:
            entry["threshold"] = format_rational(v.threshold)
        entries.append(entry)
    out["voters"] = entries
    return json.dumps(out, indent=2) + "\n"
