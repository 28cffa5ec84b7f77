"""Propositional formulas over a fixed, ordered universe of variables.

Grammar, loosest binding first::

    formula := iff
    iff     := imp ("<->" imp)*        left-associative
    imp     := or ("->" imp)?          right-associative
    or      := and ("|" and)*
    and     := not ("&" not)*
    not     := "!" not | atom
    atom    := ident | "true" | "false" | "(" formula ")"

Identifiers match ``[A-Za-z_][A-Za-z0-9_]*``; whitespace is ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError, UnknownVariable

KEYWORDS = frozenset({"true", "false"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class VarUniverse:
    """Ordered, duplicate-free variable names; position i is variable x_{i+1}."""

    names: tuple[str, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not _IDENT.match(name) or name in KEYWORDS:
                raise ValueError(f"invalid variable name {name!r}")

    @property
    def n(self) -> int:
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def extend(self, names: Iterable[str]) -> VarUniverse:
        """Return a universe with any new ``names`` appended in order."""
        out = list(self.names)
        for name in names:
            if name not in out:
                out.append(name)
        return VarUniverse(tuple(out))

    def fresh(self, base: str) -> str:
        """A name starting with ``base`` that is not already in the universe."""
        if base not in self.names:
            return base
        i = 1
        while f"{base}_{i}" in self.names:
            i += 1
        return f"{base}_{i}"


class Formula:
    """Base class of the AST node types."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Formula):
    index: int


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("And needs at least two children")


@dataclass(frozen=True)
class Or(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children")


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


def conjoin(parts: Sequence[Formula]) -> Formula:
    """Conjunction that degrades gracefully to ``true`` or a single formula."""
    parts = tuple(parts)
    if not parts:
        return Const(True)
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disjoin(parts: Sequence[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return Const(False)
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def literal(index: int, value: bool) -> Formula:
    return Var(index) if value else Not(Var(index))


@dataclass(frozen=True)
class Theory:
    """A finite list of statements; its meaning is the set of worlds satisfying all of them."""

    universe: VarUniverse
    statements: tuple[Formula, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "statements", tuple(self.statements))
        n = self.universe.n
        for s in self.statements:
            bad = [i for i in free_variables(s) if i >= n]
            if bad:
                raise ValueError(f"statement refers to variable index {bad[0]} outside a universe of {n}")

    def add(self, *statements: Formula) -> Theory:
        return Theory(self.universe, self.statements + statements)

    def over(self, universe: VarUniverse) -> Theory:
        """Re-home the theory in ``universe``, which must extend the current one."""
        if universe.names[: self.universe.n] != self.universe.names:
            raise ValueError("new universe must extend the old one as a prefix")
        return Theory(universe, self.statements)

    def formula(self) -> Formula:
        return conjoin(self.statements)

    def __len__(self):
        return len(self.statements)

    def __str__(self):
        return "\n".join(to_string(s, self.universe) for s in self.statements)


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<->|->|[|&!()])|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        op, ident, junk = m.groups()
        start = m.start(m.lastindex)
        if junk is not None:
            raise ParseError(f"unexpected character {junk!r}", start)
        tokens.append((op or ident, start, ident is not None))
        pos = m.end()
    tokens.append((None, len(text), False))
    return tokens


class _Parser:
    def __init__(self, text, names, auto):
        self.tokens = _tokenize(text)
        self.i = 0
        self.names = names
        self.auto = auto

    def peek(self):
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok, pos, _ = self.take()
        if tok != op:
            found = "end of input" if tok is None else repr(tok)
            raise ParseError(f"expected {op!r}, found {found}", pos)

    def formula(self):
        node = self.imp()
        while self.peek() == "<->":
            self.take()
            node = Iff(node, self.imp())
        return node

    def imp(self):
        lhs = self.or_()
        if self.peek() == "->":
            self.take()
            return Implies(lhs, self.imp())
        return lhs

    def or_(self):
        parts = [self.and_()]
        while self.peek() == "|":
            self.take()
            parts.append(self.and_())
        return disjoin(parts)

    def and_(self):
        parts = [self.not_()]
        while self.peek() == "&":
            self.take()
            parts.append(self.not_())
        return conjoin(parts)

    def not_(self):
        if self.peek() == "!":
            self.take()
            return Not(self.not_())
        return self.atom()

    def atom(self):
        tok, pos, is_ident = self.take()
        if tok == "(":
            node = self.formula()
            self.expect(")")
            return node
        if is_ident:
            if tok == "true":
                return Const(True)
            if tok == "false":
                return Const(False)
            if tok not in self.names:
                if not self.auto:
                    raise UnknownVariable(tok, pos)
                self.names.append(tok)
            return Var(self.names.index(tok))
        found = "end of input" if tok is None else repr(tok)
        raise ParseError(f"expected a variable, constant or '(', found {found}", pos)


def parse_formula(text: str, universe: VarUniverse | None = None, *, auto: bool | None = None
                  ) -> tuple[Formula, VarUniverse]:
    """Parse ``text`` and return the formula together with its universe.

    With a fixed universe (``auto=False``, the default when a universe is
    given) unknown identifiers raise :class:`UnknownVariable`. In auto mode
    new identifiers are appended to the universe in order of first
    appearance, and the extended universe is returned.
    """
    if auto is None:
        auto = universe is None
    names = list(universe.names) if universe is not None else []
    parser = _Parser(text, names, auto)
    node = parser.formula()
    tok, pos, _ = parser.take()
    if tok is not None:
        raise ParseError(f"unexpected {tok!r}", pos)
    return node, VarUniverse(tuple(names))


def parse_theory(text: str, universe: VarUniverse | None = None, *, auto: bool | None = None) -> Theory:
    """Parse a theory file: one formula per line, blank and ``#`` lines skipped."""
    if auto is None:
        auto = universe is None
    current = universe if universe is not None else VarUniverse()
    statements = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            f, current = parse_formula(stripped, current, auto=auto)
        except ParseError as exc:
            exc.args = (f"line {lineno}: {exc}",)
            raise
        statements.append(f)
    return Theory(current, tuple(statements))


# -- printing --------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def _prec(f):
    return _PREC.get(type(f), 6)


def to_string(f: Formula, universe: VarUniverse) -> str:
    """Render ``f`` with the minimum parentheses the grammar needs to re-parse it identically."""

    def wrap(child, min_prec):
        s = render(child)
        return f"({s})" if _prec(child) < min_prec else s

    def render(g):
        if isinstance(g, Var):
            return universe.names[g.index]
        if isinstance(g, Const):
            return "true" if g.value else "false"
        if isinstance(g, Not):
            return "!" + wrap(g.child, 5)
        if isinstance(g, And):
            return " & ".join(wrap(c, 5) for c in g.children)
        if isinstance(g, Or):
            return " | ".join(wrap(c, 4) for c in g.children)
        if isinstance(g, Implies):
            return f"{wrap(g.lhs, 3)} -> {wrap(g.rhs, 2)}"
        if isinstance(g, Iff):
            return f"{wrap(g.lhs, 1)} <-> {wrap(g.rhs, 2)}"
        raise TypeError(f"not a formula: {g!r}")

    return render(f)


# -- semantics -------------------------------------------------------------

def evaluate(f: Formula, world) -> bool:
    """Truth value of ``f`` in ``world`` (anything with a ``bits`` sequence)."""
    bits = world.bits
    if isinstance(f, Var):
        return bits[f.index]
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate(f.child, world)
    if isinstance(f, And):
        return all(evaluate(c, world) for c in f.children)
    if isinstance(f, Or):
        return any(evaluate(c, world) for c in f.children)
    if isinstance(f, Implies):
        return (not evaluate(f.lhs, world)) or evaluate(f.rhs, world)
    if isinstance(f, Iff):
        return evaluate(f.lhs, world) == evaluate(f.rhs, world)
    raise TypeError(f"not a formula: {f!r}")


def models_theory(theory: Theory, world) -> bool:
    return all(evaluate(s, world) for s in theory.statements)


def free_variables(f: Formula) -> frozenset[int]:
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.index)
        elif isinstance(g, Not):
            stack.append(g.child)
        elif isinstance(g, (And, Or)):
            stack.extend(g.children)
        elif isinstance(g, (Implies, Iff)):
            stack.extend((g.lhs, g.rhs))
    return frozenset(out)
