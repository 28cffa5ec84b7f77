"""Enumeration and counting of the worlds that model a theory.

Worlds are ordered by reading the assignment as a binary number with the
first universe variable as the most significant bit (false=0, true=1).
Every search in the package breaks ties by taking the first world in this
order, whatever the worker count.

The backend is a vectorised truth table: the world index range is cut into
chunks of ``2**chunk_bits`` indices, each chunk is evaluated with numpy
boolean arithmetic, and chunks may be spread over a thread pool. Results are
always reassembled in index order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, TypeVar

import numpy as np

from .errors import VariableLimitExceeded
from .formula import And, Const, Formula, Iff, Implies, Not, Or, Theory, Var, VarUniverse, literal

T = TypeVar("T")


@dataclass(frozen=True)
class SolverConfig:
    n_max: int = 24
    p_max: int = 20
    workers: int = 1
    chunk_bits: int = 16

    def __post_init__(self):
        for field in ("n_max", "p_max", "workers", "chunk_bits"):
            if getattr(self, field) < 1:
                raise ValueError(f"{field} must be positive")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class World:
    universe: VarUniverse
    bits: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))
        if len(self.bits) != self.universe.n:
            raise ValueError("assignment length does not match universe size")

    @classmethod
    def from_index(cls, universe: VarUniverse, index: int) -> World:
        n = universe.n
        return cls(universe, tuple(bool((index >> (n - 1 - i)) & 1) for i in range(n)))

    @classmethod
    def from_mapping(cls, universe: VarUniverse, values: dict) -> World:
        return cls(universe, tuple(bool(values[name]) for name in universe.names))

    @property
    def index(self) -> int:
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out

    @property
    def signs(self) -> tuple[int, ...]:
        """The world as a map X -> {-1, +1}."""
        return tuple(1 if b else -1 for b in self.bits)

    def sign(self, name: str) -> int:
        return 1 if self.bits[self.universe.index(name)] else -1

    def literals(self) -> tuple[Formula, ...]:
        return tuple(literal(i, b) for i, b in enumerate(self.bits))

    def __str__(self):
        if not self.bits:
            return "true"
        return "&".join(name if b else "!" + name for name, b in zip(self.universe.names, self.bits))


@dataclass(frozen=True)
class ModelCount:
    total: int
    per_variable_true: tuple[int, ...]


def check_size(n: int, config: SolverConfig | None = None, limit: int | None = None):
    config = config or DEFAULT_CONFIG
    limit = config.n_max if limit is None else limit
    if n > limit:
        raise VariableLimitExceeded(n, limit)


def bit_columns(n: int, idx: np.ndarray) -> list[np.ndarray]:
    """Boolean value of every variable across the world indices ``idx``."""
    return [((idx >> (n - 1 - i)) & 1).astype(bool) for i in range(n)]


def formula_mask(f: Formula, cols: list[np.ndarray], size: int) -> np.ndarray:
    if isinstance(f, Var):
        return cols[f.index]
    if isinstance(f, Const):
        return np.full(size, f.value, dtype=bool)
    if isinstance(f, Not):
        return ~formula_mask(f.child, cols, size)
    if isinstance(f, And):
        out = formula_mask(f.children[0], cols, size).copy()
        for c in f.children[1:]:
            out &= formula_mask(c, cols, size)
        return out
    if isinstance(f, Or):
        out = formula_mask(f.children[0], cols, size).copy()
        for c in f.children[1:]:
            out |= formula_mask(c, cols, size)
        return out
    if isinstance(f, Implies):
        return ~formula_mask(f.lhs, cols, size) | formula_mask(f.rhs, cols, size)
    if isinstance(f, Iff):
        return formula_mask(f.lhs, cols, size) == formula_mask(f.rhs, cols, size)
    raise TypeError(f"not a formula: {f!r}")


def chunk_ranges(n: int, config: SolverConfig) -> list[tuple[int, int]]:
    total = 1 << n
    step = 1 << config.chunk_bits
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def map_chunks(fn: Callable[[np.ndarray], T], n: int, config: SolverConfig | None = None) -> Iterator[T]:
    """Apply ``fn`` to each chunk of world indices, yielding results in index order."""
    config = config or DEFAULT_CONFIG
    check_size(n, config)
    ranges = chunk_ranges(n, config)

    def run(bounds):
        lo, hi = bounds
        return fn(np.arange(lo, hi, dtype=np.int64))

    if config.workers == 1 or len(ranges) == 1:
        yield from map(run, ranges)
        return
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        yield from pool.map(run, ranges)


def _theory_chunk(theory: Theory):
    n = theory.universe.n

    def models_in(idx):
        cols = bit_columns(n, idx)
        mask = np.ones(len(idx), dtype=bool)
        for s in theory.statements:
            mask &= formula_mask(s, cols, len(idx))
            if not mask.any():
                break
        return idx[mask]

    return models_in


def model_indices(theory: Theory, config: SolverConfig | None = None) -> np.ndarray:
    """Ascending indices of all worlds modeling ``theory``."""
    parts = list(map_chunks(_theory_chunk(theory), theory.universe.n, config))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def enumerate_models(theory: Theory, config: SolverConfig | None = None) -> Iterator[World]:
    universe = theory.universe
    for idx in map_chunks(_theory_chunk(theory), universe.n, config):
        for i in idx.tolist():
            yield World.from_index(universe, i)


def count_models(theory: Theory, config: SolverConfig | None = None) -> ModelCount:
    n = theory.universe.n
    idx = model_indices(theory, config)
    per_var = tuple(int(c.sum()) for c in bit_columns(n, idx))
    return ModelCount(int(len(idx)), per_var)


def is_satisfiable(theory: Theory, config: SolverConfig | None = None) -> bool:
    models = _theory_chunk(theory)
    return any(len(part) for part in map_chunks(models, theory.universe.n, config))
