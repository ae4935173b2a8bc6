"""Population model, RNG contract, distance and evaluation budget.

Every optimizer run owns one ``numpy.random.Generator`` built on PCG64 and
seeded through ``numpy.random.default_rng(seed)``. Draws happen in a fixed
order: the initial positions first (whale by whale, dimension by dimension),
then whatever the optimizer's update loop consumes, in loop order. Replaying
a seed therefore reproduces a run bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import BudgetExhaustedError, InvalidArgumentError
from .objective import Objective

__all__ = [
    "Whale",
    "Swarm",
    "EvalBudget",
    "Recorder",
    "RunResult",
    "make_rng",
    "init_swarm",
    "euclidean_distance",
]


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator for one run. Passing a Generator returns it unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def euclidean_distance(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"length mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.sqrt(np.dot(diff, diff)))


@dataclass
class Whale:
    """One candidate solution: a position and its cached fitness."""

    position: np.ndarray
    fitness: float


@dataclass(eq=False)
class Swarm:
    """Fixed-size population stored as parallel arrays.

    Index ``i`` is the identity of whale ``i`` for the whole run; updates
    happen in place and never reorder rows.
    """

    positions: np.ndarray
    fitness: np.ndarray

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        self.fitness = np.asarray(self.fitness, dtype=float)
        if self.positions.ndim != 2 or self.fitness.shape != (self.positions.shape[0],):
            raise InvalidArgumentError("positions must be (n, d) and fitness (n,)")

    def __len__(self) -> int:
        return self.positions.shape[0]

    def __getitem__(self, i) -> Whale:
        return Whale(self.positions[i].copy(), float(self.fitness[i]))

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.fitness))

    def copy(self) -> "Swarm":
        return Swarm(self.positions.copy(), self.fitness.copy())


class EvalBudget:
    """Counts objective evaluations against a hard limit.

    Optimizers check :attr:`exhausted` before starting a unit of work and
    route every evaluation through :meth:`evaluate`, so ``used`` always
    equals the number of objective calls made.
    """

    def __init__(self, max_evals: int):
        if int(max_evals) < 1:
            raise InvalidArgumentError("max_evals must be a positive integer")
        self.max_evals = int(max_evals)
        self.used = 0

    @property
    def remaining(self) -> int:
        return self.max_evals - self.used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.max_evals

    def evaluate(self, obj: Objective, x) -> float:
        if self.used >= self.max_evals:
            raise BudgetExhaustedError(f"evaluation budget of {self.max_evals} exhausted")
        self.used += 1
        return obj(x)

    def __repr__(self):
        return f"EvalBudget(max_evals={self.max_evals}, used={self.used})"


class Recorder:
    """Per-evaluation trace of best-so-far and population-mean fitness.

    Entry ``k`` describes the state right after evaluation ``k + 1``.
    During initialization the population mean covers only the whales
    evaluated so far.
    """

    def __init__(self, capacity: int):
        self._best = np.empty(capacity)
        self._pop_mean = np.empty(capacity)
        self.n = 0
        self.best_fitness = np.inf
        self.best_position: Optional[np.ndarray] = None

    def record(self, x: np.ndarray, fitness: float, population_fitness: np.ndarray):
        if fitness < self.best_fitness:
            self.best_fitness = fitness
            self.best_position = np.array(x, dtype=float)
        self._best[self.n] = self.best_fitness
        self._pop_mean[self.n] = population_fitness.mean()
        self.n += 1

    def result(self, algorithm: str, swarm: Swarm, seed, max_evals: int,
               stop_reason: str = "budget") -> "RunResult":
        return RunResult(
            algorithm=algorithm,
            best_position=self.best_position,
            best_fitness=float(self.best_fitness),
            final_population=swarm.copy(),
            trace_best=self._best[: self.n].copy(),
            trace_pop_mean=self._pop_mean[: self.n].copy(),
            seed=seed,
            evals_used=self.n,
            max_evals=max_evals,
            stop_reason=stop_reason,
        )


@dataclass(eq=False)
class RunResult:
    """Outcome of one optimizer execution.

    ``trace_best[k]`` and ``trace_pop_mean[k]`` are the best-so-far and
    population-average fitness after ``k + 1`` evaluations. ``stop_reason``
    is ``"budget"`` or ``"stalled"`` (a full sweep in which no member could
    change, after which every further sweep is a no-op).
    """

    algorithm: str
    best_position: np.ndarray
    best_fitness: float
    final_population: Swarm
    trace_best: np.ndarray = field(repr=False)
    trace_pop_mean: np.ndarray = field(repr=False)
    seed: object
    evals_used: int
    max_evals: int
    stop_reason: str = "budget"

    @property
    def trace_evals(self) -> np.ndarray:
        return np.arange(1, self.evals_used + 1)

    @property
    def trace(self) -> np.ndarray:
        """``(evals_used, 2)`` array of ``(evaluations, best_so_far)`` rows."""
        return np.column_stack([self.trace_evals, self.trace_best])


def init_swarm(obj: Objective, size: int, rng: np.random.Generator, budget: EvalBudget,
               recorder: Optional[Recorder] = None) -> Swarm:
    """Uniform random population inside the bounds, fully evaluated."""
    size = int(size)
    if size < 1:
        raise InvalidArgumentError("swarm size must be positive")
    if budget.remaining < size:
        raise BudgetExhaustedError(
            f"initializing {size} whales needs {size} evaluations, {budget.remaining} left"
        )
    lower, upper = obj.bounds.lower, obj.bounds.upper
    positions = rng.uniform(lower, upper, size=(size, obj.dimension))
    fitness = np.empty(size)
    for i in range(size):
        fitness[i] = budget.evaluate(obj, positions[i])
        if recorder is not None:
            recorder.record(positions[i], fitness[i], fitness[: i + 1])
    return Swarm(positions, fitness)
