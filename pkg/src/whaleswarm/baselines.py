"""Comparison optimizers: DE/best/1/bin, inertia-weight PSO and a real-coded GA.

All three share the WSA conventions: one PCG64 stream per run, uniform
initialization through :func:`~whaleswarm.swarm_core.init_swarm`, clamping
to the box, and a hard evaluation budget. When the budget runs out
mid-generation the remaining members keep their previous position and
fitness.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgumentError
from .objective import Objective
from .swarm_core import EvalBudget, Recorder, RunResult, Swarm, init_swarm, make_rng

__all__ = [
    "DeParams",
    "PsoParams",
    "GaParams",
    "run_de_best_1_bin",
    "run_pso_inertia",
    "run_ga",
    "pso_velocity",
]


def _check_budget(pop_size, max_evals):
    if pop_size < 1:
        raise InvalidArgumentError("pop_size must be >= 1")
    if max_evals < pop_size:
        raise InvalidArgumentError(
            f"max_evals ({max_evals}) must be >= pop_size ({pop_size})"
        )


@dataclass(frozen=True)
class DeParams:
    pop_size: int
    max_evals: int
    crossover: float = 0.7
    scale: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.crossover <= 1.0:
            raise InvalidArgumentError("crossover probability must be in [0, 1]")
        if self.scale <= 0:
            raise InvalidArgumentError("scaling factor must be > 0")


@dataclass(frozen=True)
class PsoParams:
    pop_size: int
    max_evals: int
    inertia: float = 0.729844
    c1: float = 2.0
    c2: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.inertia < 1.0:
            raise InvalidArgumentError("inertia must be in (0, 1)")
        if self.c1 <= 0 or self.c2 <= 0:
            raise InvalidArgumentError("acceleration factors must be > 0")


@dataclass(frozen=True)
class GaParams:
    pop_size: int
    max_evals: int
    crossover: float = 0.95
    mutation: float = 0.05
    tournament_size: int = 2

    def __post_init__(self):
        for name in ("crossover", "mutation"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidArgumentError(f"{name} probability must be in [0, 1]")
        if self.tournament_size < 1:
            raise InvalidArgumentError("tournament_size must be >= 1")


def run_de_best_1_bin(obj: Objective, params: DeParams, seed=None) -> RunResult:
    """Differential evolution, DE/best/1/bin with greedy one-to-one selection.

    Trials of one generation are built from the population as it stood at
    the start of that generation; a trial replaces its target only when it
    is strictly better.
    """
    if params.pop_size < 4:
        raise InvalidArgumentError("DE/best/1/bin needs pop_size >= 4")
    _check_budget(params.pop_size, params.max_evals)
    rng = make_rng(seed)
    budget = EvalBudget(params.max_evals)
    recorder = Recorder(params.max_evals)
    swarm = init_swarm(obj, params.pop_size, rng, budget, recorder)
    lower, upper = obj.bounds.lower, obj.bounds.upper
    n, dim = swarm.positions.shape
    others = np.arange(n)

    while not budget.exhausted:
        pos, fit = swarm.positions.copy(), swarm.fitness.copy()
        best = pos[int(np.argmin(fit))]
        for i in range(n):
            if budget.exhausted:
                break
            r1, r2 = rng.choice(others[others != i], size=2, replace=False)
            donor = best + params.scale * (pos[r1] - pos[r2])
            mask = rng.random(dim) < params.crossover
            mask[rng.integers(dim)] = True
            trial = np.clip(np.where(mask, donor, pos[i]), lower, upper)
            f = budget.evaluate(obj, trial)
            if f < fit[i]:
                swarm.positions[i] = trial
                swarm.fitness[i] = f
            recorder.record(trial, f, swarm.fitness)

    return recorder.result("de", swarm, seed, params.max_evals)


def pso_velocity(v, x, pbest, gbest, params: PsoParams, r1, r2, vmax):
    """Inertia-weight velocity update, clamped to ``[-vmax, vmax]``."""
    v = params.inertia * v + params.c1 * r1 * (pbest - x) + params.c2 * r2 * (gbest - x)
    return np.clip(v, -vmax, vmax)


def run_pso_inertia(obj: Objective, params: PsoParams, seed=None) -> RunResult:
    """Global-best PSO with a constant inertia weight.

    Velocities start at zero and are clamped to the box width per dimension;
    positions are clamped to the box. Particles update one after another and
    the global best is refreshed immediately. The returned final population
    is the particles' current positions; personal bests are internal memory.
    """
    _check_budget(params.pop_size, params.max_evals)
    rng = make_rng(seed)
    budget = EvalBudget(params.max_evals)
    recorder = Recorder(params.max_evals)
    pbest = init_swarm(obj, params.pop_size, rng, budget, recorder)
    lower, upper = obj.bounds.lower, obj.bounds.upper
    vmax = obj.bounds.width
    x = pbest.positions.copy()
    current = pbest.fitness.copy()
    v = np.zeros_like(x)
    n, dim = x.shape
    g = int(np.argmin(pbest.fitness))

    while not budget.exhausted:
        for i in range(n):
            if budget.exhausted:
                break
            r1 = rng.random(dim)
            r2 = rng.random(dim)
            v[i] = pso_velocity(v[i], x[i], pbest.positions[i], pbest.positions[g],
                                params, r1, r2, vmax)
            x[i] = np.clip(x[i] + v[i], lower, upper)
            f = budget.evaluate(obj, x[i])
            current[i] = f
            if f < pbest.fitness[i]:
                pbest.positions[i] = x[i]
                pbest.fitness[i] = f
                if f < pbest.fitness[g]:
                    g = i
            recorder.record(x[i], f, current)

    return recorder.result("pso", Swarm(x, current), seed, params.max_evals)


def _tournament(fitness, size, rng):
    picks = rng.integers(fitness.size, size=size)
    return int(picks[np.argmin(fitness[picks])])


def run_ga(obj: Objective, params: GaParams, seed=None) -> RunResult:
    """Generational real-coded GA with a single elite.

    Each generation keeps the best individual in place and refills the other
    slots with children: two tournament-selected parents, arithmetic
    crossover ``lam * p1 + (1 - lam) * p2`` with one uniform ``lam`` per
    child (applied with the crossover probability, otherwise the child
    copies ``p1``), then per-gene uniform reset within the bounds with the
    mutation probability. Every child is evaluated.
    """
    _check_budget(params.pop_size, params.max_evals)
    rng = make_rng(seed)
    budget = EvalBudget(params.max_evals)
    recorder = Recorder(params.max_evals)
    swarm = init_swarm(obj, params.pop_size, rng, budget, recorder)
    lower, upper = obj.bounds.lower, obj.bounds.upper
    n, dim = swarm.positions.shape

    while not budget.exhausted and n > 1:
        parents_pos, parents_fit = swarm.positions.copy(), swarm.fitness.copy()
        elite = int(np.argmin(parents_fit))
        slots = [j for j in range(n) if j != elite]
        for j in slots:
            if budget.exhausted:
                break
            p1 = parents_pos[_tournament(parents_fit, params.tournament_size, rng)]
            p2 = parents_pos[_tournament(parents_fit, params.tournament_size, rng)]
            if rng.random() < params.crossover:
                lam = rng.random()
                child = lam * p1 + (1.0 - lam) * p2
            else:
                child = p1.copy()
            mutate = rng.random(dim) < params.mutation
            if mutate.any():
                child[mutate] = rng.uniform(lower[mutate], upper[mutate])
            child = np.clip(child, lower, upper)
            swarm.positions[j] = child
            swarm.fitness[j] = budget.evaluate(obj, child)
            recorder.record(child, swarm.fitness[j], swarm.fitness)

    stop = "budget" if budget.exhausted else "stalled"
    return recorder.result("ga", swarm, seed, params.max_evals, stop)
