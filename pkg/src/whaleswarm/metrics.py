"""Evaluation metrics: optimum detection, optima counting, SR, ANOF, MPR and
convergence-curve averaging.

A solution counts as a located global optimum when its fitness is within
the accuracy level ``eps`` of the known minimum. Qualifying members of a
run's final population are assigned to their nearest known optimum; the
number of distinct optima that receive at least one member is the run's
covered count.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import InvalidArgumentError, NoQualifyingOptimaError
from .objective import Objective
from .swarm_core import RunResult, Swarm

__all__ = [
    "OptimaAssignment",
    "ConvergenceCurve",
    "ExperimentReport",
    "is_global_optimum",
    "count_optima",
    "mpr",
    "success_rate",
    "anof",
    "default_grid",
    "average_convergence",
    "summarize",
]


def is_global_optimum(fitness: float, target: float, eps: float) -> bool:
    if eps <= 0:
        raise InvalidArgumentError("eps must be > 0")
    return abs(fitness - target) < eps


@dataclass
class OptimaAssignment:
    """Qualifying solutions of one population and the optima they cover.

    ``representatives`` maps each covered optimum index to the fittest
    ``(position, fitness)`` assigned to it.
    """

    positions: np.ndarray
    fitness: np.ndarray
    assigned: np.ndarray
    representatives: dict = field(default_factory=dict)

    @property
    def covered_optima(self) -> frozenset:
        return frozenset(self.representatives)

    @property
    def covered_count(self) -> int:
        return len(self.representatives)


def count_optima(final_pop: Swarm, obj: Objective, eps: Optional[float] = None,
                 niche_radius: Optional[float] = None) -> OptimaAssignment:
    """Assign qualifying members of ``final_pop`` to their nearest known optimum.

    ``eps`` defaults to the objective's accuracy level. ``niche_radius``, when
    given, additionally drops members farther than that from every optimum.
    """
    eps = obj.accuracy if eps is None else eps
    optima = obj.optima
    if optima is None or len(optima) == 0:
        raise InvalidArgumentError(f"{obj.id} has no known optima")
    fit = np.asarray(final_pop.fitness, dtype=float)
    pos = np.asarray(final_pop.positions, dtype=float)
    keep = np.array([is_global_optimum(f, obj.target_value, eps) for f in fit], dtype=bool)
    pos, fit = pos[keep], fit[keep]

    if len(fit):
        dist = np.sqrt(((pos[:, None, :] - optima[None, :, :]) ** 2).sum(axis=-1))
        nearest = np.argmin(dist, axis=1)
        if niche_radius is not None:
            near = dist[np.arange(len(fit)), nearest] <= niche_radius
            pos, fit, nearest = pos[near], fit[near], nearest[near]
    else:
        nearest = np.empty(0, dtype=int)

    reps = {}
    for p, f, k in zip(pos, fit, nearest):
        k = int(k)
        if k not in reps or f < reps[k][1]:
            reps[k] = (p.copy(), float(f))
    return OptimaAssignment(pos, fit, nearest, reps)


def mpr(assignment: OptimaAssignment, obj: Objective) -> float:
    """Maximum peak ratio over the covered optima.

    ``sum(F_i - F* + 1) / sum(f_i - F* + 1)`` where ``f_i`` is the best
    fitness found at covered optimum ``i``, ``F_i`` the true value there and
    ``F*`` the exact global minimum. Equals 1 when every found optimum is
    exact.
    """
    q = assignment.covered_count
    if q == 0:
        raise NoQualifyingOptimaError(f"no global optimum of {obj.id} was located")
    f_star = obj.optimum_value
    optima = obj.optima
    num = 0.0
    den = 0.0
    for k, (_, f) in sorted(assignment.representatives.items()):
        num += obj(optima[k]) - f_star + 1.0
        den += f - f_star + 1.0
    return num / den


def success_rate(covered_counts: Sequence[int], n_opt: int) -> float:
    counts = np.asarray(covered_counts)
    if counts.size == 0:
        raise InvalidArgumentError("need at least one run")
    return float(np.mean(counts == n_opt))


def anof(covered_counts: Sequence[int]) -> float:
    counts = np.asarray(covered_counts, dtype=float)
    if counts.size == 0:
        raise InvalidArgumentError("need at least one run")
    return float(counts.mean())


@dataclass
class ConvergenceCurve:
    evals: np.ndarray
    mean_best: np.ndarray
    mean_pop_avg: np.ndarray


def default_grid(max_evals: int, max_points: int = 10_000) -> np.ndarray:
    """Evenly spaced evaluation checkpoints, at most ``max_points``, ending at ``max_evals``."""
    if max_evals <= max_points:
        return np.arange(1, max_evals + 1)
    return np.unique(np.round(np.linspace(1, max_evals, max_points)).astype(np.int64))


def _sample(trace: np.ndarray, grid: np.ndarray) -> np.ndarray:
    # Step interpolation; runs that stopped early carry their last value.
    idx = np.minimum(grid, trace.size) - 1
    return trace[idx]


def average_convergence(runs: Sequence[RunResult], grid=None) -> ConvergenceCurve:
    """Mean best-so-far and mean population-average fitness on ``grid``."""
    if not runs:
        raise InvalidArgumentError("need at least one run")
    if grid is None:
        grid = default_grid(max(r.max_evals for r in runs))
    grid = np.asarray(grid, dtype=np.int64)
    if grid.size == 0 or grid.min() < 1:
        raise InvalidArgumentError("grid checkpoints must be >= 1")
    best = np.mean([_sample(r.trace_best, grid) for r in runs], axis=0)
    pop = np.mean([_sample(r.trace_pop_mean, grid) for r in runs], axis=0)
    return ConvergenceCurve(grid, best, pop)


@dataclass
class ExperimentReport:
    """Aggregate of repeated runs of one algorithm on one function.

    ``mprs`` holds ``None`` for runs that located no global optimum; those
    runs are left out of ``mpr_mean``/``mpr_std`` and counted in
    ``mpr_missing``.
    """

    function_id: str
    algorithm: str
    runs: list = field(repr=False)
    covered: list
    mprs: list
    sr: float
    anof: float
    mpr_mean: Optional[float]
    mpr_std: Optional[float]
    mpr_missing: int
    convergence: ConvergenceCurve = field(repr=False)

    @property
    def best_fitnesses(self) -> np.ndarray:
        return np.array([r.best_fitness for r in self.runs])


def summarize(runs: Sequence[RunResult], obj: Objective, algorithm: str,
              eps: Optional[float] = None, niche_radius: Optional[float] = None,
              grid=None) -> ExperimentReport:
    runs = list(runs)
    if not runs:
        raise InvalidArgumentError("need at least one run")
    covered, mprs = [], []
    for r in runs:
        a = count_optima(r.final_population, obj, eps, niche_radius)
        covered.append(a.covered_count)
        mprs.append(mpr(a, obj) if a.covered_count else None)
    present = [m for m in mprs if m is not None]
    return ExperimentReport(
        function_id=obj.id,
        algorithm=algorithm,
        runs=runs,
        covered=covered,
        mprs=mprs,
        sr=success_rate(covered, obj.num_global_optima),
        anof=anof(covered),
        mpr_mean=float(np.mean(present)) if present else None,
        mpr_std=float(np.std(present)) if present else None,
        mpr_missing=len(mprs) - len(present),
        convergence=average_convergence(runs, grid),
    )
