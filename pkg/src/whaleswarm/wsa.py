"""Whale Swarm Algorithm.

Each whale moves toward its *better and nearest* whale: the closest member
of the swarm with strictly lower fitness. The step in every dimension is a
uniform random fraction in ``[0, rho)`` of the gap to that guide, where
``rho = rho0 * exp(-eta * distance)`` is the attenuated ultrasound
intensity. Close guides pull hard and far guides barely at all, which lets
separate sub-swarms settle on separate optima.

Updates are asynchronous: within one sweep, whale ``i`` is moved and
re-evaluated before whale ``i + 1`` looks for its guide. Moves are always
accepted. The best whale has no strictly better guide and never moves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numba import njit

from .exceptions import InvalidArgumentError
from .objective import Bounds, Objective, d_max
from .swarm_core import (
    EvalBudget,
    Recorder,
    RunResult,
    Swarm,
    Whale,
    euclidean_distance,
    init_swarm,
    make_rng,
)

__all__ = [
    "WsaParams",
    "intensity",
    "default_eta",
    "better_nearest",
    "move_whale",
    "run_wsa",
]

DEFAULT_RHO0 = 2.0


@dataclass(frozen=True)
class WsaParams:
    """WSA settings. ``eta=None`` means :func:`default_eta` of the bounds."""

    pop_size: int
    max_evals: int
    eta: Optional[float] = None
    rho0: float = DEFAULT_RHO0

    def __post_init__(self):
        if self.rho0 <= 0:
            raise InvalidArgumentError("rho0 must be > 0")
        if self.eta is not None and self.eta <= 0:
            raise InvalidArgumentError("eta must be > 0")
        if self.pop_size < 1:
            raise InvalidArgumentError("pop_size must be >= 1")
        if self.max_evals < 1:
            raise InvalidArgumentError("max_evals must be >= 1")


def intensity(rho0: float, eta: float, d: float) -> float:
    """Ultrasound intensity ``rho0 * exp(-eta * d)`` at distance ``d``."""
    if d < 0:
        raise InvalidArgumentError("distance must be non-negative")
    return rho0 * math.exp(-eta * d)


def default_eta(bounds: Bounds) -> float:
    """Starting ``eta``: with ``rho0 = 2``, intensity drops to 0.5 at ``d_max / 20``."""
    return 20.0 * math.log(4.0) / d_max(bounds)


@njit(cache=True)
def _better_nearest(positions, fitness, u):
    # Mirrors the reference scan: strict "<" on fitness, strict "<" on
    # distance, so the lowest index wins a distance tie.
    n, d = positions.shape
    v = -1
    best = np.inf
    fu = fitness[u]
    for i in range(n):
        if i != u and fitness[i] < fu:
            s = 0.0
            for k in range(d):
                t = positions[i, k] - positions[u, k]
                s += t * t
            s = math.sqrt(s)
            if s < best:
                v = i
                best = s
    return v, best


def better_nearest(swarm: Swarm, u: int) -> Optional[int]:
    """Index of the closest whale strictly fitter than whale ``u``, or None."""
    n = len(swarm)
    if not (0 <= int(u) < n):
        raise InvalidArgumentError(f"whale index {u} out of range for swarm of {n}")
    v, _ = _better_nearest(swarm.positions, swarm.fitness, int(u))
    return None if v < 0 else int(v)


def _guided_step(x, y, rho, rng, lower, upper):
    new = x + rho * rng.random(x.size) * (y - x)
    np.clip(new, lower, upper, out=new)
    return new


def move_whale(x: Whale, y: Whale, params: WsaParams, rng, bounds: Bounds,
               distance: Optional[float] = None) -> np.ndarray:
    """New position of ``x`` guided by ``y``, clamped to ``bounds``.

    Draws one uniform number per dimension from ``rng.random``. ``distance``
    may be passed when the caller already knows it.
    """
    xp = np.asarray(x.position, dtype=float)
    yp = np.asarray(y.position, dtype=float)
    if distance is None:
        distance = euclidean_distance(xp, yp)
    elif xp.shape != yp.shape:
        raise InvalidArgumentError(f"length mismatch: {xp.shape} vs {yp.shape}")
    eta = params.eta if params.eta is not None else default_eta(bounds)
    rho = intensity(params.rho0, eta, distance)
    return _guided_step(xp, yp, rho, rng, bounds.lower, bounds.upper)


def run_wsa(obj: Objective, params: WsaParams, seed=None,
            callback: Optional[Callable[[int, Swarm], None]] = None) -> RunResult:
    """Run WSA on ``obj`` until the evaluation budget is spent.

    Parameters
    ----------
    obj : Objective
        Problem to minimize.
    params : WsaParams
        Swarm size, budget, ``eta`` and ``rho0``.
    seed : int or Generator, optional
        Seed of the run's PCG64 stream.
    callback : callable, optional
        Called as ``callback(i, swarm)`` after whale ``i`` has moved and been
        re-evaluated. The swarm is live state and must not be modified.

    Returns
    -------
    RunResult
        ``stop_reason`` is ``"stalled"`` if a whole sweep moved no whale
        (every whale tied with the best), since nothing can change after
        that.
    """
    if params.max_evals < params.pop_size:
        raise InvalidArgumentError(
            f"max_evals ({params.max_evals}) must be >= pop_size ({params.pop_size})"
        )
    eta = params.eta if params.eta is not None else default_eta(obj.bounds)
    rho0 = params.rho0
    lower, upper = obj.bounds.lower, obj.bounds.upper

    rng = make_rng(seed)
    budget = EvalBudget(params.max_evals)
    recorder = Recorder(params.max_evals)
    swarm = init_swarm(obj, params.pop_size, rng, budget, recorder)
    positions, fitness = swarm.positions, swarm.fitness

    stop_reason = "budget"
    while not budget.exhausted:
        moved = False
        for i in range(len(swarm)):
            if budget.exhausted:
                break
            v, dist = _better_nearest(positions, fitness, i)
            if v < 0:
                continue
            rho = rho0 * math.exp(-eta * dist)
            new = _guided_step(positions[i], positions[v], rho, rng, lower, upper)
            positions[i] = new
            fitness[i] = budget.evaluate(obj, new)
            recorder.record(new, fitness[i], fitness)
            moved = True
            if callback is not None:
                callback(i, swarm)
        if not moved:
            stop_reason = "stalled"
            break

    return recorder.result("wsa", swarm, seed, params.max_evals, stop_reason)
