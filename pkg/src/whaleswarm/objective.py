"""Benchmark objectives F1-F12 with bounds, known optima and shift wrappers.

All functions are minimization problems. F1-F6 are low-dimensional
multimodal functions with a fixed dimension; F7-F12 are scalable
(100-D by default) and are normally used through :func:`make_shifted`,
which translates the landscape by a seeded random offset ``o`` so that
``f_shifted(x) = f(x - o)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .exceptions import InvalidArgumentError, UnsupportedFunctionError

__all__ = [
    "Bounds",
    "Objective",
    "FunctionInfo",
    "ShiftRecord",
    "FUNCTIONS",
    "SHIFT_FRACTION",
    "evaluate",
    "d_max",
    "get_objective",
    "make_shifted",
    "with_shift",
    "known_optima",
    "function_ids",
    "write_shift_records",
    "read_shift_records",
]

# Shift components are drawn from 25% of the slack between the unshifted
# optimum and each bound, so the shifted optimum stays interior.
SHIFT_FRACTION = 0.25


@dataclass(frozen=True, eq=False)
class Bounds:
    """Axis-aligned search box ``[lower, upper]``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size < 1:
            raise InvalidArgumentError(
                "lower and upper must be 1-D vectors of equal length >= 1"
            )
        if not np.all(lower < upper):
            raise InvalidArgumentError("lower[i] < upper[i] must hold for every i")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, low: float, high: float, dimension: int) -> "Bounds":
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


def d_max(bounds: Bounds) -> float:
    """Length of the search-box diagonal, the largest possible whale distance."""
    return float(np.sqrt(np.sum((bounds.upper - bounds.lower) ** 2)))


# --------------------------------------------------------------------------
# Base formulas. Each takes an unshifted 1-D float array.
# --------------------------------------------------------------------------

_LN2 = math.log(2.0)


def _uneven_increasing(x):
    x1 = x[0]
    envelope = math.exp(-2.0 * _LN2 * ((x1 - 0.08) / 0.854) ** 2)
    return -envelope * math.sin(5.0 * math.pi * (x1 ** 0.75 - 0.05)) ** 6


def _uneven(x):
    return -math.sin(5.0 * math.pi * (x[0] ** 0.75 - 0.05)) ** 6


def _himmelblau(x):
    x1, x2 = x[0], x[1]
    return (x1 * x1 + x2 - 11.0) ** 2 + (x1 + x2 * x2 - 7.0) ** 2 - 200.0


def _six_hump_camel(x):
    x1, x2 = x[0], x[1]
    x1s, x2s = x1 * x1, x2 * x2
    return 4.0 * ((4.0 - 2.1 * x1s + x1s * x1s / 3.0) * x1s + x1 * x2
                  + (-4.0 + 4.0 * x2s) * x2s)


_SHUBERT_J = np.arange(1.0, 6.0)


def _shubert(x):
    terms = _SHUBERT_J * np.cos(np.outer(x, _SHUBERT_J + 1.0) + _SHUBERT_J)
    return float(np.prod(terms.sum(axis=1)))


def _branin(x):
    x1, x2 = x[0], x[1]
    a = x2 - 5.1 / (4.0 * math.pi ** 2) * x1 * x1 + 5.0 / math.pi * x1 - 6.0
    return a * a + 10.0 * (1.0 - 1.0 / (8.0 * math.pi)) * math.cos(x1) + 10.0


def _rastrigin(x):
    return float(np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x) + 10.0))


def _schwefel(x):
    return float(x.size * 418.9829 - np.sum(x * np.sin(np.sqrt(np.abs(x)))))


def _griewank(x):
    idx = np.sqrt(np.arange(1.0, x.size + 1.0))
    return float(-np.prod(np.cos(x / idx)) + np.sum(x * x) / 4000.0 + 1.0)


def _rosenbrock(x):
    head, tail = x[:-1], x[1:]
    return float(np.sum(100.0 * (tail - head * head) ** 2 + (head - 1.0) ** 2))


def _sphere(x):
    return float(np.dot(x, x))


def _zakharov(x):
    s = 0.5 * np.dot(np.arange(1.0, x.size + 1.0), x)
    return float(np.dot(x, x) + s ** 2 + s ** 4)


# --------------------------------------------------------------------------
# Known optima of the fixed-dimension functions. Values come from closed
# forms where they exist and from 1e-14 local refinement otherwise; the test
# suite re-derives every one of them independently.
# --------------------------------------------------------------------------

_SHUBERT_1D_MIN = (-7.708313735503664, -1.4251284274863787, 4.858056878592665)
_SHUBERT_1D_MAX = (-7.083506407471094, -0.8003211002342825, 5.482864206820635)

_KNOWN_OPTIMA = {
    "F1": [[0.07969977967190915]],
    "F2": [[t ** (4.0 / 3.0)] for t in (0.15, 0.35, 0.55, 0.75, 0.95)],
    "F3": [
        [3.0, 2.0],
        [-2.805118075293716, 3.131312531061193],
        [-3.7793102421581253, -3.2831859940607684],
        [3.584428332850509, -1.8481264982567325],
    ],
    "F4": [
        [0.08984201181742917, -0.7126564056224669],
        [-0.08984201181742917, 0.7126564056224669],
    ],
    "F5": [[a, b] for a in _SHUBERT_1D_MIN for b in _SHUBERT_1D_MAX]
    + [[b, a] for a in _SHUBERT_1D_MIN for b in _SHUBERT_1D_MAX],
    "F6": [[-math.pi, 12.275], [math.pi, 2.275], [3.0 * math.pi, 2.475]],
}

# Unshifted optimum coordinate (repeated in every dimension) of F7-F12.
_SCHWEFEL_OPT = 420.96874878568275
_BASE_OPTIMUM_COORD = {
    "F7": 0.0, "F8": _SCHWEFEL_OPT, "F9": 0.0, "F10": 1.0, "F11": 0.0, "F12": 0.0,
}


@dataclass(frozen=True)
class FunctionInfo:
    """Static facts about one benchmark function."""

    id: str
    name: str
    func: Callable[[np.ndarray], float] = field(repr=False)
    dimension: int
    lower: tuple
    upper: tuple
    num_global_optima: int
    target_value: float
    accuracy: float
    scalable: bool = False


def _info(id, name, func, dim, lower, upper, n_opt, target, eps, scalable=False):
    return FunctionInfo(id, name, func, dim, tuple(lower), tuple(upper), n_opt,
                        target, eps, scalable)


FUNCTIONS = {
    f.id: f
    for f in (
        _info("F1", "Uneven Increasing Minima", _uneven_increasing, 1, [0], [1], 1, -1.0, 0.01),
        _info("F2", "Uneven Minima", _uneven, 1, [0], [1], 5, -1.0, 1e-6),
        _info("F3", "Himmelblau", _himmelblau, 2, [-6, -6], [6, 6], 4, -200.0, 0.05),
        _info("F4", "Six-hump camel back", _six_hump_camel, 2, [-1.9, -1.1], [1.9, 1.1], 2,
              -4.126514, 0.001),
        _info("F5", "Inverted Shubert", _shubert, 2, [-10, -10], [10, 10], 18, -186.7309, 0.05),
        _info("F6", "Branin RCOS", _branin, 2, [-5, 0], [10, 15], 3, 0.397887, 0.002),
        _info("F7", "Rastrigin", _rastrigin, 100, [-100], [100], 1, 0.0, 0.001, True),
        _info("F8", "Schwefel", _schwefel, 100, [-500], [500], 1, 0.0, 0.001, True),
        _info("F9", "Griewank", _griewank, 100, [-100], [100], 1, 0.0, 0.001, True),
        _info("F10", "Rosenbrock", _rosenbrock, 100, [-15], [15], 1, 0.0, 0.001, True),
        _info("F11", "Sphere", _sphere, 100, [-100], [100], 1, 0.0, 0.001, True),
        _info("F12", "Zakharov", _zakharov, 100, [-5], [10], 1, 0.0, 0.001, True),
    )
}


def function_ids() -> list:
    return list(FUNCTIONS)


def _lookup(id: str) -> FunctionInfo:
    key = str(id).upper()
    try:
        return FUNCTIONS[key]
    except KeyError:
        raise UnsupportedFunctionError(
            f"unknown function id {id!r}; expected one of {', '.join(FUNCTIONS)}"
        ) from None


@dataclass(frozen=True, eq=False)
class Objective:
    """A bounded minimization problem.

    Call the instance (or :func:`evaluate`) with a position vector to get
    its fitness. Instances are immutable and safe to share between threads.

    Attributes
    ----------
    known_optima : ndarray or None
        ``(k, dimension)`` global optimum locations for F1-F6.
    shift : ndarray or None
        Translation ``o``; the evaluated value is ``f(x - o)``.
    optimum_value : float
        Exact fitness at the best global optimum. Differs from the printed
        ``target_value`` by rounding (F4-F6) or by a constant residual (F1,
        F8).
    """

    id: str
    name: str
    dimension: int
    bounds: Bounds
    target_value: float
    num_global_optima: int
    accuracy: float
    known_optima: Optional[np.ndarray] = None
    shift: Optional[np.ndarray] = None
    func: Callable[[np.ndarray], float] = field(default=None, repr=False)

    def __call__(self, x) -> float:
        return evaluate(self, x)

    @property
    def optima(self) -> np.ndarray:
        """Global optimum locations, shifted where a shift is set."""
        if self.known_optima is not None:
            return self.known_optima
        coord = _BASE_OPTIMUM_COORD[self.id]
        opt = np.full((1, self.dimension), coord)
        if self.shift is not None:
            opt = opt + self.shift
        return opt

    @property
    def optimum_value(self) -> float:
        return min(evaluate(self, p) for p in self.optima)


def evaluate(obj: Objective, x) -> float:
    """Fitness of ``x``; ``f(x - o)`` when the objective is shifted."""
    x = np.asarray(x, dtype=float)
    if x.shape != (obj.dimension,):
        raise InvalidArgumentError(
            f"{obj.id} expects a vector of length {obj.dimension}, got shape {x.shape}"
        )
    if obj.shift is not None:
        x = x - obj.shift
    return float(obj.func(x))


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


def get_objective(id: str, dimension: Optional[int] = None) -> Objective:
    """Unshifted objective for ``id``.

    ``dimension`` only applies to the scalable functions F7-F12.
    """
    info = _lookup(id)
    if dimension is None:
        dimension = info.dimension
    dimension = int(dimension)
    if info.scalable:
        min_dim = 2 if info.id == "F10" else 1
        if dimension < min_dim:
            raise InvalidArgumentError(f"{info.id} needs dimension >= {min_dim}")
        bounds = Bounds.uniform(info.lower[0], info.upper[0], dimension)
        optima = None
    else:
        if dimension != info.dimension:
            raise InvalidArgumentError(f"{info.id} is defined for dimension {info.dimension} only")
        bounds = Bounds(info.lower, info.upper)
        optima = _frozen(_KNOWN_OPTIMA[info.id])
    return Objective(
        id=info.id,
        name=info.name,
        dimension=dimension,
        bounds=bounds,
        target_value=info.target_value,
        num_global_optima=info.num_global_optima,
        accuracy=info.accuracy,
        known_optima=optima,
        func=info.func,
    )


def known_optima(id: str) -> np.ndarray:
    """Global optimum locations of F1-F6 as a ``(k, dimension)`` array."""
    info = _lookup(id)
    if info.scalable:
        raise UnsupportedFunctionError(
            f"{info.id} has a single shifted optimum; use Objective.optima instead"
        )
    return _frozen(_KNOWN_OPTIMA[info.id])


def shift_envelope(obj: Objective) -> tuple:
    """Per-dimension ``(low, high)`` interval the shift components are drawn from."""
    opt = _BASE_OPTIMUM_COORD[obj.id]
    return (SHIFT_FRACTION * (obj.bounds.lower - opt),
            SHIFT_FRACTION * (obj.bounds.upper - opt))


def with_shift(obj: Objective, shift) -> Objective:
    """Copy of a scalable objective translated by an explicit ``shift``."""
    if obj.id not in _BASE_OPTIMUM_COORD:
        raise UnsupportedFunctionError(f"{obj.id} cannot be shifted; only F7-F12 are")
    shift = _frozen(shift)
    if shift.shape != (obj.dimension,):
        raise InvalidArgumentError(
            f"shift must have length {obj.dimension}, got shape {shift.shape}"
        )
    return Objective(
        id=obj.id,
        name=obj.name,
        dimension=obj.dimension,
        bounds=obj.bounds,
        target_value=obj.target_value,
        num_global_optima=obj.num_global_optima,
        accuracy=obj.accuracy,
        known_optima=None,
        shift=shift,
        func=obj.func,
    )


def make_shifted(id: str, dimension: Optional[int] = None, shift_seed: int = 0) -> Objective:
    """Shifted F7-F12 objective with a shift vector drawn from ``shift_seed``.

    Components are uniform in :func:`shift_envelope`, drawn from a PCG64
    generator seeded with ``shift_seed``, so equal seeds give equal shifts.
    """
    info = _lookup(id)
    if not info.scalable:
        raise UnsupportedFunctionError(f"{info.id} is not shiftable; only F7-F12 are")
    base = get_objective(info.id, dimension)
    low, high = shift_envelope(base)
    rng = np.random.default_rng(shift_seed)
    return with_shift(base, rng.uniform(low, high))


# --------------------------------------------------------------------------
# ShiftRecord persistence
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ShiftRecord:
    function_id: str
    seed: int
    shift: np.ndarray

    def to_line(self) -> str:
        values = " ".join(f"{v:.17g}" for v in self.shift)
        return f"{self.function_id} {self.seed} {len(self.shift)} {values}"

    @classmethod
    def from_line(cls, line: str) -> "ShiftRecord":
        parts = line.split()
        if len(parts) < 3:
            raise InvalidArgumentError(f"malformed shift record: {line!r}")
        fid, seed, d = parts[0], int(parts[1]), int(parts[2])
        values = parts[3:]
        if len(values) != d:
            raise InvalidArgumentError(
                f"shift record for {fid} declares {d} values but has {len(values)}"
            )
        return cls(fid, seed, np.array([float(v) for v in values]))

    @classmethod
    def from_objective(cls, obj: Objective, seed: int) -> "ShiftRecord":
        if obj.shift is None:
            raise InvalidArgumentError(f"{obj.id} has no shift")
        return cls(obj.id, int(seed), np.array(obj.shift))


def write_shift_records(path, records: Iterable[ShiftRecord]) -> Path:
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        for rec in records:
            fh.write(rec.to_line() + "\n")
    return path


def read_shift_records(path) -> list:
    with open(path) as fh:
        return [ShiftRecord.from_line(line) for line in fh if line.strip()]


def objective_from_record(record: ShiftRecord) -> Objective:
    """Rebuild the exact shifted objective a record describes."""
    base = get_objective(record.function_id, len(record.shift))
    return with_shift(base, record.shift)


def describe(ids: Optional[Sequence[str]] = None) -> list:
    """Rows of static facts per function, for ``bench functions``."""
    rows = []
    for fid in ids or FUNCTIONS:
        info = _lookup(fid)
        if info.scalable:
            rng = f"[{info.lower[0]:g}, {info.upper[0]:g}]^{info.dimension}"
        else:
            rng = " x ".join(f"[{lo:g}, {hi:g}]" for lo, hi in zip(info.lower, info.upper))
        rows.append({
            "id": info.id,
            "name": info.name,
            "dimension": info.dimension,
            "range": rng,
            "global_optima": info.num_global_optima,
            "minimum": info.target_value,
            "accuracy": info.accuracy,
        })
    return rows
