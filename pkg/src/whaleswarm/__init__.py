"""Whale Swarm Algorithm, classical baselines and a multimodal benchmark harness."""
from .baselines import DeParams, GaParams, PsoParams, run_de_best_1_bin, run_ga, run_pso_inertia
from .exceptions import (
    BudgetExhaustedError,
    ConfigError,
    InvalidArgumentError,
    NoQualifyingOptimaError,
    UnsupportedFunctionError,
)
from .harness import ExperimentConfig, list_presets, run_experiment, run_experiments
from .metrics import count_optima, mpr, success_rate, summarize
from .objective import Bounds, Objective, d_max, get_objective, known_optima, make_shifted
from .swarm_core import EvalBudget, RunResult, Swarm, Whale
from .wsa import WsaParams, better_nearest, default_eta, intensity, move_whale, run_wsa

__version__ = "0.1.0"
