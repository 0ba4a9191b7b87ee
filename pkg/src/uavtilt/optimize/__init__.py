"""Uptilt optimizers for the max-min UAV SIR problem."""
from .baselines import baseline_dt_only, baseline_random, baseline_single, brute_force_oracle
from .ga import ga_optimize, hybrid_ga
from .local_search import local_refine
from .params import GaParams, LocalSearchParams, PsoParams
from .problem import TiltProblem, lattice_values
from .pso import nominal_tilts, pso_optimize
from .report import SCHEMES, OptimizerReport

__all__ = [
    "GaParams", "LocalSearchParams", "PsoParams", "TiltProblem", "OptimizerReport", "SCHEMES",
    "lattice_values", "baseline_dt_only", "baseline_random", "baseline_single", "brute_force_oracle",
    "ga_optimize", "hybrid_ga", "local_refine", "nominal_tilts", "pso_optimize",
]
