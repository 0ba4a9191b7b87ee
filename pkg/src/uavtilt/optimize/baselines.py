"""Reference tilt schemes and the exhaustive lattice oracle."""
from __future__ import annotations

import itertools
import time

import numpy as np

from ..errors import InvalidParameterError
from ..network import SirField, dt_only_sir
from . import rng as streams
from .problem import TiltProblem, lattice_values
from .report import OptimizerReport

MAX_ORACLE_COMBINATIONS = 10**7


def baseline_dt_only(problem: TiltProblem) -> SirField:
    """SIR field of the legacy network with the UT sectors removed."""
    return dt_only_sir(problem._p_dt.T)


def baseline_random(problem: TiltProblem, seed: int = 0) -> OptimizerReport:
    """Independent uniform tilt per site, evaluated once."""
    t0 = time.perf_counter()
    r = streams.stream(seed, streams.RANDOM_BASELINE)
    tilts = problem.project(r.uniform(problem.lo, problem.hi, problem.n_sites))
    f = problem.objective(tilts)
    return OptimizerReport("random", tilts, f, [f], 1, seed, time.perf_counter() - t0)


def single_sweep_angles(lo: float, hi: float, grid_step: float) -> np.ndarray:
    if not grid_step > 0:
        raise InvalidParameterError("grid_step must be positive")
    n = int(np.floor((hi - lo) / grid_step + 1e-9))
    return lo + grid_step * np.arange(n + 1)


def baseline_single(problem: TiltProblem, grid_step: float = 1.0) -> OptimizerReport:
    """Best common tilt for all sites over an equally spaced sweep of the bounds.

    The first (lowest) angle wins ties.
    """
    t0 = time.perf_counter()
    angles = single_sweep_angles(problem.lo, problem.hi, grid_step)
    values = problem.objective_many(np.repeat(angles[:, None], problem.n_sites, axis=1))
    best = int(np.argmax(values))
    tilts = problem.project(np.full(problem.n_sites, angles[best]))
    return OptimizerReport(
        "single", tilts, float(values[best]), [float(v) for v in values], len(angles), None,
        time.perf_counter() - t0,
        meta={"grid_step": grid_step, "best_angle": float(angles[best]),
              "swept_angles": [float(a) for a in angles]},
    )


def brute_force_oracle(problem: TiltProblem, quantum: float,
                       max_combinations: int = MAX_ORACLE_COMBINATIONS) -> OptimizerReport:
    """Exhaustive max over the tilt lattice; lexicographically first optimum wins."""
    t0 = time.perf_counter()
    values = lattice_values(problem.lo, problem.hi, quantum)
    count = len(values) ** problem.n_sites
    if count > max_combinations:
        raise InvalidParameterError(
            f"oracle would evaluate {count} combinations (limit {max_combinations})"
        )
    best_x, best_f = None, -np.inf
    for combo in itertools.product(values, repeat=problem.n_sites):
        x = np.array(combo)
        f = problem._evaluate_one(x)
        if f > best_f:
            best_x, best_f = x, f
    return OptimizerReport(
        "oracle", best_x, float(best_f), [float(best_f)], count, None, time.perf_counter() - t0,
        meta={"quantum": quantum, "lattice": [float(v) for v in values]},
    )
