"""Particle swarm over the uptilt vector, finished by local refinement."""
from __future__ import annotations

import time
from typing import Optional

import numpy as np

from ..geometry import effective_displacements
from . import rng as streams
from .local_search import local_refine
from .params import LocalSearchParams, PsoParams
from .problem import TiltProblem
from .report import OptimizerReport


def nominal_tilts(problem: TiltProblem, kind: str = "midrange") -> np.ndarray:
    """Starting tilt vector of the swarm.

    ``"midrange"`` puts every site at the middle of the tilt bounds.
    ``"geometric"`` points each UT sector at the center of the protected cell at
    UAV altitude; it aims every neighbor's main lobe into the cell and makes a
    poor starting region for the max-min objective.
    """
    if kind == "midrange":
        return problem.project(np.full(problem.n_sites, 0.5 * (problem.lo + problem.hi)))
    disp = effective_displacements(problem.layout, [(0.0, 0.0)])[0]
    d = np.hypot(disp[:, 0], disp[:, 1])
    angle = np.degrees(np.arctan2(problem.grid.height - problem.params.h_ut, d))
    return problem.project(angle)


def pso_optimize(
    problem: TiltProblem,
    params: PsoParams = PsoParams(),
    ls_params: Optional[LocalSearchParams] = LocalSearchParams(),
) -> OptimizerReport:
    t0 = time.perf_counter()
    n, dim = params.swarm, problem.n_sites
    nominal = nominal_tilts(problem, params.nominal)
    spread = 0.5 * (problem.hi - problem.lo) if params.init_spread is None else params.init_spread
    x = np.empty((n, dim))
    x[0] = nominal
    for i in range(1, n):
        r = streams.stream(params.seed, streams.INIT, 0, i)
        x[i] = nominal + r.uniform(-spread, spread, dim)
    x = problem.project(x)
    v = np.zeros_like(x)
    fit = problem.objective_many(x)
    requests = n
    pbest, pbest_f = x.copy(), fit.copy()
    g = int(np.argmax(pbest_f))
    gbest, gbest_f = pbest[g].copy(), float(pbest_f[g])
    trace = [gbest_f]

    for it in range(1, params.iterations + 1):
        r1 = np.empty_like(x)
        r2 = np.empty_like(x)
        for i in range(n):
            r = streams.stream(params.seed, streams.MOVE, it, i)
            r1[i] = r.random(dim)
            r2[i] = r.random(dim)
        v = params.inertia * v + params.c1 * r1 * (pbest - x) + params.c2 * r2 * (gbest - x)
        np.clip(v, -params.v_max, params.v_max, out=v)
        x = problem.project(x + v)
        assert np.all(x >= problem.lo) and np.all(x <= problem.hi)
        fit = problem.objective_many(x)
        requests += n
        better = fit > pbest_f
        pbest[better] = x[better]
        pbest_f[better] = fit[better]
        g = int(np.argmax(pbest_f))
        if pbest_f[g] > gbest_f:
            gbest, gbest_f = pbest[g].copy(), float(pbest_f[g])
        trace.append(gbest_f)

    meta = {"swarm": n, "iterations": params.iterations, "inertia": params.inertia,
            "c1": params.c1, "c2": params.c2, "v_max": params.v_max,
            "swarm_objective_db": gbest_f, "swarm_trace_length": len(trace)}
    if ls_params is not None and ls_params.max_iters > 0:
        ls = local_refine(problem, gbest, ls_params)
        gbest, gbest_f = ls.best_tilts, ls.best_objective_db
        trace.extend(ls.objective_trace[1:])
        requests += ls.evaluations
        meta["local_search"] = ls.meta
    return OptimizerReport(
        scheme="pso",
        best_tilts=gbest,
        best_objective_db=gbest_f,
        objective_trace=trace,
        evaluations=requests,
        seed=params.seed,
        wall_time=time.perf_counter() - t0,
        meta=meta,
    )
