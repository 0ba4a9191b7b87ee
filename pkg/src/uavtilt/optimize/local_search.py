from __future__ import annotations

import time

import numpy as np

from .params import LocalSearchParams
from .problem import TiltProblem
from .report import OptimizerReport


def local_refine(
    problem: TiltProblem,
    start,
    params: LocalSearchParams = LocalSearchParams(),
    scheme: str = "local_search",
) -> OptimizerReport:
    """Coordinate-wise first-improvement search with a halving step.

    Sites are visited in index order; ``+step`` is tried before ``-step`` and the
    first strict improvement is kept.  A pass without any improvement halves the
    step.  Stops once the step drops below ``step_min`` or after ``max_iters``
    passes.  On a lattice problem a move is at least one lattice quantum.
    """
    t0 = time.perf_counter()
    x = problem.project(problem.check_bounds(start))
    f = problem.objective(x)
    trace = [f]
    requests = 1
    step = float(params.step_init)
    passes = 0
    while step >= params.step_min and passes < params.max_iters:
        move = max(step, problem.quantum) if problem.quantum else step
        improved = False
        for b in range(problem.n_sites):
            for sign in (1.0, -1.0):
                cand = x.copy()
                cand[b] = x[b] + sign * move
                cand = problem.project(cand)
                if cand[b] == x[b]:
                    continue
                fc = problem.objective(cand)
                requests += 1
                if fc > f:
                    x, f = cand, fc
                    improved = True
                    break
        passes += 1
        trace.append(f)
        if not improved:
            step *= 0.5
    return OptimizerReport(
        scheme=scheme,
        best_tilts=x,
        best_objective_db=f,
        objective_trace=trace,
        evaluations=requests,
        wall_time=time.perf_counter() - t0,
        meta={"passes": passes, "final_step": step},
    )
