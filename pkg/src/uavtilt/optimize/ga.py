"""Real-coded genetic algorithm and its hybrid with local refinement.

Fitness is the max-min US SIR in dB and is maximized.  Roulette-wheel
selection works on shifted weights ``f - min(f) + eps`` so negative dB values
are admissible.  Elites are copied unchanged into the next generation, which
keeps the best-so-far trace non-decreasing.
"""
from __future__ import annotations

import time
from typing import Optional

import numpy as np

from . import rng as streams
from .local_search import local_refine
from .params import GaParams, LocalSearchParams
from .problem import TiltProblem
from .report import OptimizerReport


def roulette_weights(fitness: np.ndarray) -> np.ndarray:
    lo, hi = float(np.min(fitness)), float(np.max(fitness))
    eps = 1e-6 * (hi - lo + 1.0)
    return fitness - lo + eps


def _spin(cum_weights: np.ndarray, u: float) -> int:
    i = int(np.searchsorted(cum_weights, u * cum_weights[-1], side="right"))
    return min(i, len(cum_weights) - 1)


def _breed(pop, cum_weights, rng, lo, hi, mutation_prob):
    n_genes = pop.shape[1]
    p1 = pop[_spin(cum_weights, rng.random())]
    p2 = pop[_spin(cum_weights, rng.random())]
    if n_genes > 1:
        cut = int(rng.integers(1, n_genes))
        c1 = np.concatenate([p1[:cut], p2[cut:]])
        c2 = np.concatenate([p2[:cut], p1[cut:]])
    else:
        c1, c2 = p1.copy(), p2.copy()
    for child in (c1, c2):
        mask = rng.random(n_genes) < mutation_prob
        child[mask] = rng.uniform(lo, hi, int(mask.sum()))
    return c1, c2


def ga_optimize(problem: TiltProblem, params: GaParams = GaParams()) -> OptimizerReport:
    t0 = time.perf_counter()
    m, n_genes = params.population, problem.n_sites
    pop = np.array([
        streams.stream(params.seed, streams.INIT, 0, i).uniform(problem.lo, problem.hi, n_genes)
        for i in range(m)
    ])
    pop = problem.project(pop)
    fit = problem.objective_many(pop)
    requests = m
    best = int(np.argmax(fit))
    best_x, best_f = pop[best].copy(), float(fit[best])
    trace = [best_f]

    for gen in range(1, params.generations + 1):
        order = np.argsort(-fit, kind="stable")
        elite = order[: params.elite_count]
        cum = np.cumsum(roulette_weights(fit))
        children = []
        k = 0
        while len(children) < m - params.elite_count:
            r = streams.stream(params.seed, streams.BREED, gen, k)
            children.extend(_breed(pop, cum, r, problem.lo, problem.hi, params.mutation_prob))
            k += 1
        children = problem.project(np.array(children[: m - params.elite_count]))
        child_fit = problem.objective_many(children)
        requests += len(children)
        pop = np.vstack([pop[elite], children])
        fit = np.concatenate([fit[elite], child_fit])
        i = int(np.argmax(fit))
        if fit[i] > best_f:
            best_x, best_f = pop[i].copy(), float(fit[i])
        trace.append(best_f)
        assert np.all(pop >= problem.lo) and np.all(pop <= problem.hi)

    return OptimizerReport(
        scheme="ga",
        best_tilts=best_x,
        best_objective_db=best_f,
        objective_trace=trace,
        evaluations=requests,
        seed=params.seed,
        wall_time=time.perf_counter() - t0,
        meta={"population": m, "generations": params.generations,
              "mutation_prob": params.mutation_prob, "elite_count": params.elite_count},
    )


def hybrid_ga(
    problem: TiltProblem,
    ga_params: GaParams = GaParams(),
    ls_params: Optional[LocalSearchParams] = LocalSearchParams(),
    ga_report: Optional[OptimizerReport] = None,
) -> OptimizerReport:
    """GA followed by coordinate-wise refinement of its best candidate.

    Pass ``ga_report`` to refine an existing GA run with the same seed instead
    of repeating it.
    """
    t0 = time.perf_counter()
    base = ga_report if ga_report is not None else ga_optimize(problem, ga_params)
    if ls_params is None or ls_params.max_iters == 0:
        refined_x, refined_f, ls_trace, ls_evals, ls_meta = base.best_tilts, base.best_objective_db, [], 0, {}
    else:
        ls = local_refine(problem, base.best_tilts, ls_params)
        refined_x, refined_f = ls.best_tilts, ls.best_objective_db
        ls_trace, ls_evals, ls_meta = ls.objective_trace[1:], ls.evaluations, ls.meta
    return OptimizerReport(
        scheme="hybrid_ga",
        best_tilts=refined_x,
        best_objective_db=refined_f,
        objective_trace=list(base.objective_trace) + list(ls_trace),
        evaluations=base.evaluations + ls_evals,
        seed=base.seed,
        wall_time=(time.perf_counter() - t0) + (base.wall_time if ga_report is not None else 0.0),
        meta={**base.meta, "ga_objective_db": base.best_objective_db, "ga_trace_length": len(base.objective_trace),
              "local_search": ls_meta},
    )
