"""Scenario orchestration and CSV/JSON export.

Each pipeline returns a :class:`RunArtifact`; :func:`export_artifact` writes it
as::

    scenario.json          scenario echo, provenance, per-scheme summaries
    tilts_<scheme>.csv     site_index,x,y,uptilt_deg
    sir_<scheme>.csv       point_x,point_y,serving,sir_us_db,sir_cs_db
    rates.csv              scheme,slot,min_se,median_se,sum_se
    ecdf_<tag>.csv         value_db,prob

Numbers are written with 9 significant digits.  Wall-clock times are logged
but never written, so the files depend only on config, seed and code version.
"""
from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import __version__
from .config import Scenario, scenario_to_dict
from .errors import InvalidParameterError
from .geometry import build_layout, build_receiver_grid
from .network import (
    RateMetrics,
    SirField,
    associate,
    ecdf,
    gue_sir,
    gue_spectral_efficiency,
    rate_metrics,
    sir_cs,
    sir_us,
    spectral_efficiency,
    to_db,
)
from .optimize import (
    OptimizerReport,
    TiltProblem,
    baseline_dt_only,
    baseline_random,
    baseline_single,
    brute_force_oracle,
    ga_optimize,
    hybrid_ga,
    pso_optimize,
)

log = logging.getLogger(__name__)

RUN_SCHEMES = ("dt_only", "random", "single", "ga", "hybrid_ga", "pso")
NA = "NA"


@dataclass
class SchemeResult:
    label: str
    scheme: str
    sites: np.ndarray  # site indices into the full layout
    site_xy: np.ndarray
    tilts: Optional[np.ndarray]  # None for dt_only
    field: SirField
    rates_us: RateMetrics
    rates_cs: Optional[RateMetrics]
    report: Optional[OptimizerReport] = None


@dataclass
class RunArtifact:
    scenario: Scenario
    grid_points: np.ndarray
    schemes: list = field(default_factory=list)
    ecdfs: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


def provenance(seed: int) -> dict:
    """Seed, code version and a timestamp taken from ``SOURCE_DATE_EPOCH`` (if set)."""
    stamp = os.environ.get("SOURCE_DATE_EPOCH")
    return {"seed": seed, "code_version": __version__, "timestamp": int(stamp) if stamp else None}


def _evaluate(problem: TiltProblem, label: str, scheme: str, tilts, report, sites) -> SchemeResult:
    pm = problem.power_matrix(tilts)
    assoc = associate(pm)
    us, cs = sir_us(pm, assoc), sir_cs(pm, assoc)
    fld = SirField(sir_us_db=to_db(us), sir_cs_db=to_db(cs), serving=assoc.serving)
    return SchemeResult(
        label=label, scheme=scheme, sites=np.asarray(sites), site_xy=problem.layout.sites,
        tilts=np.asarray(tilts, dtype=float), field=fld,
        rates_us=rate_metrics(spectral_efficiency(us)),
        rates_cs=rate_metrics(spectral_efficiency(cs)),
        report=report,
    )


def _dt_only_result(problem: TiltProblem, label: str, sites) -> SchemeResult:
    fld = baseline_dt_only(problem)
    sir = 10.0 ** (fld.sir_us_db / 10.0)
    return SchemeResult(
        label=label, scheme="dt_only", sites=np.asarray(sites), site_xy=problem.layout.sites,
        tilts=None, field=fld, rates_us=rate_metrics(spectral_efficiency(sir)), rates_cs=None,
    )


def solve(problem: TiltProblem, scenario: Scenario, scheme: str, ga_report=None) -> OptimizerReport:
    """Tilt determination for one UT-equipped scheme."""
    seed = scenario.seed
    if scheme == "random":
        return baseline_random(problem, seed)
    if scheme == "single":
        return baseline_single(problem)
    if scheme == "ga":
        return ga_optimize(problem, replace(scenario.ga, seed=seed))
    if scheme == "hybrid_ga":
        return hybrid_ga(problem, replace(scenario.ga, seed=seed), scenario.local_search, ga_report=ga_report)
    if scheme == "pso":
        return pso_optimize(problem, replace(scenario.pso, seed=seed), scenario.local_search)
    raise InvalidParameterError(f"unknown scheme {scheme!r}; choose from {', '.join(RUN_SCHEMES)}")


def run_schemes(scenario: Scenario, schemes: Iterable[str], threads: int = 1,
                problem: Optional[TiltProblem] = None) -> RunArtifact:
    """Run several schemes on one scenario; GA is shared with the hybrid GA."""
    schemes = list(schemes)
    for s in schemes:
        if s not in RUN_SCHEMES:
            raise InvalidParameterError(f"unknown scheme {s!r}; choose from {', '.join(RUN_SCHEMES)}")
    problem = problem or TiltProblem.from_scenario(scenario, threads=threads)
    sites = np.arange(problem.n_sites)
    art = RunArtifact(scenario=scenario, grid_points=problem.grid.points, provenance=provenance(scenario.seed))
    ga_report = None
    for scheme in schemes:
        if scheme == "dt_only":
            res = _dt_only_result(problem, scheme, sites)
        else:
            report = solve(problem, scenario, scheme, ga_report=ga_report if scheme == "hybrid_ga" else None)
            if scheme == "ga":
                ga_report = report
            log.info("%s: min US SIR %.3f dB (%d evaluations, %.1f s)", scheme,
                     report.best_objective_db, report.evaluations, report.wall_time)
            res = _evaluate(problem, scheme, scheme, report.best_tilts, report, sites)
        _add_result(art, res)
    return art


def _add_result(art: RunArtifact, res: SchemeResult) -> None:
    art.schemes.append(res)
    art.ecdfs[f"{res.label}_us"] = ecdf(res.field.sir_us_db)
    if res.field.sir_cs_db is not None:
        art.ecdfs[f"{res.label}_cs"] = ecdf(res.field.sir_cs_db)


def run_scheme(scenario: Scenario, scheme: str, overrides: Optional[dict] = None, threads: int = 1) -> RunArtifact:
    """One scheme end to end: tilts, US and CS SIR fields, rates and ECDFs.

    ``overrides`` replaces scenario fields, e.g. ``{"isd": 1000}``.  CS results
    reuse the tilts optimized for US slots.
    """
    if overrides:
        scenario = replace(scenario, **overrides)
    return run_schemes(scenario, [scheme], threads=threads)


def run_nt_sweep(scenario: Scenario, nt_list: Sequence[int], threads: int = 1) -> RunArtifact:
    """Hybrid GA per array size; ECDF tags ``us_nt<N>`` and ``cs_nt<N>``."""
    if not nt_list:
        raise InvalidParameterError("nt_list must not be empty")
    art = RunArtifact(scenario=scenario, grid_points=np.empty((0, 2)), provenance=provenance(scenario.seed))
    art.extra["nt_list"] = [int(n) for n in nt_list]
    for n in nt_list:
        if int(n) < 1:
            raise InvalidParameterError(f"N_t must be at least 1, got {n!r}")
        sc = replace(scenario, n_elements=int(n))
        problem = TiltProblem.from_scenario(sc, threads=threads)
        art.grid_points = problem.grid.points
        report = solve(problem, sc, "hybrid_ga")
        log.info("N_t=%d: min US SIR %.3f dB", n, report.best_objective_db)
        res = _evaluate(problem, f"hybrid_ga_nt{n}", "hybrid_ga", report.best_tilts, report, np.arange(problem.n_sites))
        art.schemes.append(res)
        art.ecdfs[f"us_nt{n}"] = ecdf(res.field.sir_us_db)
        art.ecdfs[f"cs_nt{n}"] = ecdf(res.field.sir_cs_db)
    return art


def run_gue_sweep(scenario: Scenario, beta_list: Sequence[float], phi_dt_list: Sequence[float],
                  tilts=None) -> RunArtifact:
    """Ground-user ECDFs: spectral efficiency per duty cycle and SIR per downtilt.

    SE ECDFs (tag ``gue_se_beta<b>``) use ``scenario.phi_dt``; SIR ECDFs (tag
    ``gue_sir_phidt<deg>``, dB) do not depend on beta.  UT sectors radiate with
    ``tilts`` (default: every site at the middle of the tilt bounds).
    """
    if not beta_list or not phi_dt_list:
        raise InvalidParameterError("beta_list and phi_dt_list must not be empty")
    for b in beta_list:
        if not 0.0 <= b <= 1.0:
            raise InvalidParameterError(f"beta must lie in [0, 1], got {b!r}")
    layout = build_layout(scenario.isd)
    grid = build_receiver_grid(layout, scenario.gue_spacing, scenario.gue_height)
    if tilts is None:
        tilts = np.full(layout.n_sites, 0.5 * (scenario.tilt_bounds[0] + scenario.tilt_bounds[1]))
    tilts = np.asarray(tilts, dtype=float)
    art = RunArtifact(scenario=scenario, grid_points=grid.points, provenance=provenance(scenario.seed))
    art.extra.update({"beta_list": [float(b) for b in beta_list],
                      "phi_dt_list": [float(p) for p in phi_dt_list],
                      "gue_ut_tilts": [float(t) for t in tilts],
                      "gue_points": len(grid)})

    def sir_at(phi):
        sir, _ = gue_sir(grid, layout, tilts, phi, scenario.radio, scenario.element, scenario.array)
        return sir

    base = sir_at(scenario.phi_dt)
    for b in beta_list:
        art.ecdfs[f"gue_se_beta{b:g}"] = ecdf(gue_spectral_efficiency(base, b))
    for phi in phi_dt_list:
        art.ecdfs[f"gue_sir_phidt{phi:g}"] = ecdf(to_db(sir_at(phi)))
    return art


def run_oracle(scenario: Scenario, sites: Sequence[int] = (0, 1, 2), quantum: float = 5.0,
               with_heuristics: bool = True, threads: int = 1) -> RunArtifact:
    """Exhaustive lattice optimum on a truncated layout, optionally next to
    hybrid GA and PSO restricted to the same lattice."""
    problem = TiltProblem.from_scenario(scenario, sites=list(sites), quantum=quantum, threads=threads)
    art = RunArtifact(scenario=scenario, grid_points=problem.grid.points, provenance=provenance(scenario.seed))
    art.extra.update({"toy_sites": [int(s) for s in sites], "quantum": quantum})
    oracle = brute_force_oracle(problem, quantum)
    _add_result(art, _evaluate(problem, "oracle", "oracle", oracle.best_tilts, oracle, sites))
    if with_heuristics:
        for scheme in ("hybrid_ga", "pso"):
            report = solve(problem, scenario, scheme)
            _add_result(art, _evaluate(problem, scheme, scheme, report.best_tilts, report, sites))
    return art


# -- export --------------------------------------------------------------------


def fmt(v) -> str:
    if v is None:
        return NA
    v = float(v)
    if math.isnan(v):
        return NA
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.9g}"


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_json_safe(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else fmt(f)
    return obj


def _rates_dict(r: Optional[RateMetrics]):
    if r is None:
        return None
    return {"min_se": r.min_se, "median_se": r.median_se, "sum_se": r.sum_se}


def _write(path: Path, text: str) -> None:
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _csv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(r) for r in rows)
    return "\n".join(lines) + "\n"


def export_artifact(artifact: RunArtifact, out_dir) -> list:
    """Write the artifact's files into ``out_dir``; returns the written paths."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {out}: {exc.strerror or exc}") from exc
    written = []

    doc = {
        "scenario": scenario_to_dict(artifact.scenario),
        "provenance": artifact.provenance,
        "grid_points": int(len(artifact.grid_points)),
        "schemes": [
            {
                "label": r.label,
                "scheme": r.scheme,
                "sites": r.sites,
                "cs_applicable": r.field.sir_cs_db is not None,
                "rates_us": _rates_dict(r.rates_us),
                "rates_cs": _rates_dict(r.rates_cs),
                "report": r.report.summary() if r.report is not None else None,
            }
            for r in artifact.schemes
        ],
        "ecdf_tags": sorted(artifact.ecdfs),
        "extra": artifact.extra,
    }
    path = out / "scenario.json"
    _write(path, json.dumps(_json_safe(doc), indent=2, sort_keys=True) + "\n")
    written.append(path)

    for r in artifact.schemes:
        if r.tilts is not None:
            rows = [
                (str(int(s)), fmt(xy[0]), fmt(xy[1]), fmt(t))
                for s, xy, t in zip(r.sites, r.site_xy, r.tilts)
            ]
            path = out / f"tilts_{r.label}.csv"
            _write(path, _csv(("site_index", "x", "y", "uptilt_deg"), rows))
            written.append(path)
        cs = r.field.sir_cs_db
        rows = [
            (fmt(p[0]), fmt(p[1]), str(int(r.sites[srv])), fmt(us), fmt(cs[i]) if cs is not None else NA)
            for i, (p, srv, us) in enumerate(zip(artifact.grid_points, r.field.serving, r.field.sir_us_db))
        ]
        path = out / f"sir_{r.label}.csv"
        _write(path, _csv(("point_x", "point_y", "serving", "sir_us_db", "sir_cs_db"), rows))
        written.append(path)

    if artifact.schemes:
        rows = []
        for r in artifact.schemes:
            for slot, m in (("US", r.rates_us), ("CS", r.rates_cs)):
                if m is None:
                    rows.append((r.label, slot, NA, NA, NA))
                else:
                    rows.append((r.label, slot, fmt(m.min_se), fmt(m.median_se), fmt(m.sum_se)))
        path = out / "rates.csv"
        _write(path, _csv(("scheme", "slot", "min_se", "median_se", "sum_se"), rows))
        written.append(path)

    for tag in sorted(artifact.ecdfs):
        rows = [(fmt(v), fmt(p)) for v, p in artifact.ecdfs[tag]]
        path = out / f"ecdf_{tag}.csv"
        _write(path, _csv(("value_db", "prob"), rows))
        written.append(path)
    return written
