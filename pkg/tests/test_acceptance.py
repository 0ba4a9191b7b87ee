"""Acceptance checks, one test per criterion.

Each test records a PASS/FAIL (or WARN) line that is printed in the terminal
summary.  Expensive optimizer runs are shared through module fixtures; the
whole module takes roughly half an hour on a single core.
"""
import math
import statistics
import warnings
from dataclasses import replace

import numpy as np
import pytest

import oracle
from verdicts import record
from uavtilt.antenna import ArrayConfig, ElementPattern, array_factor_gain_db, element_gain_db
from uavtilt.config import Scenario
from uavtilt.geometry import build_layout, build_receiver_grid
from uavtilt.network import associate, compute_power_matrix, sir_cs, sir_us, to_db
from uavtilt.optimize import (
    GaParams,
    LocalSearchParams,
    PsoParams,
    TiltProblem,
    brute_force_oracle,
    hybrid_ga,
    pso_optimize,
)
from uavtilt.propagation import pathloss_exponent
from uavtilt.runner import export_artifact, run_gue_sweep, run_nt_sweep, run_schemes

SEEDS = range(5)
UT_SCHEMES = ("random", "single", "ga", "hybrid_ga", "pso")
ALL_SCHEMES = ("dt_only",) + UT_SCHEMES


def _run_seeds(isd, h, seeds):
    base = Scenario(isd=float(isd), uav_height=float(h))
    problem = TiltProblem.from_scenario(base)
    out = []
    for seed in seeds:
        art = run_schemes(replace(base, seed=seed), ALL_SCHEMES, problem=problem)
        out.append({r.label: r for r in art.schemes})
    return out


@pytest.fixture(scope="module")
def runs():
    """Full-size runs: five seeds on the two ordering scenarios, one seed elsewhere."""
    return {
        (500, 200): _run_seeds(500, 200, SEEDS),
        (1000, 100): _run_seeds(1000, 100, SEEDS),
        (1000, 200): _run_seeds(1000, 200, [0]),
        (500, 100): _run_seeds(500, 100, [0]),
    }


def median_us_db(result):
    return float(np.median(result.field.sir_us_db))


# 1 ---------------------------------------------------------------------------


def test_criterion_01_cs_dominates_us(problem500):
    rng = np.random.default_rng(20240101)
    worst = math.inf
    for _ in range(100):
        pm = problem500.power_matrix(rng.uniform(5, 89, 19))
        a = associate(pm)
        gap = to_db(sir_cs(pm, a)) - to_db(sir_us(pm, a))
        worst = min(worst, float(gap.min()))
    ok = worst >= -1e-9
    record(1, ok, f"min(CS - US) over 100 tilt vectors x {len(problem500.grid)} points = {worst:.3e} dB")
    assert ok


# 2 ---------------------------------------------------------------------------


def test_criterion_02_equation_oracle():
    lay = build_layout(500)
    grid = build_receiver_grid(lay, 10, 200)
    rng = np.random.default_rng(7)
    tilts = rng.uniform(5, 89, 19)
    pm = compute_power_matrix(grid, lay, tilts)
    fast = TiltProblem(lay, grid).power_matrix(tilts)
    a = associate(pm)
    us, cs = sir_us(pm, a), sir_cs(pm, a)
    sites = [tuple(s) for s in lay.sites]
    worst = 0.0
    for _ in range(20):
        u = int(rng.integers(len(grid)))
        b = int(rng.integers(19))
        sector = "ut" if rng.random() < 0.5 else "dt"
        dx, dy = oracle.wrapped_offset(sites[b], tuple(grid.points[u]), 500)
        if sector == "ut":
            want, got = oracle.p_ut(dx, dy, 200, tilts[b]), (pm.p_ut[u, b], fast.p_ut[u, b])
        else:
            want, got = oracle.p_dt(dx, dy, 200), (pm.p_dt[u, b], fast.p_dt[u, b])
        o_us, o_cs, o_b = oracle.sir_pair(tuple(grid.points[u]), 200, sites, tilts, 500)
        assert a.serving[u] == o_b
        for g, w in [(got[0], want), (got[1], want), (us[u], o_us), (cs[u], o_cs)]:
            worst = max(worst, abs(g - w) / abs(w))
    ok = worst <= 1e-9
    record(2, ok, f"max relative deviation from scalar oracle over 20 triples = {worst:.2e}")
    assert ok


# 3 ---------------------------------------------------------------------------


def test_criterion_03_antenna_analytics():
    errs = []
    for n in (1, 4, 8, 16):
        for phi_deg in (-12.0, -6.0, 0.0, 17.0, 45.0, 89.0):
            phi = math.radians(phi_deg)
            errs.append(abs(array_factor_gain_db(phi, phi, ArrayConfig(n)) - 10 * math.log10(n)))
    peak_err = max(errs)

    # the floor is reachable inside [-90, 90] only when 12 (90/theta_3db)^2 >= sla_v
    narrow = ElementPattern(theta_3db=30.0)
    floor_hits = [element_gain_db(t, narrow) for t in (-90.0, -60.0, 60.0, 90.0)]
    floor_ok = all(g == narrow.ge_max - narrow.sla_v for g in floor_hits)
    grid = np.linspace(-90, 90, 3601)
    default_ok = bool(np.all(element_gain_db(grid) >= 8.0 - 30.0))

    hb = 30.0
    left = pathloss_exponent(2 * hb - 1e-9, hb)
    at = pathloss_exponent(2 * hb, hb)
    right = pathloss_exponent(2 * hb + 1e-9, hb)
    jump = max(abs(left - at), abs(right - at))

    ok = peak_err <= 1e-9 and floor_ok and default_ok and jump <= 1e-12
    record(3, ok, f"peak err {peak_err:.1e} dB; floor ge_max-30 {'ok' if floor_ok and default_ok else 'BAD'}; "
                  f"alpha jump at 2h_b {jump:.1e}")
    assert ok


# 4 ---------------------------------------------------------------------------


def test_criterion_04_oracle_gap():
    sc = Scenario()
    toy = TiltProblem.from_scenario(sc, sites=[0, 1, 2], quantum=5.0)
    best = brute_force_oracle(toy, 5.0).best_objective_db
    gaps = {"hybrid_ga": [], "pso": []}
    exceed = 0.0
    for seed in range(10):
        h = hybrid_ga(toy, replace(sc.ga, seed=seed), sc.local_search)
        p = pso_optimize(toy, replace(sc.pso, seed=seed), sc.local_search)
        for name, rep in (("hybrid_ga", h), ("pso", p)):
            gaps[name].append(best - rep.best_objective_db)
            exceed = max(exceed, rep.best_objective_db - best)
    med = {k: statistics.median(v) for k, v in gaps.items()}
    ok = all(m <= 0.5 for m in med.values()) and exceed <= 1e-9
    record(4, ok, f"oracle {best:.3f} dB; median gap hybrid_ga {med['hybrid_ga']:.3f}, "
                  f"pso {med['pso']:.3f} dB; max excess {exceed:.1e}")
    assert ok


# 5 ---------------------------------------------------------------------------


def test_criterion_05_scheme_ordering(runs):
    lines, ok = [], True
    for key in ((500, 200), (1000, 100)):
        per_seed = runs[key]
        med = {s: statistics.median(r[s].rates_us.min_se for r in per_seed) for s in UT_SCHEMES}
        order = ["random", "single", "hybrid_ga", "pso"]
        pairs = [(a, b, med[a] <= med[b]) for a, b in zip(order, order[1:])]
        hga_ge_ga = all(r["hybrid_ga"].report.best_objective_db >= r["ga"].report.best_objective_db
                        for r in per_seed)
        ok &= all(p[2] for p in pairs) and hga_ge_ga
        bad = [f"{a}>{b}" for a, b, good in pairs if not good]
        lines.append(f"ISD{key[0]}/h{key[1]} min-SE " + " ".join(f"{s}={med[s]:.4f}" for s in order)
                     + f" hga>=ga:{hga_ge_ga}" + (f" VIOLATED {','.join(bad)}" if bad else ""))
    record(5, ok, "; ".join(lines))
    assert ok


# 6 ---------------------------------------------------------------------------


def test_criterion_06_dt_only_worst(runs):
    lines, ok = [], True
    for key in ((500, 200), (1000, 100), (1000, 200)):
        worst_margin = math.inf
        for r in runs[key]:
            dt = median_us_db(r["dt_only"])
            worst_margin = min(worst_margin, min(median_us_db(r[s]) - dt for s in UT_SCHEMES))
        ok &= worst_margin >= 0
        lines.append(f"ISD{key[0]}/h{key[1]} min margin {worst_margin:.2f} dB")
    record(6, ok, "; ".join(lines))
    assert ok


# 7 ---------------------------------------------------------------------------


def test_criterion_07_nt_sweep():
    nts = [4, 8, 16]

    def sweep(seed):
        art = run_nt_sweep(Scenario(uav_height=150.0, seed=seed), nts)
        us = [float(np.median(r.field.sir_us_db)) for r in art.schemes]
        cs = [float(np.median(r.field.sir_cs_db)) for r in art.schemes]
        return us, cs

    # the verdict uses the default seed; other seeds are reported for context only
    med_us, med_cs = sweep(0)
    increasing = all(a < b for a, b in zip(med_us, med_us[1:]))
    cs_ok = all(c >= u for c, u in zip(med_cs, med_us))
    others = [sweep(seed)[0] for seed in range(1, 5)]
    n_inc = sum(all(a < b for a, b in zip(m, m[1:])) for m in others)
    ok = increasing and cs_ok
    record(7, ok, "seed 0 median US SIR N_t=4,8,16: " + ", ".join(f"{m:.2f}" for m in med_us)
                  + f" dB; CS>=US {cs_ok} [seeds 1-4 strictly increasing: {n_inc}/4]")
    assert ok


# 8 ---------------------------------------------------------------------------


def test_criterion_08_gue_trends():
    sc = Scenario(isd=100.0, gue_height=1.5)
    betas, phis = [0.25, 0.5, 0.75], [0.0, -6.0, -12.0]
    art = run_gue_sweep(sc, betas, phis)
    se = {b: np.array([v for v, _ in art.ecdfs[f"gue_se_beta{b:g}"]]) for b in betas}
    ratio_err = float(np.max(np.abs(se[0.5][se[0.25] > 0] / se[0.25][se[0.25] > 0] - 2.0)))
    shift_ok = bool(np.all(se[0.25] <= se[0.5]) and np.all(se[0.5] <= se[0.75]))
    part_a = ratio_err <= 1e-12 and shift_ok

    def medians(ecdfs):
        return [float(np.median([v for v, _ in ecdfs[f"gue_sir_phidt{p:g}"]])) for p in phis]

    med = medians(art.ecdfs)
    part_b = med[0] < med[1] < med[2]
    # same sweep at ISD 1000 for context only; it does not enter the verdict
    ctx = medians(run_gue_sweep(replace(sc, isd=1000.0), [0.5], phis).ecdfs)
    ok = part_a and part_b
    record(8, ok, f"(a) ratio err {ratio_err:.1e}, right shift {shift_ok}; "
                  f"(b) ISD100 median SIR at 0/-6/-12 deg = {med[0]:.2f}/{med[1]:.2f}/{med[2]:.2f} dB "
                  f"{'monotone' if part_b else 'NOT monotone'} "
                  f"[ISD1000: {ctx[0]:.2f}/{ctx[1]:.2f}/{ctx[2]:.2f}]")
    assert ok


# 9 ---------------------------------------------------------------------------


def test_criterion_09_determinism(tmp_path, monkeypatch):
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
    sc = Scenario(
        seed=11,
        ga=GaParams(population=24, generations=6),
        pso=PsoParams(swarm=24, iterations=6),
        local_search=LocalSearchParams(max_iters=6),
    )
    blobs = {}
    for threads in (1, 4, 8):
        art = run_schemes(sc, ["ga", "hybrid_ga", "pso"], threads=threads)
        files = export_artifact(art, tmp_path / f"t{threads}")
        blobs[threads] = {p.name: p.read_bytes() for p in files}
    same = blobs[1] == blobs[4] == blobs[8]
    record(9, same, f"{len(blobs[1])} files byte-identical across threads 1/4/8: {same}")
    assert same


# 10 --------------------------------------------------------------------------


def test_criterion_10_isd_effect(runs):
    small, large = runs[(500, 100)][0], runs[(1000, 100)][0]
    parts, ok = [], True
    for s in ALL_SCHEMES:
        a, b = small[s].rates_us.sum_se, large[s].rates_us.sum_se
        ok &= b > a
        parts.append(f"{s} {a:.0f}->{b:.0f}")
    record(10, ok, "US sum-SE ISD500->ISD1000 at h=100: " + ", ".join(parts))
    assert ok


# 11 --------------------------------------------------------------------------


def test_criterion_11_tilt_structure(runs):
    lay = build_layout(500)
    diffs = []
    for r in runs[(500, 200)]:
        t = r["hybrid_ga"].tilts
        diffs.append(float(t[lay.ring == 1].mean() - t[lay.ring == 2].mean()))
    med = statistics.median(diffs)
    ok = med > 0
    record(11, ok, f"ring-1 minus ring-2 mean uptilt per seed: "
                   + ", ".join(f"{d:.1f}" for d in diffs) + f" deg (median {med:.1f})", soft=True)
    if not ok:
        warnings.warn("hybrid GA ring-1 mean uptilt does not exceed ring-2 (soft check)")
    elif any(d <= 0 for d in diffs):
        warnings.warn("ring ordering violated on at least one seed (soft check)")
