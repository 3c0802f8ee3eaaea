"""Acceptance gate: one test per release criterion.

Each criterion is a single test function so `pytest -v` reports one pass/fail
line per criterion. The two heavyweight fixtures (tiny-instance oracle
comparison, paired scheme sweep) are shared by the criteria that consume them;
their wall time is recorded inside the fixture and checked against the stated
budgets.
"""

import dataclasses
import json
import shutil
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy import stats

from risuav.bcd import (BcdConfig, baseline_no_ris, baseline_random_phase,
                        initial_solution, optimize)
from risuav.channel import (ScatteringDraw, channel_uav_gu, channel_uav_ris,
                            distance_3d)
from risuav.harness import build_instance, run_oracle
from risuav.objective import energy_efficiency, hover_power, penalized_fitness
from risuav.optim import (AdamConfig, GaConfig, adam_maximize, crossover_blend,
                          finite_diff_gradient, ga_binary_run,
                          ga_continuous_run, selection_sample)
from risuav.scenario import default_scenario, with_gu_positions

# Hand evaluation of sqrt((m g)^3 / (2 pi r_p^2 n_p rho)) with the default
# constants m=2, g=9.8, r_p=0.2, n_p=4, rho=1.225.
HOVER_EXPECTED = 78.19268695868081

GU = (200.0, 25.0)
UAV = (200.0, 50.0)


# ---------------------------------------------------------------------------
# Shared heavyweight fixtures
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def tiny_oracle_runs():
    """Ten seeded K=1, M=4 instances: full solver against the brute-force grid."""
    base = default_scenario()
    cfg = BcdConfig()
    runs = []
    t0 = time.perf_counter()
    for seed in range(10):
        scn, scatter, _ = build_instance(base, 1, 4, seed)
        eta_oracle, _ = run_oracle(4, 1, 8, 5, scn=base, seed=seed)
        res = optimize(scn, scatter, initial_solution(scn, cfg.power_floor),
                       cfg, seed)
        runs.append((scn, scatter, res, eta_oracle))
    return runs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def paired_scheme_runs():
    """Sixteen paired seeds at K=4: three schemes at M=60, plus the full solver
    at M=20 and M=80 on the same per-seed user draws."""
    base = default_scenario()
    cfg = BcdConfig()
    per_seed = []
    t0 = time.perf_counter()
    for seed in range(16):
        runs = {}
        scn, scatter, _ = build_instance(base, 4, 60, seed)
        runs["proposed"] = (scn, scatter, optimize(
            scn, scatter, initial_solution(scn, cfg.power_floor), cfg, seed))
        runs["random-phase"] = (scn, scatter,
                                baseline_random_phase(scn, scatter, cfg, seed))
        runs["no-ris"] = (scn, scatter, baseline_no_ris(scn, scatter, cfg, seed))
        for m in (20, 80):
            scn_m, scatter_m, _ = build_instance(base, 4, m, seed)
            runs[f"proposed-m{m}"] = (scn_m, scatter_m, optimize(
                scn_m, scatter_m, initial_solution(scn_m, cfg.power_floor),
                cfg, seed))
        per_seed.append(runs)
    return per_seed, time.perf_counter() - t0


def mean_eta(per_seed, key):
    return float(np.mean([energy_efficiency(res.best, scatter, scn)
                          for runs in per_seed
                          for (scn, scatter, res) in [runs[key]]]))


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

def test_criterion_1_hover_power_closed_form():
    value = hover_power(2.0, 9.8, 0.2, 4, 1.225)
    assert abs(value - HOVER_EXPECTED) <= 1.0e-3


def test_criterion_2_channel_closed_forms():
    scn = with_gu_positions(default_scenario(), [GU])
    assert distance_3d(UAV, scn.uav_altitude, GU, 0.0) == pytest.approx(
        74.3303, rel=1e-4)
    assert distance_3d(UAV, scn.uav_altitude, scn.ris_position,
                       scn.ris_altitude) == pytest.approx(58.3095, rel=1e-4)
    assert distance_3d(scn.ris_position, scn.ris_altitude, GU,
                       0.0) == pytest.approx(47.1699, rel=1e-4)

    h_ur = channel_uav_ris(scn, UAV)
    np.testing.assert_allclose(np.abs(h_ur), 1.7150e-3, rtol=1e-4)

    overhead = dataclasses.replace(scn, uav_altitude=100.0)
    quiet = ScatteringDraw(direct=np.zeros(1, dtype=complex),
                           ris_gu=np.zeros((1, 60), dtype=complex))
    h_ug = channel_uav_gu(overhead, GU, 0, quiet)
    assert abs(h_ug) == pytest.approx(8.165e-5, rel=1e-4)


def test_criterion_3_solver_matches_tiny_oracle(tiny_oracle_runs):
    runs, elapsed = tiny_oracle_runs
    hits = 0
    for scn, scatter, res, eta_oracle in runs:
        eta = energy_efficiency(res.best, scatter, scn)
        if eta >= 0.95 * eta_oracle:
            hits += 1
    assert hits >= 8, f"solver reached 95% of the grid optimum in only {hits}/10 runs"
    assert elapsed < 300.0, f"tiny-instance suite took {elapsed:.1f}s"


def test_criterion_4_scheme_ordering(paired_scheme_runs):
    per_seed, elapsed = paired_scheme_runs
    proposed = mean_eta(per_seed, "proposed")
    random_phase = mean_eta(per_seed, "random-phase")
    no_ris = mean_eta(per_seed, "no-ris")
    m20 = mean_eta(per_seed, "proposed-m20")
    m80 = mean_eta(per_seed, "proposed-m80")
    assert proposed > random_phase, (proposed, random_phase)
    assert random_phase > no_ris, (random_phase, no_ris)
    assert m80 > m20, (m80, m20)
    assert elapsed < 1800.0, f"paired sweep took {elapsed:.1f}s"


def test_criterion_5_monotone_traces_and_reproducible_best(tiny_oracle_runs,
                                                           paired_scheme_runs):
    runs, _ = tiny_oracle_runs
    all_runs = [(scn, scatter, res) for scn, scatter, res, _ in runs]
    per_seed, _ = paired_scheme_runs
    for seed_runs in per_seed:
        all_runs.extend(seed_runs.values())
    assert len(all_runs) == 10 + 16 * 5
    for scn, scatter, res in all_runs:
        assert np.all(np.diff(res.eta_trace) >= 0.0)
        rescored = penalized_fitness(res.best, scatter, scn)
        assert rescored == pytest.approx(res.eta_trace[-1], rel=1e-9)


def test_criterion_6_optimizer_unit_properties():
    rng = np.random.default_rng(2024)

    # Roulette selection frequencies against the fitness-proportional PMF.
    draws = np.array([selection_sample(np.array([1.0, 3.0]), rng)
                      for _ in range(100_000)])
    counts = np.bincount(draws, minlength=2)
    assert stats.chisquare(counts, f_exp=[25_000, 75_000]).pvalue > 0.001

    # Blend crossover keeps children inside the parents' bounding box.
    for _ in range(1000):
        a = rng.uniform(-5.0, 5.0, 6)
        b = rng.uniform(-5.0, 5.0, 6)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        for child in crossover_blend(a, b, rng):
            assert np.all(child >= lo - 1e-12) and np.all(child <= hi + 1e-12)

    # Every individual either GA evaluates over 50 generations is feasible:
    # phases wrapped to [0, 2pi), powers positive and inside the budget.
    seen_cont = []

    def cont_fitness(pop):
        seen_cont.append(pop.copy())
        return 1.0 / (1.0 + np.sum((pop - 0.5) ** 2, axis=1))

    cfg = GaConfig(pop_pairs=10, generations=50)
    ga_continuous_run(cont_fitness, (3, 2), cfg, np.random.default_rng(7),
                      p_max=1.0, p_min=1e-6)
    assert seen_cont
    for pop in seen_cont:
        thetas, powers = pop[:, :3], pop[:, 3:]
        assert np.all((thetas >= 0.0) & (thetas < 2.0 * np.pi))
        assert np.all(powers > 0.0)
        assert np.all(powers.sum(axis=1) <= 1.0 + 1e-9)

    seen_bits = []

    def bit_fitness(pop):
        seen_bits.append(pop.copy())
        return 1.0 + pop.sum(axis=1)

    ga_binary_run(bit_fitness, 5, cfg, np.random.default_rng(8))
    assert seen_bits and all(np.isin(pop, (0, 1)).all() for pop in seen_bits)

    # Adam climbs a concave bowl back to its peak.
    peak = np.array([3.0, 4.0])
    w, _ = adam_maximize(lambda w: -float(np.sum((w - peak) ** 2)),
                         np.zeros(2), AdamConfig(step=0.1, iters=2000))
    assert np.linalg.norm(w - peak) <= 0.01

    # Central differences are exact on affine and quadratic fields.
    g_affine = finite_diff_gradient(lambda w: 3.0 * w[0] + 2.0 * w[1] + 7.0,
                                    np.array([1.0, -4.0]), 0.5)
    np.testing.assert_allclose(g_affine, [3.0, 2.0], atol=1e-10)
    g_quad = finite_diff_gradient(lambda w: w[0] ** 2 - 2.0 * w[1] ** 2,
                                  np.array([1.5, -2.0]), 0.5)
    np.testing.assert_allclose(g_quad, [3.0, 8.0], atol=1e-10)


def test_criterion_7_cli_byte_identical_reruns(tmp_path):
    """Same seed, same command, twice: every physics byte matches.

    The wall_time_s column of results.csv is a timing measurement and is
    compared structurally, not byte-wise; all other columns, every trace file,
    and the manifest must be byte-identical.
    """
    out = tmp_path / "out"
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "kind": "single",
        "scenario_inline": {"num_gus": 1, "ris_rows": 1, "ris_cols": 2},
        "seeds": [0, 1],
        "max_outer_iters": 4,
        "output_path": str(out),
    }), encoding="utf-8")
    command = [sys.executable, "-m", "risuav.cli", "run", "--spec", str(spec_path)]

    proc = subprocess.run(command, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    first = shutil.copytree(out, tmp_path / "first")

    proc = subprocess.run(command, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    outs = [first, out]

    def rows_without_wall_time(path):
        lines = path.read_text(encoding="utf-8").split("\n")
        return [line.rsplit(",", 1)[0] if i > 0 and line else line
                for i, line in enumerate(lines)]

    a, b = outs
    assert rows_without_wall_time(a / "results.csv") == \
        rows_without_wall_time(b / "results.csv")
    assert (a / "manifest.json").read_bytes() == (b / "manifest.json").read_bytes()

    trace_names = sorted(p.name for p in a.glob("trace_*.csv"))
    assert trace_names == sorted(p.name for p in b.glob("trace_*.csv"))
    assert len(trace_names) == 6
    for name in trace_names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
