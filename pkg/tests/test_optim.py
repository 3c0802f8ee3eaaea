"""Operator-level and driver-level checks for the GA and Adam solvers."""

import numpy as np
import pytest

from risuav.optim import (DEFAULT_THETA_SIGMA, AdamConfig, GaConfig, adam_maximize,
                          crossover_blend, crossover_single_point,
                          finite_diff_gradient, ga_binary_run, ga_continuous_run,
                          mutate_continuous, repair_power, selection_sample,
                          wrap_phase)

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# Selection
# ---------------------------------------------------------------------------

def test_selection_proportional_frequencies():
    rng = np.random.default_rng(0)
    draws = np.array([selection_sample([1.0, 3.0], rng) for _ in range(20000)])
    assert np.mean(draws == 1) == pytest.approx(0.75, abs=0.02)


def test_selection_uniform_for_equal_fitnesses():
    rng = np.random.default_rng(1)
    draws = np.array([selection_sample([2.0, 2.0, 2.0, 2.0], rng)
                      for _ in range(20000)])
    counts = np.bincount(draws, minlength=4) / draws.size
    np.testing.assert_allclose(counts, 0.25, atol=0.02)


def test_selection_rejects_bad_fitnesses():
    rng = np.random.default_rng(2)
    with pytest.raises(ValueError):
        selection_sample([1.0, -0.5], rng)
    with pytest.raises(ValueError):
        selection_sample([0.0, 0.0], rng)
    with pytest.raises(ValueError):
        selection_sample([1.0, np.inf], rng)


# ---------------------------------------------------------------------------
# Crossover and mutation
# ---------------------------------------------------------------------------

def test_crossover_blend_children_are_mirrored_convex_mixes():
    rng = np.random.default_rng(3)
    a = np.array([0.0, 0.0, 5.0])
    b = np.array([2.0, 2.0, -1.0])
    c1, c2 = crossover_blend(a, b, rng)
    np.testing.assert_allclose(c1 + c2, a + b, rtol=1e-12)
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    for c in (c1, c2):
        assert np.all(c >= lo - 1e-12) and np.all(c <= hi + 1e-12)


def test_crossover_blend_identical_parents_fixed_point():
    rng = np.random.default_rng(4)
    a = np.array([1.5, -0.3])
    c1, c2 = crossover_blend(a, a.copy(), rng)
    np.testing.assert_allclose(c1, a, rtol=1e-12)
    np.testing.assert_allclose(c2, a, rtol=1e-12)


def test_crossover_blend_shape_mismatch():
    with pytest.raises(ValueError):
        crossover_blend(np.zeros(2), np.zeros(3), np.random.default_rng(0))


def test_crossover_single_point_swaps_tails():
    c1, c2 = crossover_single_point(np.zeros(4), np.ones(4), 2)
    np.testing.assert_array_equal(c1, [0, 0, 1, 1])
    np.testing.assert_array_equal(c2, [1, 1, 0, 0])


def test_crossover_single_point_cut_bounds():
    with pytest.raises(ValueError):
        crossover_single_point(np.zeros(4), np.ones(4), 0)
    with pytest.raises(ValueError):
        crossover_single_point(np.zeros(4), np.ones(4), 4)


def test_mutate_continuous_zero_sigma_is_identity():
    rng = np.random.default_rng(5)
    g = np.array([0.3, 1.2, 4.0])
    np.testing.assert_array_equal(mutate_continuous(g, 0.0, rng), g)


def test_mutate_continuous_sample_variance():
    rng = np.random.default_rng(6)
    out = mutate_continuous(np.zeros(10000), 0.15, rng)
    assert np.var(out) == pytest.approx(0.15 ** 2, rel=0.05)


def test_mutate_continuous_per_entry_sigma_broadcast():
    rng = np.random.default_rng(7)
    g = np.array([[1.0, 2.0], [3.0, 4.0]])
    out = mutate_continuous(g, np.array([0.0, 1.0]), rng)
    np.testing.assert_array_equal(out[:, 0], g[:, 0])
    assert not np.allclose(out[:, 1], g[:, 1])


# ---------------------------------------------------------------------------
# Wrap and repair
# ---------------------------------------------------------------------------

def test_wrap_phase_values():
    assert wrap_phase(6.4) == pytest.approx(6.4 - TWO_PI, rel=1e-12)
    assert wrap_phase(6.4) == pytest.approx(0.11681469282041377, abs=1e-12)
    assert wrap_phase(-0.1) == pytest.approx(TWO_PI - 0.1, rel=1e-12)
    assert wrap_phase(TWO_PI) == 0.0
    assert wrap_phase(0.0) == 0.0


def test_wrap_phase_range_bulk():
    rng = np.random.default_rng(8)
    t = wrap_phase(rng.uniform(-50, 50, 10000))
    assert np.all(t >= 0.0) and np.all(t < TWO_PI)


def test_repair_power_already_feasible():
    np.testing.assert_array_equal(repair_power(np.array([0.5, 0.5]), 1.0),
                                  [0.5, 0.5])


def test_repair_power_uniform_rescale():
    np.testing.assert_allclose(repair_power(np.array([2.0, 2.0]), 1.0),
                               [0.5, 0.5], rtol=1e-12)


def test_repair_power_clamp_then_no_rescale():
    out = repair_power(np.array([-0.1, 0.6]), 1.0, 1e-6)
    np.testing.assert_allclose(out, [1e-6, 0.6], rtol=1e-12)


def test_repair_power_batched_rows():
    raw = np.array([[0.2, 0.2], [3.0, 1.0], [-1.0, 0.1]])
    out = repair_power(raw, 1.0, 1e-6)
    assert np.all(out > 0.0)
    assert np.all(out.sum(axis=1) <= 1.0 + 1e-12)
    np.testing.assert_allclose(out[1], [0.75, 0.25], rtol=1e-12)


def test_repair_power_infeasible_bounds():
    with pytest.raises(ValueError, match="infeasible"):
        repair_power(np.ones(4), 1.0, p_min=0.5)


# ---------------------------------------------------------------------------
# Continuous GA
# ---------------------------------------------------------------------------

def test_ga_continuous_flat_landscape():
    best, fit, trace = ga_continuous_run(
        lambda pop: np.full(len(pop), 3.5), (2, 0),
        GaConfig(pop_pairs=5, generations=10), np.random.default_rng(0))
    assert fit == 3.5
    assert np.all(trace == 3.5)


def test_ga_continuous_concave_1d_phase():
    # f(theta) = 2 - cos(theta - 1), maximized on the circle at theta = 1 + pi.
    hits = 0
    for seed in range(10):
        best, _, _ = ga_continuous_run(
            lambda pop: 2.0 - np.cos(pop[:, 0] - 1.0), (1, 0),
            GaConfig(pop_pairs=20, generations=100), np.random.default_rng(seed))
        hits += abs(best[0] - (1.0 + np.pi)) < 0.1
    assert hits >= 9


def test_ga_continuous_trace_shape_and_monotone_with_elitism():
    rng = np.random.default_rng(1)
    _, _, trace = ga_continuous_run(
        lambda pop: 1.0 / (1.0 + np.sum(pop ** 2, axis=1)), (3, 2),
        GaConfig(pop_pairs=8, generations=40), rng)
    assert trace.shape == (41,)
    assert np.all(np.diff(trace) >= 0.0)


def test_ga_continuous_deterministic_under_seed():
    def fit(pop):
        return 1.0 + np.sin(pop[:, 0]) + pop[:, 1]
    a = ga_continuous_run(fit, (1, 1), GaConfig(pop_pairs=6, generations=20),
                          np.random.default_rng(42))
    b = ga_continuous_run(fit, (1, 1), GaConfig(pop_pairs=6, generations=20),
                          np.random.default_rng(42))
    np.testing.assert_array_equal(a[0], b[0])
    assert a[1] == b[1]
    np.testing.assert_array_equal(a[2], b[2])


def test_ga_continuous_seed_genome_floor():
    # Injecting the known maximizer means the run can never end below its score.
    def fit(pop):
        return 2.0 - np.cos(pop[:, 0] - 1.0)
    optimum = np.array([1.0 + np.pi])
    _, best_fit, trace = ga_continuous_run(
        fit, (1, 0), GaConfig(pop_pairs=4, generations=5),
        np.random.default_rng(0), seed_genomes=optimum)
    assert best_fit >= 3.0 - 1e-12
    assert trace[0] == pytest.approx(3.0, rel=1e-12)


def test_ga_continuous_rejects_empty_dims():
    with pytest.raises(ValueError):
        ga_continuous_run(lambda pop: np.ones(len(pop)), (0, 0), GaConfig(),
                          np.random.default_rng(0))


def test_ga_continuous_power_entries_stay_feasible():
    seen = []

    def fit(pop):
        seen.append(pop.copy())
        return 1.0 + pop[:, -1]

    ga_continuous_run(fit, (2, 3), GaConfig(pop_pairs=5, generations=15),
                      np.random.default_rng(9), p_max=1.0, p_min=1e-6)
    for pop in seen:
        assert np.all(pop[:, :2] >= 0.0) and np.all(pop[:, :2] < TWO_PI)
        assert np.all(pop[:, 2:] > 0.0)
        assert np.all(pop[:, 2:].sum(axis=1) <= 1.0 + 1e-9)


# ---------------------------------------------------------------------------
# Binary GA
# ---------------------------------------------------------------------------

def test_ga_binary_onemax_converges():
    hits = 0
    for seed in range(10):
        best, fit, _ = ga_binary_run(
            lambda pop: pop.sum(axis=1).astype(float) + 1e-9, 4,
            GaConfig(pop_pairs=5, generations=50), np.random.default_rng(seed))
        hits += fit >= 4.0
    assert hits >= 9


def test_ga_binary_zero_mutation_identical_population_is_fixed():
    seen = []

    def fit(pop):
        seen.append(pop.copy())
        return np.ones(len(pop))

    seeds = np.tile(np.array([1, 0, 1, 0, 1]), (8, 1))
    ga_binary_run(fit, 5, GaConfig(pop_pairs=4, generations=10, mutation_scale=0.0),
                  np.random.default_rng(0), seed_genomes=seeds)
    for pop in seen:
        np.testing.assert_array_equal(pop, seeds)


def test_ga_binary_trace_monotone_with_elitism():
    _, _, trace = ga_binary_run(
        lambda pop: 1.0 + pop.sum(axis=1).astype(float), 12,
        GaConfig(pop_pairs=6, generations=30), np.random.default_rng(3))
    assert trace.shape == (31,)
    assert np.all(np.diff(trace) >= 0.0)


def test_ga_binary_rejects_bad_flip_probability():
    with pytest.raises(ValueError, match="flip probability"):
        ga_binary_run(lambda pop: np.ones(len(pop)), 4,
                      GaConfig(mutation_scale=1.5), np.random.default_rng(0))


# ---------------------------------------------------------------------------
# Finite differences and Adam
# ---------------------------------------------------------------------------

def test_finite_diff_exact_on_affine():
    grad = finite_diff_gradient(lambda w: 3.0 * w[0] + 2.0 * w[1],
                                np.array([0.7, -1.2]), 0.5)
    np.testing.assert_allclose(grad, [3.0, 2.0], atol=1e-10)


def test_finite_diff_exact_on_quadratic():
    grad = finite_diff_gradient(lambda w: w[0] ** 2, np.array([1.0, 0.0]), 0.3)
    np.testing.assert_allclose(grad, [2.0, 0.0], atol=1e-10)


def test_finite_diff_constant_field():
    grad = finite_diff_gradient(lambda w: 4.2, np.array([5.0, 5.0]), 1.0)
    np.testing.assert_array_equal(grad, [0.0, 0.0])


def test_finite_diff_rejects_non_finite_objective():
    with pytest.raises(FloatingPointError):
        finite_diff_gradient(lambda w: np.nan, np.array([0.0, 0.0]), 0.5)


def test_finite_diff_rejects_bad_step():
    with pytest.raises(ValueError):
        finite_diff_gradient(lambda w: 0.0, np.array([0.0]), 0.0)


def test_adam_first_step_magnitude_with_constant_gradient():
    # Bias correction makes the first update alpha * g / (|g| + eps) per axis.
    cfg = AdamConfig(step=0.1, iters=1, fd_step=0.5)
    w, _ = adam_maximize(lambda v: 3.0 * v[0] + 2.0 * v[1], np.zeros(2), cfg)
    np.testing.assert_allclose(np.abs(w), 0.1, rtol=1e-6)


def test_adam_recovers_quadratic_maximum():
    cfg = AdamConfig(step=0.1, iters=2000, fd_step=0.5)
    w, trace = adam_maximize(
        lambda v: -((v[0] - 3.0) ** 2 + (v[1] - 4.0) ** 2), np.zeros(2), cfg)
    assert np.linalg.norm(w - np.array([3.0, 4.0])) < 0.01
    assert trace.shape == (2001,)


def test_adam_zero_gradient_never_moves():
    cfg = AdamConfig(step=0.5, iters=25)
    w, trace = adam_maximize(lambda v: 7.0, np.array([2.0, -3.0]), cfg)
    np.testing.assert_array_equal(w, [2.0, -3.0])
    assert np.all(trace == 7.0)


def test_adam_descent_flag_reverses_direction():
    # The returned point is the best observed, which stays at w0 when the
    # iterates walk downhill; the trace shows the descending direction.
    cfg = AdamConfig(step=0.1, iters=5, ascent=False)
    w, trace = adam_maximize(lambda v: 3.0 * v[0] + 2.0 * v[1], np.zeros(2), cfg)
    np.testing.assert_array_equal(w, [0.0, 0.0])
    assert np.all(np.diff(trace) < 0.0)


def test_default_theta_sigma_value():
    assert DEFAULT_THETA_SIGMA == 0.15
