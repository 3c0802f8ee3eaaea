"""Inner solvers: continuous and binary genetic algorithms, and Adam over 2-D space.

All three treat the objective as a black box and maximize it. The continuous GA
works on genomes [theta | P] (phases then powers), the binary GA on on-off bit
vectors, and Adam on UAV coordinates with central finite-difference gradients.

The crossover and mutation operators are pure maps with no knowledge of genome
layout; the GA drivers apply phase wrapping and power repair right after each
operator so every individual in every generation is feasible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

# Default mutation scale for phase entries, radians.
DEFAULT_THETA_SIGMA = 0.15


@dataclass(frozen=True)
class GaConfig:
    """Hyperparameters shared by both GAs.

    pop_pairs is L; the population holds 2L individuals. mutation_scale is the
    Gaussian sigma for phase entries (continuous GA) or the per-bit flip
    probability (binary GA); None resolves to 0.15 rad and min(1/m, 0.5)
    respectively. power_mutation_frac scales the power-entry sigma as a fraction
    of P_max.
    """

    pop_pairs: int = 25
    generations: int = 100
    mutation_scale: float | None = None
    power_mutation_frac: float = 0.02
    elitism: bool = True
    rng_label: str = "ga"


@dataclass(frozen=True)
class AdamConfig:
    """Adam hyperparameters plus the finite-difference step.

    step defaults to 1.0 m, sized for placement coordinates that span tens of
    meters; iters is the iteration budget; fd_step is the central-difference h.
    ascent=True climbs the objective (the use case here is maximization); set it
    False for the literal descending update.
    """

    step: float = 1.0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1.0e-8
    iters: int = 50
    fd_step: float = 0.5
    ascent: bool = True


def _check_ga_config(cfg: GaConfig) -> None:
    if cfg.pop_pairs < 1:
        raise ValueError(f"pop_pairs must be >= 1, got {cfg.pop_pairs}")
    if cfg.generations < 1:
        raise ValueError(f"generations must be >= 1, got {cfg.generations}")
    if cfg.mutation_scale is not None and cfg.mutation_scale < 0:
        raise ValueError(f"mutation_scale must be >= 0, got {cfg.mutation_scale}")
    if cfg.power_mutation_frac < 0:
        raise ValueError(f"power_mutation_frac must be >= 0, got {cfg.power_mutation_frac}")


def _check_adam_config(cfg: AdamConfig) -> None:
    if cfg.step <= 0 or cfg.eps <= 0 or cfg.fd_step <= 0:
        raise ValueError("step, eps, and fd_step must all be positive")
    if not (0.0 <= cfg.beta1 < 1.0 and 0.0 <= cfg.beta2 < 1.0):
        raise ValueError("beta1 and beta2 must lie in [0, 1)")
    if cfg.iters < 1:
        raise ValueError(f"iters must be >= 1, got {cfg.iters}")


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

def selection_sample(fitnesses, rng: np.random.Generator) -> int:
    """Index drawn with probability proportional to fitness."""
    f = np.asarray(fitnesses, dtype=float)
    if np.any(f < 0) or not np.all(np.isfinite(f)):
        raise ValueError("fitnesses must be finite and nonnegative")
    total = f.sum()
    if total <= 0.0:
        raise ValueError("all-zero fitnesses: selection PMF undefined")
    return int(rng.choice(f.size, p=f / total))


def crossover_blend(a, b, rng: np.random.Generator):
    """Weighted-sum crossover: one weight w ~ U[0,1] per pair, two mirrored children.

    Children are convex combinations, so every child coordinate lies between the
    parents' coordinates.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"parent shapes differ: {a.shape} vs {b.shape}")
    w = rng.uniform()
    return w * a + (1.0 - w) * b, (1.0 - w) * a + w * b


def crossover_single_point(a, b, cut: int):
    """Swap tails at the cut index: children a[:cut]+b[cut:] and b[:cut]+a[cut:]."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"parent shapes differ: {a.shape} vs {b.shape}")
    if not 1 <= cut <= a.size - 1:
        raise ValueError(f"cut must be in [1, {a.size - 1}], got {cut}")
    c1 = np.concatenate([a[:cut], b[cut:]])
    c2 = np.concatenate([b[:cut], a[cut:]])
    return c1, c2


def mutate_continuous(genome, sigma, rng: np.random.Generator) -> np.ndarray:
    """Add Gaussian(0, sigma^2) noise to every element.

    sigma may be a scalar or broadcast along the last axis for per-entry scales.
    Wrapping and repair are the caller's job.
    """
    g = np.asarray(genome, dtype=float)
    return g + rng.standard_normal(g.shape) * sigma


def wrap_phase(theta) -> np.ndarray:
    """Wrap angles into [0, 2*pi). Guards the mod-rounding edge at exactly 2*pi."""
    t = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    return np.where(t >= TWO_PI, 0.0, t)


def repair_power(p_raw, p_max: float, p_min: float = 1.0e-6) -> np.ndarray:
    """Project raw powers onto the feasible set: each >= p_min, sum <= p_max.

    Entries are clamped up to p_min first; if the sum then exceeds p_max, all
    entries are rescaled uniformly. Operates along the last axis, so whole
    populations can be repaired in one call.
    """
    p = np.asarray(p_raw, dtype=float)
    k = p.shape[-1] if p.ndim else p.size
    if p_min <= 0:
        raise ValueError(f"p_min must be > 0, got {p_min}")
    if k and p_min * k >= p_max:
        raise ValueError(f"infeasible bounds: p_min*K = {p_min * k} >= p_max = {p_max}")
    p = np.clip(p, p_min, None)
    s = p.sum(axis=-1, keepdims=True)
    scale = np.where(s > p_max, p_max / s, 1.0)
    return p * scale


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------

def _select_parents(fit: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    return np.array([selection_sample(fit, rng) for _ in range(n)])


def ga_continuous_run(fitness, dims: tuple[int, int], cfg: GaConfig,
                      rng: np.random.Generator, p_max: float = 1.0,
                      p_min: float = 1.0e-6, seed_genomes=None):
    """Run the continuous GA over [theta | P] genomes.

    fitness maps an (n, m+k) population to (n,) nonnegative values. dims is
    (m, k); either part may be empty (m=0 gives a power-only search). Returns
    (best genome, best fitness, per-generation best trace). The trace has
    generations+1 entries, the first being the initial population's best.

    seed_genomes, if given, replace leading members of the otherwise uniform
    initial population; the outer loop passes the incumbent solution here so
    successive passes refine instead of restarting.
    """
    _check_ga_config(cfg)
    m, k = dims
    if m < 0 or k < 0 or m + k == 0:
        raise ValueError(f"dims must be nonnegative with m+k >= 1, got {dims}")
    n = 2 * cfg.pop_pairs
    sigma_theta = DEFAULT_THETA_SIGMA if cfg.mutation_scale is None else cfg.mutation_scale
    sigma = np.concatenate([np.full(m, sigma_theta),
                            np.full(k, cfg.power_mutation_frac * p_max)])

    pop = np.empty((n, m + k))
    pop[:, :m] = rng.uniform(0.0, TWO_PI, size=(n, m))
    if k:
        pop[:, m:] = repair_power(rng.uniform(0.0, p_max, size=(n, k)), p_max, p_min)
    if seed_genomes is not None:
        injected = np.atleast_2d(np.asarray(seed_genomes, dtype=float))[:n]
        if injected.shape[1] != m + k:
            raise ValueError(f"seed genome length {injected.shape[1]}, expected {m + k}")
        pop[:len(injected), :m] = wrap_phase(injected[:, :m])
        if k:
            pop[:len(injected), m:] = repair_power(injected[:, m:], p_max, p_min)
    fit = np.asarray(fitness(pop), dtype=float)

    best_i = int(np.argmax(fit))
    best, best_fit = pop[best_i].copy(), float(fit[best_i])
    trace = [float(fit.max())]

    for _ in range(cfg.generations):
        idx = _select_parents(fit, n, rng)
        children = np.empty_like(pop)
        for pair in range(cfg.pop_pairs):
            c1, c2 = crossover_blend(pop[idx[2 * pair]], pop[idx[2 * pair + 1]], rng)
            children[2 * pair] = c1
            children[2 * pair + 1] = c2
        children = mutate_continuous(children, sigma, rng)
        children[:, :m] = wrap_phase(children[:, :m])
        if k:
            children[:, m:] = repair_power(children[:, m:], p_max, p_min)

        # Feasibility invariants hold for every individual in every generation.
        assert np.all(children[:, :m] >= 0.0) and np.all(children[:, :m] < TWO_PI)
        if k:
            assert np.all(children[:, m:] > 0.0)
            assert np.all(children[:, m:].sum(axis=1) <= p_max * (1.0 + 1.0e-9))

        child_fit = np.asarray(fitness(children), dtype=float)
        gi = int(np.argmax(child_fit))
        if child_fit[gi] > best_fit:
            best, best_fit = children[gi].copy(), float(child_fit[gi])
        if cfg.elitism and best_fit > child_fit[gi]:
            worst = int(np.argmin(child_fit))
            children[worst] = best
            child_fit[worst] = best_fit
        pop, fit = children, child_fit
        trace.append(float(fit.max()))

    return best, best_fit, np.asarray(trace)


def ga_binary_run(fitness, m: int, cfg: GaConfig, rng: np.random.Generator,
                  seed_genomes=None):
    """Run the binary GA over length-m bit vectors.

    Single-point crossover (for m >= 2) and independent per-bit flips with
    probability mu. Returns (best pattern, best fitness, per-generation trace).
    seed_genomes, if given, replace leading members of the random initial
    population (the outer loop passes the incumbent on-off pattern here).
    """
    _check_ga_config(cfg)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    mu = min(1.0 / m, 0.5) if cfg.mutation_scale is None else cfg.mutation_scale
    if not 0.0 <= mu < 1.0:
        raise ValueError(f"flip probability must lie in [0, 1), got {mu}")
    n = 2 * cfg.pop_pairs

    pop = rng.integers(0, 2, size=(n, m))
    if seed_genomes is not None:
        injected = np.atleast_2d(np.asarray(seed_genomes))[:n]
        if injected.shape[1] != m:
            raise ValueError(f"seed genome length {injected.shape[1]}, expected {m}")
        if not np.isin(injected, (0, 1)).all():
            raise ValueError("seed genomes must be 0/1 patterns")
        pop[:len(injected)] = injected.astype(pop.dtype)
    fit = np.asarray(fitness(pop), dtype=float)
    best_i = int(np.argmax(fit))
    best, best_fit = pop[best_i].copy(), float(fit[best_i])
    trace = [float(fit.max())]

    for _ in range(cfg.generations):
        idx = _select_parents(fit, n, rng)
        children = np.empty_like(pop)
        for pair in range(cfg.pop_pairs):
            a, b = pop[idx[2 * pair]], pop[idx[2 * pair + 1]]
            if m >= 2:
                cut = int(rng.integers(1, m))
                c1, c2 = crossover_single_point(a, b, cut)
            else:
                c1, c2 = a.copy(), b.copy()
            children[2 * pair] = c1
            children[2 * pair + 1] = c2
        flips = rng.uniform(size=children.shape) < mu
        children = np.where(flips, 1 - children, children)

        child_fit = np.asarray(fitness(children), dtype=float)
        gi = int(np.argmax(child_fit))
        if child_fit[gi] > best_fit:
            best, best_fit = children[gi].copy(), float(child_fit[gi])
        if cfg.elitism and best_fit > child_fit[gi]:
            worst = int(np.argmin(child_fit))
            children[worst] = best
            child_fit[worst] = best_fit
        pop, fit = children, child_fit
        trace.append(float(fit.max()))

    return best, best_fit, np.asarray(trace)


def finite_diff_gradient(f, w, h: float) -> np.ndarray:
    """Central-difference gradient of f at w with step h per coordinate."""
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    w = np.asarray(w, dtype=float)
    grad = np.empty(w.size)
    for i in range(w.size):
        e = np.zeros(w.size)
        e[i] = h
        f_plus = float(f(w + e))
        f_minus = float(f(w - e))
        if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
            raise FloatingPointError(
                f"objective non-finite at finite-difference stencil around {w}")
        grad[i] = (f_plus - f_minus) / (2.0 * h)
    return grad


def _update_moments(m: np.ndarray, v: np.ndarray, g: np.ndarray,
                    beta1: float, beta2: float):
    """One step of the exponential moment recurrences."""
    m_next = beta1 * m + (1.0 - beta1) * g
    v_next = beta2 * v + (1.0 - beta2) * g * g
    return m_next, v_next


def adam_maximize(f, w0, cfg: AdamConfig):
    """Adam with bias-corrected moments over a scalar field on R^2.

    Gradients come from finite_diff_gradient. Returns (best-observed coordinates,
    trace of f at every iterate including w0). With cfg.ascent the update climbs;
    otherwise it applies the plain descending form.
    """
    _check_adam_config(cfg)
    w = np.asarray(w0, dtype=float).copy()
    m = np.zeros_like(w)
    v = np.zeros_like(w)
    sign = 1.0 if cfg.ascent else -1.0

    f_cur = float(f(w))
    trace = [f_cur]
    best_w, best_f = w.copy(), f_cur

    for i in range(1, cfg.iters + 1):
        g = finite_diff_gradient(f, w, cfg.fd_step)
        m, v = _update_moments(m, v, g, cfg.beta1, cfg.beta2)
        m_hat = m / (1.0 - cfg.beta1 ** i)
        v_hat = v / (1.0 - cfg.beta2 ** i)
        w = w + sign * cfg.step * m_hat / (np.sqrt(v_hat) + cfg.eps)
        f_cur = float(f(w))
        trace.append(f_cur)
        if f_cur > best_f:
            best_w, best_f = w.copy(), f_cur

    return best_w, np.asarray(trace)
