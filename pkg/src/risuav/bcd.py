"""Outer loop: block-coordinate ascent over the four decision blocks.

One outer pass runs the continuous GA on (theta, P), the binary GA on X, and Adam
on the UAV position, in that order, each seeing the latest accepted values of the
other blocks. A block's proposal is accepted only if it does not decrease the
penalized objective, so the per-iteration trace is non-decreasing by construction.
The loop stops when the relative improvement over one pass falls below delta.

Baselines share the same skeleton: ``baseline_no_ris`` forces every element off
and searches powers and placement only; ``baseline_random_phase`` freezes one
random phase draw with all elements on.

All entry points take a master seed; every stochastic stage draws from a labeled
substream of it, so identical (inputs, seed) reproduce results bit-exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .channel import ScatteringDraw, build_channel_set, ris_gu_block
from .objective import (ConstraintReport, PenaltyConfig, SolutionState, check_constraints,
                        onoff_fitness, penalized_fitness, phase_power_fitness,
                        placement_objective, power_fitness, validate_solution)
from .optim import (AdamConfig, GaConfig, adam_maximize, ga_binary_run,
                    ga_continuous_run, repair_power)
from .scenario import RngStream, Scenario, validate


@dataclass(frozen=True)
class BcdConfig:
    delta: float = 1.0e-3            # relative improvement threshold
    max_outer_iters: int = 20
    ga_phase_cfg: GaConfig = field(
        default_factory=lambda: GaConfig(generations=100, rng_label="ga-phase"))
    ga_onoff_cfg: GaConfig = field(
        default_factory=lambda: GaConfig(generations=60, rng_label="ga-onoff"))
    adam_cfg: AdamConfig = field(default_factory=AdamConfig)
    penalty: PenaltyConfig = field(default_factory=PenaltyConfig)
    power_floor: float = 1.0e-6      # p_min for the repair projection


@dataclass
class BcdResult:
    best: SolutionState
    eta_trace: np.ndarray            # objective after each outer pass, index 0 = initial
    outer_iters_used: int
    constraint_report: ConstraintReport
    wall_time: float                 # seconds


def _check_bcd_config(cfg: BcdConfig) -> None:
    if cfg.delta <= 0:
        raise ValueError(f"delta must be > 0, got {cfg.delta}")
    if cfg.max_outer_iters < 1:
        raise ValueError(f"max_outer_iters must be >= 1, got {cfg.max_outer_iters}")


def initial_solution(scn: Scenario, power_floor: float = 1.0e-6) -> SolutionState:
    """All elements on, zero phases, uniform power split, UAV at its start point."""
    m, k = scn.num_elements, scn.num_gus
    powers = repair_power(np.full(k, scn.max_power / k), scn.max_power, power_floor)
    return SolutionState(onoff=np.ones(m), phases=np.zeros(m), powers=powers,
                         uav_pos=np.asarray(scn.uav_initial_position, dtype=float))


def _run(scn: Scenario, scatter: ScatteringDraw, init: SolutionState, cfg: BcdConfig,
         seed: int, search_phases: bool, search_onoff: bool) -> BcdResult:
    t0 = time.perf_counter()
    validate(scn)
    _check_bcd_config(cfg)
    validate_solution(init, scn)
    m, k = scn.num_elements, scn.num_gus

    sol = init.copy()
    sol.powers = repair_power(sol.powers, scn.max_power, cfg.power_floor)

    cached_ris_gu = ris_gu_block(scn, scatter)

    def score(s: SolutionState) -> float:
        chans = build_channel_set(scn, s.uav_pos, scatter, ris_gu=cached_ris_gu)
        return penalized_fitness(s, scatter, scn, cfg.penalty, chans=chans)

    cur = score(sol)
    trace = [cur]

    for it in range(1, cfg.max_outer_iters + 1):
        chans = build_channel_set(scn, sol.uav_pos, scatter, ris_gu=cached_ris_gu)

        # (a) phases and powers jointly, or powers alone when phases are frozen.
        # The incumbent genome seeds the population so passes refine, not restart.
        rng = RngStream(seed, f"{cfg.ga_phase_cfg.rng_label}:{it}").generator()
        cand = sol.copy()
        if search_phases:
            fit = phase_power_fitness(scn, chans, sol.onoff, cfg.penalty)
            incumbent = np.concatenate([sol.phases, sol.powers])
            genome, _, _ = ga_continuous_run(fit, (m, k), cfg.ga_phase_cfg, rng,
                                             p_max=scn.max_power, p_min=cfg.power_floor,
                                             seed_genomes=incumbent)
            cand.phases = genome[:m].copy()
            cand.powers = genome[m:].copy()
        else:
            fit = power_fitness(scn, chans, sol.phases, sol.onoff, cfg.penalty)
            genome, _, _ = ga_continuous_run(fit, (0, k), cfg.ga_phase_cfg, rng,
                                             p_max=scn.max_power, p_min=cfg.power_floor,
                                             seed_genomes=sol.powers)
            cand.powers = genome.copy()
        val = score(cand)
        if val >= cur:
            sol, cur = cand, val

        # (b) on-off pattern
        if search_onoff:
            rng = RngStream(seed, f"{cfg.ga_onoff_cfg.rng_label}:{it}").generator()
            fit = onoff_fitness(scn, chans, sol.phases, sol.powers, cfg.penalty)
            pattern, _, _ = ga_binary_run(fit, m, cfg.ga_onoff_cfg, rng,
                                          seed_genomes=sol.onoff.astype(int))
            cand = sol.copy()
            cand.onoff = pattern.astype(float)
            val = score(cand)
            if val >= cur:
                sol, cur = cand, val

        # (c) UAV placement
        objective = placement_objective(scn, scatter, sol.onoff, sol.phases,
                                        sol.powers, cfg.penalty)
        w_best, _ = adam_maximize(objective, sol.uav_pos, cfg.adam_cfg)
        cand = sol.copy()
        cand.uav_pos = np.asarray(w_best, dtype=float)
        val = score(cand)
        if val >= cur:
            sol, cur = cand, val

        prev = trace[-1]
        trace.append(cur)
        if (cur - prev) / max(prev, 1.0e-300) < cfg.delta:
            break

    return BcdResult(best=sol, eta_trace=np.asarray(trace),
                     outer_iters_used=len(trace) - 1,
                     constraint_report=check_constraints(sol, scatter, scn),
                     wall_time=time.perf_counter() - t0)


def optimize(scn: Scenario, scatter: ScatteringDraw, init: SolutionState,
             cfg: BcdConfig = BcdConfig(), seed: int = 0) -> BcdResult:
    """Full pipeline: phases and powers, on-off states, and placement all searched."""
    return _run(scn, scatter, init, cfg, seed, search_phases=True, search_onoff=True)


def baseline_no_ris(scn: Scenario, scatter: ScatteringDraw,
                    cfg: BcdConfig = BcdConfig(), seed: int = 0) -> BcdResult:
    """Direct links only: every element off, so no reflection and no RIS power draw."""
    init = initial_solution(scn, cfg.power_floor)
    init.onoff = np.zeros(scn.num_elements)
    return _run(scn, scatter, init, cfg, seed, search_phases=False, search_onoff=False)


def baseline_random_phase(scn: Scenario, scatter: ScatteringDraw,
                          cfg: BcdConfig = BcdConfig(), seed: int = 0) -> BcdResult:
    """All elements on with one frozen uniform phase draw; powers and placement searched."""
    init = initial_solution(scn, cfg.power_floor)
    rng = RngStream(seed, "random-phase").generator()
    init.phases = rng.uniform(0.0, 2.0 * np.pi, size=scn.num_elements)
    return _run(scn, scatter, init, cfg, seed, search_phases=False, search_onoff=False)
