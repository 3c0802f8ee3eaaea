"""Rates, powers, energy efficiency, and constraint handling.

The decision variables live in :class:`SolutionState`: per-element on-off states X,
per-element phases theta, per-GU transmit powers P, and the UAV horizontal position.
Energy efficiency is sum rate over total consumed power. The genetic solvers need a
strictly positive fitness, so rate-constraint violations are folded in as a
multiplicative penalty with a small floor rather than rejected outright; power
constraints never reach the penalty because they are repaired in the optim module.

The ``*_fitness`` builders return closures that score whole populations at once;
they are the hot path of every run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, ScatteringDraw, build_channel_set, effective_channels, ris_gu_block
from .scenario import Scenario


@dataclass(frozen=True)
class PenaltyConfig:
    """Multiplicative rate-constraint penalty. weight scales the summed relative
    deficit; epsilon floors the fitness so selection probabilities stay defined."""

    weight: float = 10.0
    epsilon: float = 1.0e-12


@dataclass
class SolutionState:
    """One candidate solution: on-off vector X, phases theta, powers P, UAV position."""

    onoff: np.ndarray     # (M,) entries in {0, 1}
    phases: np.ndarray    # (M,) radians in [0, 2*pi)
    powers: np.ndarray    # (K,) watts
    uav_pos: np.ndarray   # (2,) meters

    def copy(self) -> "SolutionState":
        return SolutionState(self.onoff.copy(), self.phases.copy(),
                             self.powers.copy(), self.uav_pos.copy())


@dataclass
class ConstraintReport:
    per_gu_rate: np.ndarray    # (K,) bits/s
    rate_feasible: np.ndarray  # (K,) bool, rate >= min_rate
    power_sum: float           # watts
    power_feasible: bool       # sum <= P_max and every p_k > 0
    overall_feasible: bool


def validate_solution(solution: SolutionState, scn: Scenario) -> SolutionState:
    """Shape and domain checks; raises ValueError naming the offending part."""
    m, k = scn.num_elements, scn.num_gus
    if solution.onoff.shape != (m,):
        raise ValueError(f"onoff shape {solution.onoff.shape}, expected ({m},)")
    if solution.phases.shape != (m,):
        raise ValueError(f"phases shape {solution.phases.shape}, expected ({m},)")
    if solution.powers.shape != (k,):
        raise ValueError(f"powers shape {solution.powers.shape}, expected ({k},)")
    if np.shape(solution.uav_pos) != (2,):
        raise ValueError(f"uav_pos shape {np.shape(solution.uav_pos)}, expected (2,)")
    if not np.all((solution.onoff == 0) | (solution.onoff == 1)):
        raise ValueError("onoff entries must be 0 or 1")
    return solution


def hover_power(mass_kg: float, gravity: float, prop_radius_m: float,
                num_props: float, air_density: float) -> float:
    """Hovering power sqrt((m*g)^3 / (2*pi*r_p^2*n_p*rho)) in watts."""
    args = {"mass_kg": mass_kg, "gravity": gravity, "prop_radius_m": prop_radius_m,
            "num_props": num_props, "air_density": air_density}
    for name, val in args.items():
        if not val > 0:
            raise ValueError(f"{name} must be positive, got {val}")
    thrust = mass_kg * gravity
    return float(np.sqrt(thrust ** 3 / (2.0 * np.pi * prop_radius_m ** 2
                                        * num_props * air_density)))


def sinr(channels, powers, k: int, noise: float) -> float:
    """SINR of GU k: |C_k|^2 p_k / (|C_k|^2 * sum_{t != k} p_t + noise)."""
    c = np.asarray(channels)
    p = np.asarray(powers, dtype=float)
    gain = float(np.abs(c[k]) ** 2)
    interference = gain * float(p.sum() - p[k])
    return gain * float(p[k]) / (interference + noise)


def per_gu_rates(channels, powers, bandwidth: float, noise: float) -> np.ndarray:
    """Per-GU rates B*log2(1+SINR), broadcasting over leading axes.

    channels and powers are (..., K); returns (..., K) bits/s.
    """
    c = np.asarray(channels)
    p = np.asarray(powers, dtype=float)
    gain = np.abs(c) ** 2
    interference = gain * (p.sum(axis=-1, keepdims=True) - p)
    gamma = gain * p / (interference + noise)
    return bandwidth * np.log2(1.0 + gamma)


def sum_rate(channels, powers, bandwidth: float, noise: float) -> float:
    return float(per_gu_rates(channels, powers, bandwidth, noise).sum(axis=-1))


def total_power(solution: SolutionState, scn: Scenario) -> float:
    """Hover + transmit + GU circuit + per-active-element RIS power, watts."""
    p_h = hover_power(scn.drone_mass, scn.gravity, scn.prop_radius,
                      scn.num_props, scn.air_density)
    k = len(solution.powers)
    return float(p_h + np.sum(solution.powers) + k * scn.gu_circuit_power
                 + scn.ru_power * np.sum(solution.onoff))


def energy_efficiency(solution: SolutionState, scatter: ScatteringDraw,
                      scn: Scenario) -> float:
    """Sum rate over total power, bits per joule, channels rebuilt at solution.uav_pos."""
    chans = build_channel_set(scn, solution.uav_pos, scatter)
    c_eff = effective_channels(chans, solution.phases, solution.onoff)
    r_t = sum_rate(c_eff, solution.powers, scn.bandwidth, scn.noise_power)
    return r_t / total_power(solution, scn)


def check_constraints(solution: SolutionState, scatter: ScatteringDraw,
                      scn: Scenario) -> ConstraintReport:
    chans = build_channel_set(scn, solution.uav_pos, scatter)
    c_eff = effective_channels(chans, solution.phases, solution.onoff)
    rates = per_gu_rates(c_eff, solution.powers, scn.bandwidth, scn.noise_power)
    rate_ok = rates >= scn.min_rate
    psum = float(np.sum(solution.powers))
    # <= is inclusive; the tiny relative slack absorbs repair-scaling roundoff.
    power_ok = bool(psum <= scn.max_power * (1.0 + 1.0e-12)
                    and np.all(solution.powers > 0.0))
    return ConstraintReport(per_gu_rate=rates, rate_feasible=rate_ok, power_sum=psum,
                            power_feasible=power_ok,
                            overall_feasible=bool(power_ok and np.all(rate_ok)))


def _hover(scn: Scenario) -> float:
    return hover_power(scn.drone_mass, scn.gravity, scn.prop_radius,
                       scn.num_props, scn.air_density)


def _fitness_core(c_eff, powers, onoff_total, scn: Scenario,
                  penalty: PenaltyConfig) -> np.ndarray:
    """Penalized fitness from effective channels, broadcast over leading axes."""
    rates = per_gu_rates(c_eff, powers, scn.bandwidth, scn.noise_power)
    k = rates.shape[-1]
    r_t = rates.sum(axis=-1)
    p_t = (_hover(scn) + np.asarray(powers, dtype=float).sum(axis=-1)
           + k * scn.gu_circuit_power + scn.ru_power * np.asarray(onoff_total))
    eta = r_t / p_t
    if scn.min_rate > 0:
        deficit = np.clip((scn.min_rate - rates) / scn.min_rate, 0.0, None).sum(axis=-1)
        eta = np.where(deficit > 0.0, eta / (1.0 + penalty.weight * deficit), eta)
    return np.maximum(eta, penalty.epsilon)


def penalized_fitness(solution: SolutionState, scatter: ScatteringDraw, scn: Scenario,
                      penalty: PenaltyConfig = PenaltyConfig(),
                      chans: ChannelSet | None = None) -> float:
    """Nonnegative scalar fitness: eta when rate-feasible, penalized eta otherwise.

    Power constraints are assumed repaired upstream and are not penalized here.
    A prebuilt ChannelSet for solution.uav_pos may be passed to skip channel work.
    """
    if penalty.epsilon <= 0:
        raise ValueError(f"penalty.epsilon must be > 0, got {penalty.epsilon}")
    if chans is None:
        chans = build_channel_set(scn, solution.uav_pos, scatter)
    c_eff = effective_channels(chans, solution.phases, solution.onoff)
    return float(_fitness_core(c_eff, solution.powers, float(np.sum(solution.onoff)),
                               scn, penalty))


# ---------------------------------------------------------------------------
# Batched fitness builders for the inner solvers.
# ---------------------------------------------------------------------------

def phase_power_fitness(scn: Scenario, chans: ChannelSet, onoff: np.ndarray,
                        penalty: PenaltyConfig):
    """Fitness over [theta | P] genomes with X and the UAV position fixed.

    Returns f mapping an (n, M+K) population to (n,) fitness values.
    """
    m = scn.num_elements
    coeff = np.conj(chans.ris_gu) * chans.uav_ris[None, :] * np.asarray(onoff)[None, :]
    active = float(np.sum(onoff))

    def fitness(genomes: np.ndarray) -> np.ndarray:
        g = np.atleast_2d(np.asarray(genomes, dtype=float))
        theta, powers = g[:, :m], g[:, m:]
        c_eff = chans.direct[None, :] + np.exp(1j * theta) @ coeff.T
        return _fitness_core(c_eff, powers, active, scn, penalty)

    return fitness


def power_fitness(scn: Scenario, chans: ChannelSet, theta: np.ndarray,
                  onoff: np.ndarray, penalty: PenaltyConfig):
    """Fitness over P genomes with theta, X, and the UAV position all fixed."""
    c_eff = effective_channels(chans, theta, onoff)
    active = float(np.sum(onoff))

    def fitness(powers: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(np.asarray(powers, dtype=float))
        return _fitness_core(c_eff[None, :], p, active, scn, penalty)

    return fitness


def onoff_fitness(scn: Scenario, chans: ChannelSet, theta: np.ndarray,
                  powers: np.ndarray, penalty: PenaltyConfig):
    """Fitness over X genomes with theta, P, and the UAV position fixed.

    The RIS power term varies with the number of active elements, so each
    candidate pattern sees its own total power.
    """
    coeff = np.conj(chans.ris_gu) * chans.uav_ris[None, :] * np.exp(
        1j * np.asarray(theta, dtype=float))[None, :]
    p = np.asarray(powers, dtype=float)

    def fitness(patterns: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(patterns, dtype=float))
        c_eff = chans.direct[None, :] + x @ coeff.T
        return _fitness_core(c_eff, p[None, :], x.sum(axis=1), scn, penalty)

    return fitness


def placement_objective(scn: Scenario, scatter: ScatteringDraw, onoff: np.ndarray,
                        theta: np.ndarray, powers: np.ndarray,
                        penalty: PenaltyConfig):
    """Scalar objective over the UAV position with (X, theta, P) fixed.

    Caches the UAV-independent RIS-GU block so each evaluation only rebuilds the
    direct and UAV-RIS links.
    """
    cached = ris_gu_block(scn, scatter)
    weights = np.asarray(onoff, dtype=float) * np.exp(1j * np.asarray(theta, dtype=float))
    p = np.asarray(powers, dtype=float)
    active = float(np.sum(onoff))

    def objective(w_u: np.ndarray) -> float:
        chans = build_channel_set(scn, w_u, scatter, ris_gu=cached)
        c_eff = chans.direct + (np.conj(chans.ris_gu) * chans.uav_ris[None, :]) @ weights
        return float(_fitness_core(c_eff, p, active, scn, penalty))

    return objective
