"""Experiment harness: paired sweeps, baselines, the brute-force oracle, CSV output.

Each experiment cell is a (scheme, sweep_value, seed) triple. Within one
(sweep_value, seed) cell every scheme sees identical GU positions and scattering
draws, derived from labeled substreams of the cell seed, so scheme comparisons
are paired. Cells are independent and may run across worker processes; output
row order is canonical regardless of scheduling.

Outputs: ``results.csv`` (one row per cell), ``manifest.json`` (resolved spec,
scenario, instance digests, errors, version), and one ``trace_*.csv`` per run
with the objective value after every outer iteration.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._version import __version__
from .bcd import (BcdConfig, BcdResult, baseline_no_ris, baseline_random_phase,
                  initial_solution, optimize)
from .channel import (build_channel_set, effective_channels, ris_gu_block,
                      sample_scattering)
from .objective import (SolutionState, energy_efficiency, hover_power,
                        per_gu_rates, total_power)
from .scenario import (RngStream, Scenario, default_scenario, load_scenario,
                       sample_gu_positions, scenario_from_dict, scenario_to_dict,
                       with_gu_positions)

SCHEME_PROPOSED = "proposed"
SCHEME_RANDOM_PHASE = "random-phase"
SCHEME_NO_RIS = "no-ris"
ALL_SCHEMES = (SCHEME_PROPOSED, SCHEME_RANDOM_PHASE, SCHEME_NO_RIS)

KINDS = ("single", "sweep-gus", "sweep-elements", "oracle")

RESULT_HEADER = ("scheme,sweep_value,seed,eta_bits_per_joule,sum_rate_bps,"
                 "total_power_w,outer_iters,wall_time_s")

# Oracle defaults: placement box covering the GU disk, the RIS foot point, and
# the initial UAV position; power line-search resolution for K >= 2.
ORACLE_PLACEMENT_BOX = ((175.0, 225.0), (0.0, 50.0))
ORACLE_POWER_GRID = 16
_MAX_ENUMERATION = 10_000_000


@dataclass(frozen=True)
class ExperimentSpec:
    """Resolved description of one experiment; everything a rerun needs."""

    kind: str = "single"
    scenario_path: str | None = None
    scenario_inline: dict | None = None   # embedded scenario, used by manifest replay
    seeds: tuple[int, ...] = (0,)
    sweep_values: tuple[int, ...] = ()
    schemes: tuple[str, ...] = ALL_SCHEMES
    output_path: str = "results"
    fixed_gus: int = 4        # K held fixed during sweep-elements and oracle kinds
    fixed_elements: int = 60  # M held fixed during sweep-gus
    delta: float = 1.0e-3
    max_outer_iters: int = 20
    workers: int = 1
    theta_grid: int = 8       # oracle kind only
    placement_grid: int = 5   # oracle kind only


@dataclass
class ExperimentRow:
    scheme: str
    sweep_value: int
    seed: int
    eta: float          # bits/joule
    sum_rate: float     # bits/s
    total_power: float  # watts
    outer_iters: int
    wall_time: float    # seconds


@dataclass
class ExperimentResult:
    rows: list
    traces: dict        # (scheme, sweep_value, seed) -> objective trace array
    manifest: dict


def validate_spec(spec: ExperimentSpec) -> ExperimentSpec:
    if spec.kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {spec.kind!r}")
    if not spec.seeds:
        raise ValueError("seeds must be non-empty")
    if spec.kind in ("sweep-gus", "sweep-elements", "oracle") and not spec.sweep_values:
        raise ValueError(f"sweep_values must be non-empty for kind {spec.kind!r}")
    if spec.kind != "oracle":
        if not spec.schemes:
            raise ValueError("schemes must be non-empty")
        bad = sorted(set(spec.schemes) - set(ALL_SCHEMES))
        if bad:
            raise ValueError(f"unknown scheme(s): {', '.join(bad)}")
    if any(v < 1 for v in spec.sweep_values):
        raise ValueError(f"sweep_values must be positive, got {spec.sweep_values}")
    if spec.workers < 1:
        raise ValueError(f"workers must be >= 1, got {spec.workers}")
    if spec.theta_grid < 1 or spec.placement_grid < 1:
        raise ValueError("theta_grid and placement_grid must be >= 1")
    return spec


def near_square_factors(m: int) -> tuple[int, int]:
    """Factor m as rows*cols with rows <= cols, as close to square as possible."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    for d in range(int(np.sqrt(m)), 0, -1):
        if m % d == 0:
            return d, m // d
    return 1, m


def resolve_base_scenario(spec: ExperimentSpec) -> Scenario:
    if spec.scenario_inline is not None:
        return scenario_from_dict(spec.scenario_inline)
    if spec.scenario_path is not None:
        return load_scenario(spec.scenario_path)
    return default_scenario()


def build_instance(base: Scenario, num_gus: int, num_elements: int, seed: int):
    """One paired problem instance: scenario with positions, scattering, digest.

    The same (num_gus, num_elements, seed) always yields the same instance, no
    matter which scheme consumes it. GU positions given explicitly in the base
    scenario are kept (fixed across seeds) when their count matches; otherwise
    positions are sampled from the seed's "gu-positions" substream.
    """
    if num_elements == base.num_elements:
        rows, cols = base.ris_rows, base.ris_cols
    else:
        rows, cols = near_square_factors(num_elements)
    template = dataclasses.replace(base, ris_rows=rows, ris_cols=cols,
                                   gu_positions=None, num_gus=num_gus)
    if base.gu_positions is not None and len(base.gu_positions) == num_gus:
        positions = np.asarray(base.gu_positions, dtype=float)
    else:
        positions = sample_gu_positions(RngStream(seed, "gu-positions"), num_gus)
    scn = with_gu_positions(template, positions)
    scatter = sample_scattering(RngStream(seed, "scatter"), num_gus, rows * cols)
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(positions).tobytes())
    h.update(np.ascontiguousarray(scatter.direct).tobytes())
    h.update(np.ascontiguousarray(scatter.ris_gu).tobytes())
    return scn, scatter, h.hexdigest()[:16]


def _bcd_config(spec: ExperimentSpec) -> BcdConfig:
    return BcdConfig(delta=spec.delta, max_outer_iters=spec.max_outer_iters)


_SCHEME_RUNNERS = {
    SCHEME_PROPOSED: lambda scn, scatter, cfg, seed: optimize(
        scn, scatter, initial_solution(scn, cfg.power_floor), cfg, seed),
    SCHEME_RANDOM_PHASE: baseline_random_phase,
    SCHEME_NO_RIS: baseline_no_ris,
}


def _cell_dims(spec: ExperimentSpec, base: Scenario, value: int) -> tuple[int, int]:
    if spec.kind == "single":
        return base.num_gus, base.num_elements
    if spec.kind == "sweep-gus":
        return value, spec.fixed_elements
    if spec.kind == "sweep-elements":
        return spec.fixed_gus, value
    return spec.fixed_gus, value  # oracle: value is the element count


def run_cell(spec: ExperimentSpec, scheme: str, value: int, seed: int):
    """Run one cell; returns (ExperimentRow, trace, digest)."""
    base = resolve_base_scenario(spec)
    k, m = _cell_dims(spec, base, value)

    if spec.kind == "oracle":
        t0 = time.perf_counter()
        eta, sol = run_oracle(m, k, spec.theta_grid, spec.placement_grid, base, seed)
        elapsed = time.perf_counter() - t0
        scn, scatter, digest = build_instance(base, k, max(m, 1), seed)
        c_eff = _effective_for(scn, scatter, sol)
        rate = float(per_gu_rates(c_eff, sol.powers, scn.bandwidth,
                                  scn.noise_power).sum())
        row = ExperimentRow(scheme="oracle", sweep_value=value, seed=seed, eta=eta,
                            sum_rate=rate, total_power=total_power(sol, scn),
                            outer_iters=0, wall_time=elapsed)
        return row, np.asarray([eta]), digest

    scn, scatter, digest = build_instance(base, k, m, seed)
    cfg = _bcd_config(spec)
    result: BcdResult = _SCHEME_RUNNERS[scheme](scn, scatter, cfg, seed)
    row = ExperimentRow(
        scheme=scheme, sweep_value=value, seed=seed,
        eta=energy_efficiency(result.best, scatter, scn),
        sum_rate=float(result.constraint_report.per_gu_rate.sum()),
        total_power=total_power(result.best, scn),
        outer_iters=result.outer_iters_used, wall_time=result.wall_time)
    return row, result.eta_trace, digest


def _effective_for(scn, scatter, sol: SolutionState):
    chans = build_channel_set(scn, sol.uav_pos, scatter)
    return effective_channels(chans, sol.phases, sol.onoff)


def _run_cell_task(args):
    spec, scheme, value, seed = args
    row, trace, digest = run_cell(spec, scheme, value, seed)
    return scheme, value, seed, row, trace, digest


def _cells(spec: ExperimentSpec, base: Scenario):
    if spec.kind == "single":
        values = (base.num_gus,)
    else:
        values = tuple(spec.sweep_values)
    schemes = ("oracle",) if spec.kind == "oracle" else tuple(spec.schemes)
    return [(scheme, value, seed)
            for scheme in schemes for value in values for seed in spec.seeds]


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run every cell of the experiment spec; failed cells are logged and skipped.

    Rows come back sorted by (scheme, sweep_value, seed). The manifest contains
    everything needed to reproduce the physics columns bit-exactly (wall times
    are measurements and vary).
    """
    validate_spec(spec)
    base = resolve_base_scenario(spec)
    cells = _cells(spec, base)
    tasks = [(spec, scheme, value, seed) for scheme, value, seed in cells]

    rows: list[ExperimentRow] = []
    traces: dict = {}
    digests: dict = {}
    errors: dict = {}

    def record(scheme, value, seed, outcome, err):
        key = f"{scheme}_{value}_{seed}"
        if err is not None:
            errors[key] = f"{type(err).__name__}: {err}"
            return
        _, _, _, row, trace, digest = outcome
        rows.append(row)
        traces[(scheme, value, seed)] = np.asarray(trace)
        digests[key] = digest

    if spec.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            futures = [pool.submit(_run_cell_task, t) for t in tasks]
            for (scheme, value, seed), fut in zip(cells, futures):
                err = fut.exception()
                record(scheme, value, seed, None if err else fut.result(), err)
    else:
        for task, (scheme, value, seed) in zip(tasks, cells):
            try:
                outcome = _run_cell_task(task)
            except Exception as exc:
                record(scheme, value, seed, None, exc)
            else:
                record(scheme, value, seed, outcome, None)

    rows.sort(key=lambda r: (r.scheme, r.sweep_value, r.seed))
    manifest = {
        "version": __version__,
        "spec": spec_to_dict(spec),
        "scenario": scenario_to_dict(base),
        "instances": dict(sorted(digests.items())),
        "errors": dict(sorted(errors.items())),
    }
    return ExperimentResult(rows=rows, traces=traces, manifest=manifest)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def run_oracle(m: int, k: int, theta_grid: int, placement_grid: int,
               scn: Scenario | None = None, seed: int = 0,
               power_grid: int = ORACLE_POWER_GRID,
               placement_box=ORACLE_PLACEMENT_BOX):
    """Exhaustive discretized optimum for tiny instances.

    Enumerates every on-off pattern, every per-element phase from a uniform grid
    of theta_grid levels, and every UAV position on a placement_grid^2 lattice
    over placement_box. Powers use full P_max when k=1, otherwise a line search
    over uniform-split scalings. m=0 degenerates to a no-RIS search (a single
    all-off element). Returns (best eta, best SolutionState). The instance is
    derived from (scn, seed) exactly as the experiment cells derive theirs, so
    oracle and solver runs pair up.
    """
    if not 0 <= m <= 4:
        raise ValueError(f"oracle supports m in [0, 4], got {m}")
    if not 1 <= k <= 2:
        raise ValueError(f"oracle supports k in [1, 2], got {k}")
    if theta_grid < 1 or placement_grid < 1 or power_grid < 1:
        raise ValueError("grid sizes must be >= 1")
    n_combos = (2 ** m) * (theta_grid ** m) * (placement_grid ** 2)
    if n_combos > _MAX_ENUMERATION:
        raise ValueError(f"enumeration size {n_combos} exceeds {_MAX_ENUMERATION}")

    base = default_scenario() if scn is None else scn
    m_eff = max(m, 1)
    inst, scatter, _ = build_instance(base, k, m_eff, seed)

    if m == 0:
        patterns = np.zeros((1, 1))
        thetas = np.zeros((1, 1))
    else:
        patterns = ((np.arange(2 ** m)[:, None] >> np.arange(m)[None, :]) & 1).astype(float)
        levels = 2.0 * np.pi * np.arange(theta_grid) / theta_grid
        idx = np.indices((theta_grid,) * m).reshape(m, -1).T
        thetas = levels[idx]
    phase_factors = np.exp(1j * thetas)

    if k == 1:
        scales = np.array([1.0])
    else:
        scales = np.linspace(1.0 / power_grid, 1.0, power_grid)
    p_split = np.full(k, inst.max_power / k)

    (x_lo, x_hi), (y_lo, y_hi) = placement_box
    xs = np.linspace(x_lo, x_hi, placement_grid)
    ys = np.linspace(y_lo, y_hi, placement_grid)

    p_h = hover_power(inst.drone_mass, inst.gravity, inst.prop_radius,
                      inst.num_props, inst.air_density)
    cached = ris_gu_block(inst, scatter)

    best_eta = -np.inf
    best = None
    for wx in xs:
        for wy in ys:
            w = np.array([wx, wy])
            # Directly above the RIS the azimuth is undefined; skip that lattice point.
            if np.hypot(wx - inst.ris_position[0], wy - inst.ris_position[1]) < 1.0e-9:
                continue
            chans = build_channel_set(inst, w, scatter, ris_gu=cached)
            v = np.conj(chans.ris_gu) * chans.uav_ris[None, :]  # (k, m_eff)
            for pat in patterns:
                c_eff = chans.direct[None, :] + (phase_factors * pat[None, :]) @ v.T
                p_ris = inst.ru_power * pat.sum()
                for c in scales:
                    p = c * p_split
                    rates = per_gu_rates(c_eff, p[None, :], inst.bandwidth,
                                         inst.noise_power)
                    feasible = np.all(rates >= inst.min_rate, axis=1)
                    if not feasible.any():
                        continue
                    p_t = p_h + p.sum() + k * inst.gu_circuit_power + p_ris
                    eta = np.where(feasible, rates.sum(axis=1) / p_t, -np.inf)
                    j = int(np.argmax(eta))
                    if eta[j] > best_eta:
                        best_eta = float(eta[j])
                        best = SolutionState(onoff=pat.copy(), phases=thetas[j].copy(),
                                             powers=p.copy(), uav_pos=w.copy())
    if best is None:
        raise RuntimeError("no rate-feasible point in the oracle's enumeration")
    return best_eta, best


# ---------------------------------------------------------------------------
# Output files
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".12e")


def emit_csv(result: ExperimentResult, path) -> Path:
    """Write results.csv at path and manifest.json alongside it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [RESULT_HEADER]
    for r in result.rows:
        lines.append(f"{r.scheme},{r.sweep_value},{r.seed},{_fmt(r.eta)},"
                     f"{_fmt(r.sum_rate)},{_fmt(r.total_power)},{r.outer_iters},"
                     f"{_fmt(r.wall_time)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    manifest_path = path.parent / "manifest.json"
    manifest_path.write_text(json.dumps(result.manifest, indent=2, sort_keys=True) + "\n",
                             encoding="utf-8")
    return path


def emit_traces(result: ExperimentResult, out_dir) -> list:
    """One trace_<scheme>_<value>_<seed>.csv per run, columns outer_iter,eta."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for (scheme, value, seed) in sorted(result.traces):
        trace = result.traces[(scheme, value, seed)]
        lines = ["outer_iter,eta"]
        lines.extend(f"{i},{_fmt(v)}" for i, v in enumerate(trace))
        p = out / f"trace_{scheme}_{value}_{seed}.csv"
        p.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths.append(p)
    return paths


def write_outputs(result: ExperimentResult, out_dir) -> Path:
    """results.csv, manifest.json, and all trace files under out_dir."""
    out = Path(out_dir)
    csv_path = emit_csv(result, out / "results.csv")
    emit_traces(result, out)
    return csv_path


# ---------------------------------------------------------------------------
# Spec serialization (CLI run files and manifest replay)
# ---------------------------------------------------------------------------

def spec_to_dict(spec: ExperimentSpec) -> dict:
    d = dataclasses.asdict(spec)
    for key in ("seeds", "sweep_values", "schemes"):
        d[key] = list(d[key])
    return d


def spec_from_dict(data: dict) -> ExperimentSpec:
    """Build a spec from a JSON document; accepts a manifest.json as well.

    A manifest embeds the resolved spec under "spec" and the resolved scenario
    under "scenario"; replaying one reuses the embedded scenario so the original
    file path need not exist anymore.
    """
    if not isinstance(data, dict):
        raise ValueError(f"experiment spec must be an object, got {type(data).__name__}")
    if "spec" in data and isinstance(data["spec"], dict):
        inner = dict(data["spec"])
        if inner.get("scenario_inline") is None and isinstance(data.get("scenario"), dict):
            inner["scenario_inline"] = data["scenario"]
        data = inner
    known = {f.name for f in dataclasses.fields(ExperimentSpec)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown experiment field(s): {', '.join(unknown)}")
    kwargs = dict(data)
    for key in ("seeds", "sweep_values", "schemes"):
        if key in kwargs and kwargs[key] is not None:
            kwargs[key] = tuple(kwargs[key])
    return validate_spec(ExperimentSpec(**kwargs))


def load_spec(path) -> ExperimentSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return spec_from_dict(json.load(fh))
