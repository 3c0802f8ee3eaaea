"""One full solver run against both baselines on a shared instance.

The solver cycles three blocks until the efficiency stops improving: a
continuous genetic pass over phases and powers, a binary genetic pass over the
on-off pattern, and an Adam pass over the UAV position. Each block starts from
the incumbent, so the trace only ever climbs. The baselines reuse the same
users, the same scattering, and the same seeds; the only difference is what
they are allowed to touch.
"""

import numpy as np

from risuav.bcd import (BcdConfig, baseline_no_ris, baseline_random_phase,
                        initial_solution, optimize)
from risuav.harness import build_instance
from risuav.objective import energy_efficiency, total_power
from risuav.scenario import default_scenario

SEED = 7
scn, scatter, digest = build_instance(default_scenario(), 4, 60, SEED)
cfg = BcdConfig()
print(f"instance {digest}: {scn.num_gus} users, {scn.num_elements} elements, "
      f"seed {SEED}")

res = optimize(scn, scatter, initial_solution(scn, cfg.power_floor), cfg, SEED)
print("\nfull solver, efficiency after each outer pass")
for i, eta in enumerate(res.eta_trace):
    tag = "start" if i == 0 else f"pass {i}"
    print(f"  {tag:7s} {eta:.4e}")
print(f"  stopped after {res.outer_iters_used} passes in {res.wall_time:.1f} s "
      f"(relative gain per pass fell below {cfg.delta})")

runs = {
    "full solver": res,
    "random phases": baseline_random_phase(scn, scatter, cfg, SEED),
    "no surface": baseline_no_ris(scn, scatter, cfg, SEED),
}

print("\nscheme comparison on the identical instance")
for name, r in runs.items():
    eta = energy_efficiency(r.best, scatter, scn)
    print(f"  {name:14s} eta {eta:.4e} bits/J   "
          f"power {total_power(r.best, scn):6.3f} W   "
          f"elements on {int(r.best.onoff.sum()):2d}   "
          f"UAV ({r.best.uav_pos[0]:6.2f}, {r.best.uav_pos[1]:6.2f})")

print("\nthe random-phase surface still beats no surface because even incoherent")
print("reflections add energy, and the solver beats both by aligning them; on")
print("single seeds the margins wobble, which is why the shipped experiments")
print("average over paired seeds")
