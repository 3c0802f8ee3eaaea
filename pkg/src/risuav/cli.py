"""Command-line front-end.

Subcommands:
  run             execute an experiment described by a JSON spec (or a manifest)
  sweep-gus       efficiency versus GU count at fixed element count
  sweep-elements  efficiency versus element count at fixed GU count
  oracle          brute-force discretized optimum for a tiny instance

Shared flags (given after the subcommand): --scenario, --seed, --out, --workers,
--delta, --max-outer. --seed is the first of --seeds consecutive master seeds.
"""

from __future__ import annotations

import argparse
import sys

from . import harness
from ._version import __version__


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", metavar="PATH", default=None,
                        help="scenario JSON file (defaults built in)")
    parser.add_argument("--seed", type=int, default=0, help="first master seed")
    parser.add_argument("--out", metavar="DIR", default="results",
                        help="output directory")
    parser.add_argument("--workers", type=int, default=1,
                        help="parallel worker processes")
    parser.add_argument("--delta", type=float, default=1.0e-3,
                        help="outer-loop relative improvement threshold")
    parser.add_argument("--max-outer", type=int, default=20,
                        help="outer iteration cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risuav",
        description="Energy-efficiency optimizer for a RIS-assisted UAV downlink")
    parser.add_argument("--version", action="version", version=f"risuav {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment from a JSON spec or manifest")
    p.add_argument("--spec", required=True, metavar="FILE")
    _common_flags(p)

    p = sub.add_parser("sweep-gus", help="sweep the number of GUs")
    p.add_argument("--m", type=int, default=60, help="RIS element count")
    p.add_argument("--k", type=_int_list, default=(2, 4, 6, 8),
                   help="comma-separated GU counts")
    p.add_argument("--seeds", type=int, default=5, help="number of master seeds")
    _common_flags(p)

    p = sub.add_parser("sweep-elements", help="sweep the RIS element count")
    p.add_argument("--k", type=int, default=4, help="GU count")
    p.add_argument("--m", type=_int_list, default=(20, 40, 60, 80),
                   help="comma-separated element counts")
    p.add_argument("--seeds", type=int, default=5, help="number of master seeds")
    _common_flags(p)

    p = sub.add_parser("oracle", help="brute-force a tiny discretized instance")
    p.add_argument("--m", type=int, default=4, help="RIS element count (<= 4)")
    p.add_argument("--k", type=int, default=1, help="GU count (<= 2)")
    p.add_argument("--theta-grid", type=int, default=8, help="phase levels per element")
    p.add_argument("--placement-grid", type=int, default=5,
                   help="UAV grid points per axis")
    _common_flags(p)

    return parser


def spec_from_args(args: argparse.Namespace) -> harness.ExperimentSpec:
    if args.command == "run":
        spec = harness.load_spec(args.spec)
        overrides = {}
        if args.scenario is not None:
            overrides["scenario_path"] = args.scenario
            overrides["scenario_inline"] = None
        if args.out != "results":
            overrides["output_path"] = args.out
        if overrides:
            spec = harness.validate_spec(
                harness.ExperimentSpec(**{**harness.spec_to_dict(spec), **overrides,
                                          "seeds": tuple(spec.seeds),
                                          "sweep_values": tuple(spec.sweep_values),
                                          "schemes": tuple(spec.schemes)}))
        return spec

    common = dict(scenario_path=args.scenario, output_path=args.out,
                  workers=args.workers, delta=args.delta,
                  max_outer_iters=args.max_outer)
    if args.command == "sweep-gus":
        seeds = tuple(range(args.seed, args.seed + args.seeds))
        return harness.validate_spec(harness.ExperimentSpec(
            kind="sweep-gus", seeds=seeds, sweep_values=tuple(args.k),
            fixed_elements=args.m, **common))
    if args.command == "sweep-elements":
        seeds = tuple(range(args.seed, args.seed + args.seeds))
        return harness.validate_spec(harness.ExperimentSpec(
            kind="sweep-elements", seeds=seeds, sweep_values=tuple(args.m),
            fixed_gus=args.k, **common))
    # oracle
    return harness.validate_spec(harness.ExperimentSpec(
        kind="oracle", seeds=(args.seed,), sweep_values=(args.m,),
        fixed_gus=args.k, theta_grid=args.theta_grid,
        placement_grid=args.placement_grid, **common))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = spec_from_args(args)
    result = harness.run_experiment(spec)
    out_dir = args.out if args.out != "results" else spec.output_path
    csv_path = harness.write_outputs(result, out_dir)

    print(f"wrote {csv_path} ({len(result.rows)} rows)")
    for row in result.rows:
        print(f"  {row.scheme} value={row.sweep_value} seed={row.seed} "
              f"eta={row.eta:.6e} bits/J iters={row.outer_iters} "
              f"time={row.wall_time:.2f}s")
    errors = result.manifest.get("errors", {})
    for key, msg in errors.items():
        print(f"  FAILED {key}: {msg}", file=sys.stderr)
    return 1 if errors else 0


if __name__ == "__main__":
    raise SystemExit(main())
