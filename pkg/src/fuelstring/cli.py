"""Command-line entry points.

    fuelstring plan      --scenario S.json [--plan-out P.json]
    fuelstring simulate  --scenario S.json [--plan P.json] [--seed K]
                         [--dt D] [--trace-out T.jsonl] [--metrics-out M.txt]
    fuelstring generate  --n N --seed K [--out S.json] [--cost SPEC]
    fuelstring validate  --scenario S.json [--plan P.json]
    fuelstring batch     [--sweep-targets 10,50,100] [--sweep-fuel 50,200,500]
                         [--sweep-ratio 0.2,0.5,1.0] [--seeds 1,2,3] [--out R.csv]
"""
from __future__ import annotations

import argparse
import sys

from .batch import SweepConfig, batch_run, results_to_csv
from .model import World
from .offline import PlanningError, plan_mission, validate_plan
from .scenario_io import (
    CostModel,
    ScenarioFormatError,
    emit_plan,
    emit_scenario,
    generate_scenario,
    parse_plan,
    parse_scenario,
)
from .sim import InvariantViolation, SimConfig, metrics_to_text, run


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_cost_spec(spec: str) -> CostModel:
    """uniform:LO,HI or lognormal:MU,SIGMA or explicit."""
    if spec == "explicit":
        return CostModel(kind="explicit")
    kind, _, rest = spec.partition(":")
    parts = rest.split(",") if rest else []
    if kind == "uniform" and len(parts) == 2:
        return CostModel(kind="uniform", low=float(parts[0]), high=float(parts[1]))
    if kind == "lognormal" and len(parts) == 2:
        return CostModel(kind="lognormal", mu=float(parts[0]), sigma=float(parts[1]))
    raise argparse.ArgumentTypeError(
        f"bad cost spec {spec!r}; expected uniform:LO,HI | lognormal:MU,SIGMA | explicit")


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.split(","))


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split(","))


def cmd_plan(args) -> int:
    scenario = parse_scenario(_read(args.scenario))
    plan = plan_mission(scenario)
    _write(args.plan_out, emit_plan(plan))
    return 0


def cmd_simulate(args) -> int:
    scenario = parse_scenario(_read(args.scenario), seed_override=args.seed)
    plan = parse_plan(_read(args.plan)) if args.plan else None
    cfg = SimConfig(dt=args.dt, keep_trace=False)
    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8") as fh:
            report = run(scenario, cfg, plan=plan, trace_file=fh)
    else:
        report = run(scenario, cfg, plan=plan)
    out = metrics_to_text(report.metrics) + f"status = {report.status!r}\n"
    if report.unprocessed:
        out += f"unprocessed = {report.unprocessed!r}\n"
    _write(args.metrics_out, out)
    return 0 if report.completed else 3


def cmd_generate(args) -> int:
    cost = args.cost if args.cost is not None else CostModel(
        kind="uniform", low=0.0, high=20.0, seed=args.seed)
    if cost.kind != "explicit" and cost.seed == 0:
        cost = CostModel(kind=cost.kind, low=cost.low, high=cost.high,
                         mu=cost.mu, sigma=cost.sigma, seed=args.seed)
    scenario = generate_scenario(
        args.n, seed=args.seed,
        world=World(width=args.world[0], height=args.world[1]),
        cost_model=cost)
    _write(args.out, emit_scenario(scenario))
    return 0


def cmd_validate(args) -> int:
    scenario = parse_scenario(_read(args.scenario))
    plan = parse_plan(_read(args.plan)) if args.plan else plan_mission(scenario)
    report = validate_plan(plan, scenario)
    print(report.describe())
    return 0 if report.ok else 2


def cmd_batch(args) -> int:
    sweep = SweepConfig(
        target_counts=args.sweep_targets,
        fuel_capacities=args.sweep_fuel,
        speed_ratios=args.sweep_ratio,
        seeds=args.seeds,
        dt=args.dt,
    )
    results = batch_run(sweep)
    _write(args.out, results_to_csv(results))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuelstring",
        description="Plan and simulate UAV survey missions with a mobile ground refueler.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="build a mission plan for a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--plan-out", default=None, help="output path (default stdout)")
    p.set_defaults(fn=cmd_plan)

    p = sub.add_parser("simulate", help="fly a scenario and report metrics")
    p.add_argument("--scenario", required=True)
    p.add_argument("--plan", default=None, help="use a stored plan instead of planning")
    p.add_argument("--seed", type=int, default=None,
                   help="override the scenario's cost-model seed")
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--trace-out", default=None, help="write the JSONL trace here")
    p.add_argument("--metrics-out", default=None, help="metrics path (default stdout)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("generate", help="generate a random scenario")
    p.add_argument("--n", type=int, required=True, help="number of targets")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--world", type=_floats, default=(50.0, 50.0),
                   metavar="W,H", help="world bounds (default 50,50)")
    p.add_argument("--cost", type=_parse_cost_spec, default=None,
                   metavar="SPEC", help="uniform:LO,HI | lognormal:MU,SIGMA")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("validate", help="audit a plan against its scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--plan", default=None, help="plan to audit (default: plan now)")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("batch", help="sweep a parameter grid into a CSV")
    p.add_argument("--sweep-targets", type=_ints, default=(10, 50, 100))
    p.add_argument("--sweep-fuel", type=_floats, default=(50.0, 200.0, 500.0))
    p.add_argument("--sweep-ratio", type=_floats, default=(0.2, 0.5, 1.0))
    p.add_argument("--seeds", type=_ints, default=(1,))
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(fn=cmd_batch)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ScenarioFormatError, PlanningError, InvariantViolation, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
