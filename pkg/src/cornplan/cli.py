"""Command-line interface.

Subcommands:
  generate   write a synthetic instance bundle (populations + GDU history)
  forecast   average a GDU history into daily predictions
  solve      one NSGA-II run for one model and parameter set
  strategy   the full sweep / pool / hypervolume / TOPSIS pipeline
  report     re-render CSVs and the SVG chart from an existing report.json

Exit codes: 0 success, 1 validation or input error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import json
import sys
import time
from pathlib import Path

from . import io as cio
from .errors import ConfigError, GduDataError, NoHarvestError, SchemaError, UnharvestableError
from .forecast import average_forecast
from .model import Instance, validate_instance
from .nsga2 import GaParams, run_nsga2
from .pipeline import TuningGrid, report_to_dict, run_strategy
from .synth import SyntheticConfig, generate_instance

DEFAULT_SEED = 42


def _parse_capacity_bounds(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if not 0 < lo <= hi:
        raise argparse.ArgumentTypeError(f"need 0 < lo <= hi, got {text!r}")
    return lo, hi


def _parse_date(text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an ISO date, got {text!r}") from None


def _seed_from(args) -> int:
    if args.seed is None:
        print(f"using default seed {DEFAULT_SEED}", file=sys.stderr)
        return DEFAULT_SEED
    return args.seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cornplan",
        description="Corn planting schedules that keep weekly harvest close to capacity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a synthetic instance bundle")
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.add_argument("--n-populations", type=int, default=50)
    p_gen.add_argument("--horizon-days", type=int, default=280)
    p_gen.add_argument("--horizon-start", type=_parse_date, default=dt.date(2020, 1, 1))
    p_gen.add_argument("--capacity", type=int, default=2000)
    p_gen.add_argument("--site", type=int, default=0)
    p_gen.add_argument("--scenario", type=int, choices=(1, 2), default=1,
                       help="scenario 2 omits the fixed capacity")
    p_gen.add_argument("--seed", type=int, default=None)

    p_fc = sub.add_parser("forecast", help="average a GDU history into daily predictions")
    p_fc.add_argument("--gdu-history", required=True)
    p_fc.add_argument("--site", type=int, default=None)
    p_fc.add_argument("--horizon-start", type=_parse_date, required=True)
    p_fc.add_argument("--horizon-days", type=int, required=True)
    p_fc.add_argument("--out", required=True, help="output CSV path")

    def add_instance_args(p):
        p.add_argument("--instance", help="instance bundle JSON (from `generate`)")
        p.add_argument("--populations", help="populations CSV (alternative to --instance)")
        p.add_argument("--gdu-history", help="GDU history CSV")
        p.add_argument("--forecast", help="precomputed daily forecast CSV (overrides averaging)")
        p.add_argument("--horizon-start", type=_parse_date)
        p.add_argument("--horizon-days", type=int)
        p.add_argument("--capacity", type=int)
        p.add_argument("--site", type=int, default=0)
        p.add_argument("--scenario", type=int, choices=(1, 2), default=1)
        p.add_argument("--capacity-bounds", type=_parse_capacity_bounds, default=None,
                       metavar="LO:HI", help="capacity gene bounds (scenario 2)")

    p_solve = sub.add_parser("solve", help="one NSGA-II run")
    add_instance_args(p_solve)
    p_solve.add_argument("--model", type=int, choices=(1, 2, 3), default=1)
    p_solve.add_argument("--population-size", type=int, default=64)
    p_solve.add_argument("--generations", type=int, default=200)
    p_solve.add_argument("--crossover-rate", type=float, default=0.9)
    p_solve.add_argument("--mutation-rate", type=float, default=0.05)
    p_solve.add_argument("--penalty-power", type=int, choices=(1, 2, 3), default=1)
    p_solve.add_argument("--seed", type=int, default=None)
    p_solve.add_argument("--seed-baseline", action="store_true",
                         help="inject the original planting days into the start population")
    p_solve.add_argument("--progress", action="store_true", help="per-generation log lines")
    p_solve.add_argument("--out", required=True, help="output directory")

    p_strat = sub.add_parser("strategy", help="full tuning sweep and final pick")
    add_instance_args(p_strat)
    p_strat.add_argument("--scale-factor", type=float, default=0.02,
                         help="shrinks population sizes and generation counts")
    p_strat.add_argument("--seed", type=int, default=None)
    p_strat.add_argument("--jobs", type=int, default=1)
    p_strat.add_argument("--reference", type=float, default=2.0,
                         help="per-objective hypervolume reference in scaled space")
    p_strat.add_argument("--out", required=True, help="output directory")

    p_rep = sub.add_parser("report", help="re-render outputs from report.json")
    p_rep.add_argument("--report", required=True)
    p_rep.add_argument("--out", required=True)

    return parser


def _load_problem(args) -> tuple[Instance, object, dt.date]:
    """Resolve instance + forecast from either a bundle or individual files."""
    if args.instance:
        instance, history, start = cio.load_instance_bundle(args.instance)
    else:
        if args.populations is None or (args.gdu_history is None and args.forecast is None) \
                or args.horizon_start is None or args.horizon_days is None:
            raise SchemaError(
                "need --instance, or --populations with --gdu-history/--forecast, "
                "--horizon-start and --horizon-days"
            )
        start = args.horizon_start
        populations = cio.load_populations(args.populations, start, args.horizon_days,
                                           site=args.site)
        history = (cio.load_gdu_history(args.gdu_history, site=args.site)
                   if args.gdu_history else None)
        instance = Instance(
            populations=tuple(populations),
            horizon_days=args.horizon_days,
            capacity=args.capacity,
            site=args.site,
        )
    if getattr(args, "capacity", None) is not None:
        instance = Instance(instance.populations, instance.horizon_days,
                            args.capacity, instance.site)
    if args.scenario == 2:
        instance = Instance(instance.populations, instance.horizon_days, None, instance.site)
    if getattr(args, "forecast", None):
        forecast = cio.load_forecast_csv(args.forecast, site=instance.site)
        if forecast.horizon_days < instance.horizon_days:
            raise SchemaError("forecast shorter than the instance horizon")
    else:
        if history is None:
            raise SchemaError("need --gdu-history or --forecast")
        forecast = average_forecast(history, start, instance.horizon_days)
    return instance, forecast, start


def _cmd_generate(args) -> int:
    seed = _seed_from(args)
    config = SyntheticConfig(
        n_populations=args.n_populations,
        horizon_days=args.horizon_days,
        horizon_start=args.horizon_start,
        site=args.site,
        capacity=None if args.scenario == 2 else args.capacity,
        rng_seed=seed,
    )
    instance, history = generate_instance(config)
    bundle = cio.write_instance_bundle(args.out, instance, history, args.horizon_start, seed)
    print(f"wrote {bundle} ({instance.n} populations, horizon {instance.horizon_days} days, "
          f"capacity {instance.capacity})")
    return 0


def _cmd_forecast(args) -> int:
    history = cio.load_gdu_history(args.gdu_history, site=args.site)
    forecast = average_forecast(history, args.horizon_start, args.horizon_days)
    cio.save_forecast_csv(args.out, forecast)
    print(f"wrote {args.out} ({forecast.horizon_days} days)")
    return 0


def _cmd_solve(args) -> int:
    instance, forecast, start = _load_problem(args)
    violations = validate_instance(instance, forecast)
    if violations:
        for v in violations:
            print(f"invalid instance: {v}", file=sys.stderr)
        return 1
    seed = _seed_from(args)
    params = GaParams(
        population_size=args.population_size,
        generations=args.generations,
        crossover_rate=args.crossover_rate,
        mutation_rate=args.mutation_rate,
        penalty_power=args.penalty_power,
        rng_seed=seed,
    )
    bounds = args.capacity_bounds if args.scenario == 2 else None
    if args.scenario == 2 and bounds is None:
        raise SchemaError("scenario 2 needs --capacity-bounds LO:HI")
    result = run_nsga2(instance, forecast, args.model, params,
                       capacity_bounds=bounds,
                       seed_with_original=args.seed_baseline,
                       log=sys.stderr if args.progress else None)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    front = result.first_front()
    with (out / "front.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        arity = front[0].objectives.arity
        writer.writerow(["member", *[f"objective_{i + 1}" for i in range(arity)],
                         "rank", "crowding", "capacity_hat"])
        for i, member in enumerate(front):
            writer.writerow([
                i, *[repr(v) for v in member.objectives.values],
                member.rank, repr(member.crowding),
                "" if member.schedule.capacity_hat is None else repr(member.schedule.capacity_hat),
            ])
    with (out / "schedules.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["member", "population_id", "planting_day"])
        for i, member in enumerate(front):
            for pid, day in zip((p.id for p in instance.populations), member.schedule.days):
                writer.writerow([i, pid, day])
    manifest = {
        "command": "solve",
        "model": args.model,
        "scenario": args.scenario,
        "params": {
            "population_size": params.population_size,
            "generations": params.generations,
            "crossover_rate": params.crossover_rate,
            "mutation_rate": params.mutation_rate,
            "penalty_power": params.penalty_power,
            "rng_seed": params.rng_seed,
        },
        "capacity_bounds": list(bounds) if bounds else None,
        "instance_hash": instance.fingerprint(),
        "horizon_start": start.isoformat(),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out}/front.csv ({len(front)} nondominated members)")
    return 0


def _cmd_strategy(args) -> int:
    instance, forecast, start = _load_problem(args)
    seed = _seed_from(args)
    bounds = args.capacity_bounds if args.scenario == 2 else None
    if args.scenario == 2 and bounds is None:
        raise SchemaError("scenario 2 needs --capacity-bounds LO:HI")
    grid = TuningGrid(scale_factor=args.scale_factor)
    started = time.perf_counter()
    report = run_strategy(
        instance, forecast,
        grid=grid,
        base_seed=seed,
        jobs=args.jobs,
        capacity_bounds=bounds,
        reference_value=args.reference,
    )
    elapsed = time.perf_counter() - started
    report_dict = report_to_dict(report, instance, horizon_start=start,
                                 timing_seconds=round(elapsed, 3))
    written = cio.emit_strategy_outputs(args.out, report_dict)
    hv = {o.model_id: o.hypervolume for o in report.outcomes}
    print(f"hypervolumes: " + ", ".join(f"model {k}={v:.6f}" for k, v in sorted(hv.items())))
    print(f"selected model {report.selected_model}, criteria {report.selected_values}")
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_report(args) -> int:
    try:
        report_dict = json.loads(Path(args.report).read_text())
    except json.JSONDecodeError as err:
        raise SchemaError(f"{args.report}: not valid JSON ({err})") from None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = cio.write_front_csvs(out, report_dict)
    cio.write_schedule_csv(out / "schedule_final.csv", report_dict)
    cio.write_weekly_csv(out / "weekly_harvest.csv", report_dict)
    cio.write_weekly_svg(out / "weekly_harvest.svg", report_dict)
    for path in [*written, out / "schedule_final.csv", out / "weekly_harvest.csv",
                 out / "weekly_harvest.svg"]:
        print(f"wrote {path}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "forecast": _cmd_forecast,
    "solve": _cmd_solve,
    "strategy": _cmd_strategy,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SchemaError, GduDataError, ConfigError, UnharvestableError, NoHarvestError,
            FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError) as err:
        print(f"failure: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
