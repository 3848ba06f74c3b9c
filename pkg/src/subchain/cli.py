"""Command-line entry point: ``subchain analyze|plan|simulate|reproduce``.

CSV goes to ``<out>/<command>.csv`` when an output directory is given (``--out``
or ``$SUBCHAIN_OUT_DIR``), otherwise to stdout. The human-readable summary goes
to stderr and is silenced by ``--quiet``.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .errors import (DivergedError, InfeasibleError, ScenarioParseError, ScenarioValidationError,
                     UnstableError)
from .experiments import FIGURES, Point, SimSettings, evaluate_all, reproduce
from .model import ChainConfig
from .planner import DEFAULT_L_MAX, PlanRequest, Setting, plan
from .report import CsvRow, format_csv
from .scenario import bundled_scenario_path, load_scenario

OUT_DIR_ENV = "SUBCHAIN_OUT_DIR"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE_ERROR = 3
EXIT_VALIDATION_ERROR = 4
EXIT_INFEASIBLE = 5
EXIT_UNSTABLE = 6
EXIT_DIVERGED = 7


def _say(args, msg):
    if not args.quiet:
        print(msg, file=sys.stderr)


def _emit(args, name: str, rows) -> None:
    text = format_csv(rows)
    out = args.out or os.environ.get(OUT_DIR_ENV)
    if out:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        target = path / f"{name}.csv"
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        _say(args, f"wrote {target}")
    else:
        sys.stdout.write(text)


def _scenario(args):
    sc = load_scenario(args.scenario)
    if getattr(args, "delay_sla", None) is not None:
        sc = replace(sc, sfc=sc.sfc.with_delay_sla(args.delay_sla))
    return sc


def _configs(args, scenario):
    if args.config:
        try:
            return [ChainConfig.parse(c) for c in args.config]
        except ValueError as exc:
            raise ValueError(f"--config: {exc}") from None
    if scenario.configs:
        return list(scenario.configs)
    return [ChainConfig.sc()]


def _usage_error(msg):
    print(f"subchain: error: {msg}", file=sys.stderr)
    return EXIT_USAGE


def _settings(args, scenario) -> SimSettings:
    s = SimSettings().merged(scenario.sim)
    cli = {
        "seed": args.seed,
        "replications": getattr(args, "replications", None),
        "measured_departures": getattr(args, "departures", None),
        "warmup_departures": getattr(args, "warmup", None),
        "availability_trials": getattr(args, "trials", None),
    }
    return replace(s, **{k: v for k, v in cli.items() if v is not None})


def _describe(row: CsvRow) -> str:
    resp = "unstable" if row.response_analytic is None else f"{row.response_analytic:.6g} s"
    line = (f"{row.config_label:>9}: reliability {row.reliability_analytic:.8f}, "
            f"response {resp}, resources {row.resources:g}")
    if row.response_simulated is not None:
        line += f" | sim response {row.response_simulated:.6g} +/- {row.ci_resp:.2g} s"
    if row.reliability_simulated is not None:
        line += f" | sim reliability {row.reliability_simulated:.6f} +/- {row.ci_rel:.2g}"
    return line


def cmd_analyze(args) -> int:
    sc = _scenario(args)
    rows = evaluate_all([Point(sc.name, sc.sfc, c) for c in _configs(args, sc)], SimSettings())
    for row in rows:
        _say(args, _describe(row))
    _emit(args, "analyze", rows)
    unstable = [r for r in rows if r.response_analytic is None]
    if unstable:
        bottleneck = sc.sfc.bottleneck()
        print(f"subchain: unstable chain: arrival rate {sc.sfc.arrival_rate} reaches the service rate "
              f"of VNF {bottleneck}", file=sys.stderr)
        return EXIT_UNSTABLE
    return EXIT_OK


def cmd_plan(args) -> int:
    sc = _scenario(args)
    settings = [Setting.MM1, Setting.MMM] if args.setting == "both" else [Setting.parse(args.setting)]
    rows = []
    for setting in settings:
        res = plan(PlanRequest(sc.sfc, setting, args.l_max))
        if res.diagnostic:
            _say(args, f"warning: {res.diagnostic}")
        cfg = ChainConfig.subchain_mm1(res.l) if setting is Setting.MM1 else ChainConfig.mmm(res.l)
        _say(args, f"{setting.value}: l = {res.l}, predicted response {res.predicted_response:.6g} s "
                   f"(SLA {sc.sfc.delay_sla:g} s), reliability {res.predicted_reliability:.8f}")
        rows.extend(evaluate_all([Point(sc.name, sc.sfc, cfg)], SimSettings()))
    _emit(args, "plan", rows)
    return EXIT_OK


def cmd_simulate(args) -> int:
    sc = _scenario(args)
    settings = _settings(args, sc)
    points = [Point(sc.name, sc.sfc, c, queue=True, availability=True) for c in _configs(args, sc)]
    rows = evaluate_all(points, settings, args.jobs)
    for row in rows:
        _say(args, _describe(row))
    _emit(args, "simulate", rows)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    sc = _scenario(args)
    settings = _settings(args, sc)
    figures = FIGURES if args.figure == "all" else [args.figure]
    for fig in figures:
        rows = reproduce(fig, sc, settings, simulate=not args.skip_sim, jobs=args.jobs)
        _say(args, f"figure {fig}: {len(rows)} rows")
        _emit(args, f"fig{fig}", rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", default=str(bundled_scenario_path()),
                        help="scenario file (default: bundled table1.scenario)")
    common.add_argument("--out", help=f"output directory for CSV files (default: ${OUT_DIR_ENV}, else stdout)")
    common.add_argument("--quiet", action="store_true", help="suppress the human-readable summary")
    common.add_argument("--seed", type=_u64, help="simulation seed (overrides the scenario)")
    common.add_argument("-v", "--verbose", action="store_true")

    sla = argparse.ArgumentParser(add_help=False)
    sla.add_argument("--delay-sla", type=_positive_float, help="override the scenario's delay SLA (seconds)")

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--replications", type=_positive_int)
    sim.add_argument("--departures", type=_positive_int, help="measured departures per replication")
    sim.add_argument("--warmup", type=_nonnegative_int, help="warmup departures per replication")
    sim.add_argument("--trials", type=_positive_int, help="Monte Carlo availability trials")
    sim.add_argument("--jobs", type=_positive_int, default=1, help="worker processes for sweep points")

    p = argparse.ArgumentParser(prog="subchain", description="Plan and validate subchained service chains.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common, sla], help="closed-form metrics for deployments")
    a.add_argument("--config", action="append", help="SC, SCB(b), MM1(l) or MMm(l); repeatable")
    a.set_defaults(func=cmd_analyze)

    pl = sub.add_parser("plan", parents=[common, sla], help="largest subchain count meeting the delay SLA")
    pl.add_argument("--setting", choices=["mm1", "mmm", "both"], default="both")
    pl.add_argument("--l-max", type=_positive_int, default=DEFAULT_L_MAX)
    pl.set_defaults(func=cmd_plan)

    s = sub.add_parser("simulate", parents=[common, sla, sim], help="discrete-event and Monte Carlo validation")
    s.add_argument("--config", action="append", help="SC, SCB(b), MM1(l) or MMm(l); repeatable")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("reproduce", parents=[common, sla, sim], help="regenerate a figure's data as CSV")
    r.add_argument("--figure", choices=list(FIGURES) + ["all"], required=True)
    r.add_argument("--skip-sim", action="store_true", help="analytic columns only")
    r.set_defaults(func=cmd_reproduce)
    return p


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonnegative_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _u64(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ScenarioParseError as exc:
        print(f"subchain: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except ScenarioValidationError as exc:
        print(f"subchain: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION_ERROR
    except InfeasibleError as exc:
        print(f"subchain: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except UnstableError as exc:
        print(f"subchain: unstable: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except DivergedError as exc:
        print(f"subchain: diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except ValueError as exc:
        return _usage_error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
