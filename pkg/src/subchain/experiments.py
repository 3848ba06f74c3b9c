"""Evaluation points and the figure sweeps built from them."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

from .model import ChainConfig, SfcSpec
from .planner import PlanRequest, Setting, plan
from .report import CsvRow, analytic_row, with_simulation
from .scenario import Scenario, SimOverrides
from .sim.availability import estimate_availability
from .sim.engine import SimConfig, run_simulation
from .sim.topology import build_topology

FIGURES = ("5a", "5b", "5c", "5d", "5e", "5f")
DEFAULT_VNF_COUNTS = range(2, 11)


@dataclass(frozen=True)
class SimSettings:
    warmup_departures: int = 10_000
    measured_departures: int = 100_000
    replications: int = 10
    seed: int = 0
    availability_trials: int = 1_000_000

    def merged(self, overrides: SimOverrides) -> "SimSettings":
        given = {k: v for k, v in vars(overrides).items() if v is not None}
        return replace(self, **given)


@dataclass(frozen=True)
class Point:
    scenario: str
    sfc: SfcSpec
    config: ChainConfig
    x: Optional[int] = None
    queue: bool = False
    availability: bool = False


def evaluate(point: Point, settings: SimSettings, workers: Optional[int] = None) -> CsvRow:
    row = analytic_row(point.scenario, point.sfc, point.config, point.x)
    if not (point.queue or point.availability):
        return row
    sim = avail = None
    if point.queue:
        cfg = SimConfig(build_topology(point.sfc, point.config), point.sfc.arrival_rate,
                        settings.warmup_departures, settings.measured_departures,
                        settings.replications, settings.seed)
        sim = run_simulation(cfg, workers=workers)
    if point.availability:
        avail = estimate_availability(point.sfc, point.config, settings.availability_trials, settings.seed)
    return with_simulation(row, sim, avail, settings.seed)


def _evaluate_job(args):
    return evaluate(*args)


def evaluate_all(points, settings: SimSettings, jobs: int = 1) -> list:
    """Evaluate sweep points, possibly in parallel; output keeps input order."""
    args = [(p, settings) for p in points]
    if jobs > 1 and sum(p.queue or p.availability for p in points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_evaluate_job, args))
    return [_evaluate_job(a) for a in args]


def planned_l(sfc: SfcSpec, setting: Setting) -> int:
    return plan(PlanRequest(sfc, setting)).l


def _l_values(scenario: Scenario, top: int) -> list:
    sweep = scenario.sweep("l")
    return sweep.values if sweep else list(range(1, top + 1))


def _vnf_counts(scenario: Scenario) -> list:
    sweep = scenario.sweep("vnf_count")
    return sweep.values if sweep else list(DEFAULT_VNF_COUNTS)


def _redundancy_points(scenario: Scenario, simulate: bool) -> list:
    sfc = scenario.sfc
    ls = _l_values(scenario, planned_l(sfc, Setting.MMM) + 2)
    b_sweep = scenario.sweep("b")
    bs = b_sweep.values if b_sweep else [l - 1 for l in ls if l >= 2]
    pts = [Point(scenario.name, sfc, ChainConfig.sc(), x=l, availability=simulate) for l in ls]
    pts += [Point(scenario.name, sfc, ChainConfig.scb(b), availability=simulate) for b in bs]
    pts += [Point(scenario.name, sfc, ChainConfig.subchain_mm1(l), availability=simulate) for l in ls]
    pts += [Point(scenario.name, sfc, ChainConfig.mmm(l), availability=simulate) for l in ls]
    return pts


def figure_points(figure: str, scenario: Scenario, simulate: bool = True) -> list:
    """Sweep points behind one figure.

    5a  reliability vs l for SC, SCB, MM1 and MMm (SCB indexed by b)
    5b  resources over the same points
    5c  planned l vs chain length, both settings
    5d  mean response vs l, MM1 against MMm
    5e  response vs l up to two past each setting's planned l, plus SC and SCB(1)
    5f  reliability vs chain length at the planned l
    """
    sfc, name = scenario.sfc, scenario.name
    if figure == "5a":
        return _redundancy_points(scenario, simulate)
    if figure == "5b":
        return _redundancy_points(scenario, False)
    if figure == "5c":
        pts = []
        for n in _vnf_counts(scenario):
            chain = sfc.with_length(n)
            pts.append(Point(name, chain, ChainConfig.subchain_mm1(planned_l(chain, Setting.MM1))))
            pts.append(Point(name, chain, ChainConfig.mmm(planned_l(chain, Setting.MMM))))
        return pts
    if figure == "5d":
        top = max(planned_l(sfc, Setting.MM1), planned_l(sfc, Setting.MMM)) + 2
        ls = _l_values(scenario, top)
        pts = [Point(name, sfc, ChainConfig.subchain_mm1(l), queue=simulate) for l in ls]
        pts += [Point(name, sfc, ChainConfig.mmm(l), queue=simulate) for l in ls]
        return pts
    if figure == "5e":
        pts = [Point(name, sfc, ChainConfig.sc(), queue=simulate),
               Point(name, sfc, ChainConfig.scb(1), queue=simulate)]
        for l in range(1, planned_l(sfc, Setting.MM1) + 3):
            pts.append(Point(name, sfc, ChainConfig.subchain_mm1(l), queue=simulate))
        for l in range(1, planned_l(sfc, Setting.MMM) + 3):
            pts.append(Point(name, sfc, ChainConfig.mmm(l), queue=simulate))
        return pts
    if figure == "5f":
        pts = []
        for n in _vnf_counts(scenario):
            chain = sfc.with_length(n)
            for cfg in (ChainConfig.sc(), ChainConfig.scb(1),
                        ChainConfig.subchain_mm1(planned_l(chain, Setting.MM1)),
                        ChainConfig.mmm(planned_l(chain, Setting.MMM))):
                pts.append(Point(name, chain, cfg, availability=simulate))
        return pts
    raise ValueError(f"unknown figure {figure!r}; expected one of {', '.join(FIGURES)}")


def reproduce(figure: str, scenario: Scenario, settings: SimSettings, simulate: bool = True,
              jobs: int = 1) -> list:
    return evaluate_all(figure_points(figure, scenario, simulate), settings, jobs)
