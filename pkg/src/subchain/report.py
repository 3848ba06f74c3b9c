"""CSV rows: the one output format of the command-line tools.

Column order is fixed. Analytic columns are always filled; simulated columns
stay empty when a simulation was skipped. Floats are written with ``repr`` so
a fixed seed gives byte-identical files.
"""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields, replace
from typing import Iterable, Optional

from .model import AnalysisReport, ChainConfig, ConfigKind, SfcSpec, analyze


@dataclass(frozen=True)
class CsvRow:
    scenario: str
    config_label: str
    l_or_b: int  # b for SCB, l for MM1/MMm, sweep position for SC
    reliability_analytic: float
    reliability_simulated: Optional[float]
    ci_rel: Optional[float]
    response_analytic: Optional[float]  # empty only when the chain is unstable
    response_simulated: Optional[float]
    ci_resp: Optional[float]
    resources: float
    seed: Optional[int]
    vnf_count: int
    delay_sla: float


COLUMNS = tuple(f.name for f in fields(CsvRow))


def analytic_row(scenario: str, sfc: SfcSpec, config: ChainConfig, x: Optional[int] = None,
                 seed: Optional[int] = None) -> CsvRow:
    rep: AnalysisReport = analyze(sfc, config)
    x = (x or 1) if config.kind is ConfigKind.SC else config.count
    return CsvRow(scenario, config.label, x, rep.reliability, None, None, rep.expected_response_time,
                  None, None, rep.total_resources, seed, len(sfc.vnfs), sfc.delay_sla)


def with_simulation(row: CsvRow, sim=None, availability=None, seed=None) -> CsvRow:
    changes = {}
    if sim is not None:
        changes.update(response_simulated=sim.mean_response, ci_resp=sim.ci95_halfwidth)
    if availability is not None:
        changes.update(reliability_simulated=availability.estimate, ci_rel=availability.ci95_halfwidth)
    if seed is not None:
        changes["seed"] = seed
    return replace(row, **changes)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_csv(rows: Iterable[CsvRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow([_cell(v) for v in astuple(row)])
    return buf.getvalue()


def _parse_cell(name: str, text: str):
    if text == "":
        return None
    if name in ("scenario", "config_label"):
        return text
    if name in ("l_or_b", "seed", "vnf_count"):
        return int(text)
    return float(text)


def read_csv(text: str) -> list:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ValueError(f"unexpected CSV header: {header}")
    return [CsvRow(*(_parse_cell(n, c) for n, c in zip(COLUMNS, rec))) for rec in reader]
