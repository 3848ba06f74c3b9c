"""Scenario files: a chain, the deployments to evaluate, simulation settings, sweeps.

Scenarios are YAML documents with an explicit ``schema_version``::

    schema_version: 1
    name: table1
    sfc:
      arrival_rate: 100      # packets/s
      delay_sla: 0.125       # seconds
      vnfs:
        - {name: fw, service_rate: 200, reliability: 0.9, resource_weight: 1}
    configs: [SC, SCB(1), MM1(3), MMm(6)]
    sim:                     # optional, every key optional
      warmup_departures: 10000
      measured_departures: 100000
      replications: 10
      seed: 1
      availability_trials: 1000000
    sweeps:                  # optional
      - {variable: l, start: 1, stop: 8, step: 1}

Errors carry the line of the offending value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import yaml

from .errors import ScenarioParseError, ScenarioValidationError
from .model import ChainConfig, SfcSpec, VnfSpec

SCHEMA_VERSION = 1
SWEEP_VARIABLES = ("l", "b", "vnf_count")

_TOP_KEYS = {"schema_version", "name", "sfc", "configs", "sim", "sweeps"}
_SFC_KEYS = {"arrival_rate", "delay_sla", "vnfs"}
_VNF_KEYS = {"name", "service_rate", "reliability", "resource_weight"}
_SIM_KEYS = {"warmup_departures", "measured_departures", "replications", "seed", "availability_trials"}
_SWEEP_KEYS = {"variable", "start", "stop", "step"}


@dataclass(frozen=True)
class SimOverrides:
    warmup_departures: Optional[int] = None
    measured_departures: Optional[int] = None
    replications: Optional[int] = None
    seed: Optional[int] = None
    availability_trials: Optional[int] = None


@dataclass(frozen=True)
class Sweep:
    variable: str
    start: int
    stop: int
    step: int = 1

    @property
    def values(self) -> list:
        return list(range(self.start, self.stop + 1, self.step))


@dataclass(frozen=True)
class Scenario:
    name: str
    sfc: SfcSpec
    configs: tuple = ()
    sim: SimOverrides = field(default_factory=SimOverrides)
    sweeps: tuple = ()

    def sweep(self, variable: str) -> Optional[Sweep]:
        for s in self.sweeps:
            if s.variable == variable:
                return s
        return None


class _Reader:
    """Pairs the plain loaded data with the node tree for line lookups."""

    def __init__(self, path, root_node):
        self.path = path
        self.root = root_node

    def line(self, keys) -> Optional[int]:
        node = self.root
        for key in keys:
            if isinstance(node, yaml.MappingNode):
                nxt = None
                for k, v in node.value:
                    if k.value == key:
                        nxt = v
                        break
                if nxt is None:
                    break
                node = nxt
            elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
                node = node.value[key]
            else:
                break
        return node.start_mark.line + 1 if node is not None else None

    def fail(self, keys, message):
        dotted = _dotted(keys)
        raise ScenarioValidationError(f"{dotted}: {message}" if dotted else message, self.path, self.line(keys))


def _dotted(keys) -> str:
    out = ""
    for k in keys:
        out += f"[{k}]" if isinstance(k, int) else (f".{k}" if out else str(k))
    return out


def _mapping(r: _Reader, value, keys, allowed, required=()):
    if not isinstance(value, dict):
        r.fail(keys, "expected a mapping")
    for k in value:
        if k not in allowed:
            r.fail(list(keys) + [k], f"unknown key (allowed: {', '.join(sorted(allowed))})")
    for k in required:
        if k not in value:
            r.fail(keys, f"missing required key '{k}'")
    return value


def _number(r: _Reader, value, keys) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        r.fail(keys, f"expected a finite number, got {value!r}")
    return float(value)


def _positive(r, value, keys) -> float:
    x = _number(r, value, keys)
    if not x > 0:
        r.fail(keys, f"must be > 0, got {value!r}")
    return x


def _integer(r, value, keys, minimum) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        r.fail(keys, f"expected an integer, got {value!r}")
    if value < minimum:
        r.fail(keys, f"must be >= {minimum}, got {value}")
    return value


def _vnf(r, value, keys) -> VnfSpec:
    d = _mapping(r, value, keys, _VNF_KEYS, ("service_rate", "reliability"))
    rate = _positive(r, d["service_rate"], keys + ["service_rate"])
    p = _number(r, d["reliability"], keys + ["reliability"])
    if not 0 < p <= 1:
        r.fail(keys + ["reliability"], f"must lie in (0, 1], got {d['reliability']!r}")
    weight = _positive(r, d.get("resource_weight", 1.0), keys + ["resource_weight"])
    name = d.get("name", "")
    return VnfSpec(rate, p, weight, str(name))


def _sfc(r, value, keys) -> SfcSpec:
    d = _mapping(r, value, keys, _SFC_KEYS, ("arrival_rate", "delay_sla", "vnfs"))
    lam = _positive(r, d["arrival_rate"], keys + ["arrival_rate"])
    sla = _positive(r, d["delay_sla"], keys + ["delay_sla"])
    raw = d["vnfs"]
    if raw is None or raw == []:
        r.fail(keys + ["vnfs"], "vnfs must be non-empty")
    if not isinstance(raw, list):
        r.fail(keys + ["vnfs"], "expected a list of VNFs")
    vnfs = [_vnf(r, v, keys + ["vnfs", i]) for i, v in enumerate(raw)]
    return SfcSpec(tuple(vnfs), lam, sla)


def _sim(r, value, keys) -> SimOverrides:
    if value is None:
        return SimOverrides()
    d = _mapping(r, value, keys, _SIM_KEYS)
    minimum = {"warmup_departures": 0, "measured_departures": 1000, "replications": 1,
               "seed": 0, "availability_trials": 10_000}
    kwargs = {k: _integer(r, v, keys + [k], minimum[k]) for k, v in d.items()}
    if kwargs.get("seed", 0) >= 2**64:
        r.fail(keys + ["seed"], "seed must fit in 64 bits")
    return SimOverrides(**kwargs)


def _sweeps(r, value, keys) -> tuple:
    if value is None:
        return ()
    if not isinstance(value, list):
        r.fail(keys, "expected a list of sweeps")
    out = []
    for i, raw in enumerate(value):
        k = keys + [i]
        d = _mapping(r, raw, k, _SWEEP_KEYS, ("variable", "start", "stop"))
        if d["variable"] not in SWEEP_VARIABLES:
            r.fail(k + ["variable"], f"must be one of {', '.join(SWEEP_VARIABLES)}")
        start = _integer(r, d["start"], k + ["start"], 1)
        stop = _integer(r, d["stop"], k + ["stop"], 1)
        step = _integer(r, d.get("step", 1), k + ["step"], 1)
        if stop < start:
            r.fail(k + ["stop"], f"range must be ascending and non-empty (start {start}, stop {stop})")
        out.append(Sweep(d["variable"], start, stop, step))
    return tuple(out)


def parse_scenario(text: str, path=None) -> Scenario:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(exc, "problem", None) or str(exc)
        raise ScenarioParseError(f"malformed scenario: {problem}", path, line) from exc

    r = _Reader(path, root)
    if data is None:
        raise ScenarioParseError("empty scenario file", path, None)
    if not isinstance(data, dict):
        raise ScenarioParseError("a scenario must be a mapping at top level", path, 1)
    d = _mapping(r, data, [], _TOP_KEYS, ("schema_version", "sfc"))
    version = d["schema_version"]
    if version != SCHEMA_VERSION:
        r.fail(["schema_version"], f"unsupported schema version {version!r} (expected {SCHEMA_VERSION})")

    name = str(d.get("name") or (Path(path).stem if path else "scenario"))
    sfc = _sfc(r, d["sfc"], ["sfc"])

    labels = d.get("configs") or []
    if not isinstance(labels, list):
        r.fail(["configs"], "expected a list of config labels")
    configs = []
    for i, label in enumerate(labels):
        try:
            configs.append(ChainConfig.parse(str(label)))
        except ValueError as exc:
            r.fail(["configs", i], str(exc))

    return Scenario(name, sfc, tuple(configs), _sim(r, d.get("sim"), ["sim"]), _sweeps(r, d.get("sweeps"), ["sweeps"]))


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioParseError(f"cannot read scenario: {exc.strerror}", path) from exc
    except UnicodeDecodeError as exc:
        raise ScenarioParseError("scenario is not valid UTF-8", path) from exc
    return parse_scenario(text, path)


def bundled_scenario_path(name: str = "table1") -> Path:
    return Path(str(resources.files("subchain") / "data" / f"{name}.scenario"))


def load_bundled(name: str = "table1") -> Scenario:
    return load_scenario(bundled_scenario_path(name))
