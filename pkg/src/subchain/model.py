"""Service chain domain types and closed-form reliability / resource formulas.

Four deployment shapes are modelled:

* ``SC``   - one plain chain.
* ``SCB``  - every VNF has ``b`` dedicated cold-standby backups.
* ``MM1``  - the chain is split into ``l`` parallel subchains, each VNF running
  at ``mu / l`` with its own queue.
* ``MMm``  - every VNF is split into ``l`` smaller instances that share one
  scheduler (an M/M/l station).

Reliability is a static availability probability. Instance failures are
independent; common-mode failures across replicas of one VNF are not modelled,
and virtual links are treated as perfectly reliable.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Optional

from .errors import UnstableError


@dataclass(frozen=True)
class VnfSpec:
    """One VNF: service rate (packets/s), availability, and resource weight (cores)."""

    service_rate: float
    reliability: float
    resource_weight: float = 1.0
    name: str = ""

    def __post_init__(self):
        if not (self.service_rate > 0 and math.isfinite(self.service_rate)):
            raise ValueError(f"service_rate must be a positive finite number, got {self.service_rate!r}")
        if not (0 < self.reliability <= 1):
            raise ValueError(f"reliability must lie in (0, 1], got {self.reliability!r}")
        if not (self.resource_weight > 0 and math.isfinite(self.resource_weight)):
            raise ValueError(f"resource_weight must be a positive finite number, got {self.resource_weight!r}")


@dataclass(frozen=True)
class SfcSpec:
    """An ordered VNF chain with its Poisson arrival rate and delay SLA (seconds)."""

    vnfs: tuple
    arrival_rate: float
    delay_sla: float

    def __post_init__(self):
        object.__setattr__(self, "vnfs", tuple(self.vnfs))
        if not self.vnfs:
            raise ValueError("vnfs must be non-empty")
        for v in self.vnfs:
            if not isinstance(v, VnfSpec):
                raise TypeError(f"vnfs must contain VnfSpec items, got {type(v).__name__}")
        if not (self.arrival_rate > 0 and math.isfinite(self.arrival_rate)):
            raise ValueError(f"arrival_rate must be a positive finite number, got {self.arrival_rate!r}")
        if not self.delay_sla > 0:
            raise ValueError(f"delay_sla must be positive, got {self.delay_sla!r}")

    @classmethod
    def homogeneous(cls, n: int, service_rate: float, reliability: float,
                    arrival_rate: float, delay_sla: float, resource_weight: float = 1.0) -> "SfcSpec":
        vnf = VnfSpec(service_rate, reliability, resource_weight)
        return cls((vnf,) * n, arrival_rate, delay_sla)

    def with_delay_sla(self, delay_sla: float) -> "SfcSpec":
        return SfcSpec(self.vnfs, self.arrival_rate, delay_sla)

    def with_length(self, n: int) -> "SfcSpec":
        """Chain of ``n`` VNFs built by cycling through this chain's VNF list."""
        if n < 1:
            raise ValueError("chain length must be >= 1")
        vnfs = tuple(self.vnfs[i % len(self.vnfs)] for i in range(n))
        return SfcSpec(vnfs, self.arrival_rate, self.delay_sla)

    def bottleneck(self) -> Optional[int]:
        """Index of the first VNF with service_rate <= arrival_rate, or None if stable."""
        for i, v in enumerate(self.vnfs):
            if self.arrival_rate >= v.service_rate:
                return i
        return None

    def is_stable(self) -> bool:
        return self.bottleneck() is None


class ConfigKind(enum.Enum):
    SC = "SC"
    SCB = "SCB"
    MM1 = "MM1"
    MMM = "MMm"


_LABEL_RE = re.compile(r"^\s*(SC|SCB|MM1|MMm)\s*(?:\(\s*(\d+)\s*\))?\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class ChainConfig:
    """A deployment shape. ``count`` is b for SCB, l for MM1/MMm and 1 for SC."""

    kind: ConfigKind
    count: int = 1

    def __post_init__(self):
        if isinstance(self.count, bool) or not isinstance(self.count, int):
            raise TypeError(f"count must be an int, got {self.count!r}")
        if self.count < 1:
            raise ValueError(f"{self.kind.value} count must be a positive integer, got {self.count}")
        if self.kind is ConfigKind.SC and self.count != 1:
            raise ValueError("SC takes no count")

    @classmethod
    def sc(cls) -> "ChainConfig":
        return cls(ConfigKind.SC)

    @classmethod
    def scb(cls, b: int) -> "ChainConfig":
        return cls(ConfigKind.SCB, b)

    @classmethod
    def subchain_mm1(cls, l: int) -> "ChainConfig":
        return cls(ConfigKind.MM1, l)

    @classmethod
    def mmm(cls, l: int) -> "ChainConfig":
        return cls(ConfigKind.MMM, l)

    @classmethod
    def parse(cls, label: str) -> "ChainConfig":
        """Parse ``SC``, ``SCB(b)``, ``MM1(l)`` or ``MMm(l)``."""
        m = _LABEL_RE.match(label)
        if not m:
            raise ValueError(f"unrecognised config label {label!r}; expected SC, SCB(b), MM1(l) or MMm(l)")
        name, count = m.group(1), m.group(2)
        # MM1 and MMm differ only by case of the last letter
        kind = {"sc": ConfigKind.SC, "scb": ConfigKind.SCB, "mm1": ConfigKind.MM1, "mmm": ConfigKind.MMM}[name.lower()]
        if kind is ConfigKind.SC:
            if count is not None and int(count) != 1:
                raise ValueError("SC takes no count")
            return cls.sc()
        if count is None:
            raise ValueError(f"{kind.value} needs a count, e.g. {kind.value}(2)")
        return cls(kind, int(count))

    @property
    def label(self) -> str:
        if self.kind is ConfigKind.SC:
            return "SC"
        return f"{self.kind.value}({self.count})"

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class AnalysisReport:
    reliability: float
    expected_response_time: Optional[float]  # None when the chain is unstable
    total_resources: float
    config: ChainConfig

    @property
    def stable(self) -> bool:
        return self.expected_response_time is not None


def reliability_sc(sfc: SfcSpec) -> float:
    return math.prod(v.reliability for v in sfc.vnfs)


def reliability_scb(sfc: SfcSpec, b: int) -> float:
    """Each stage survives if any of its b + 1 instances is up. b = 0 is plain SC."""
    if b < 0:
        raise ValueError("backup count must be >= 0")
    return math.prod(1.0 - (1.0 - v.reliability) ** (b + 1) for v in sfc.vnfs)


def reliability_subchain_mm1(sfc: SfcSpec, l: int) -> float:
    """At least one of l independent full subchains must be up."""
    if l < 1:
        raise ValueError("subchain count must be >= 1")
    fail = 1.0 - reliability_sc(sfc)
    return 1.0 - fail ** l


def reliability_mmm(sfc: SfcSpec, l: int) -> float:
    """Every stage needs at least one of its l smaller instances up."""
    if l < 1:
        raise ValueError("split count must be >= 1")
    return math.prod(1.0 - (1.0 - v.reliability) ** l for v in sfc.vnfs)


def reliability(sfc: SfcSpec, config: ChainConfig) -> float:
    kind = config.kind
    if kind is ConfigKind.SC:
        return reliability_sc(sfc)
    if kind is ConfigKind.SCB:
        return reliability_scb(sfc, config.count)
    if kind is ConfigKind.MM1:
        return reliability_subchain_mm1(sfc, config.count)
    return reliability_mmm(sfc, config.count)


def total_resources(sfc: SfcSpec, config: ChainConfig) -> float:
    # subchaining divides each VNF's weight by l across l copies, so the sum is unchanged
    base = math.fsum(v.resource_weight for v in sfc.vnfs)
    if config.kind is ConfigKind.SCB:
        return (config.count + 1) * base
    return base


def analyze(sfc: SfcSpec, config: ChainConfig) -> AnalysisReport:
    """Reliability, expected response time and resources for one deployment.

    The response time is ``None`` when the chain is unstable.
    """
    from .queueing import sfc_response  # queueing imports this module

    try:
        response = sfc_response(sfc, config)
    except UnstableError:
        response = None
    return AnalysisReport(reliability(sfc, config), response, total_resources(sfc, config), config)
