"""Mean response times for M/M/1 and M/M/m stations and tandem chains of them.

Every stage of a chain sees Poisson arrivals at the chain's arrival rate
(Burke's theorem), so a chain's mean response is the sum of its stages'.
All times are in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnstableError
from .model import ChainConfig, ConfigKind, SfcSpec


@dataclass(frozen=True)
class StationLoad:
    arrival_rate: float
    service_rate: float

    @property
    def utilization(self) -> float:
        return self.arrival_rate / self.service_rate

    def check_stable(self, vnf_index=None):
        if not self.arrival_rate < self.service_rate:
            where = "" if vnf_index is None else f" at VNF {vnf_index}"
            raise UnstableError(
                f"unstable station{where}: arrival rate {self.arrival_rate} >= service rate {self.service_rate}",
                vnf_index,
            )


def _stage_loads(sfc: SfcSpec):
    for i, v in enumerate(sfc.vnfs):
        load = StationLoad(sfc.arrival_rate, v.service_rate)
        load.check_stable(i)
        yield load


def mm1_response(load: StationLoad) -> float:
    load.check_stable()
    return 1.0 / (load.service_rate - load.arrival_rate)


def erlang_c(servers: int, offered_load: float) -> float:
    """Probability that an arrival waits in an M/M/m queue.

    ``offered_load`` is a = lambda / mu_server; requires a < servers. Uses the
    Erlang-B recurrence B_k = a B_{k-1} / (k + a B_{k-1}), which is the
    normalised form of the a^k / k! term series and stays finite for any m.
    """
    m, a = servers, offered_load
    if m < 1:
        raise ValueError("servers must be >= 1")
    if not a > 0:
        raise ValueError("offered load must be positive")
    if not a < m:
        raise UnstableError(f"offered load {a} >= servers {m}")
    b = 1.0
    for k in range(1, m + 1):
        b = a * b / (k + a * b)
    return m * b / (m - a * (1.0 - b))


def mmm_vnf_response(load: StationLoad, l: int) -> float:
    """VNF split into ``l`` instances of rate mu/l behind one shared queue."""
    if l < 1:
        raise ValueError("split count must be >= 1")
    load.check_stable()
    rho = load.utilization
    wait_factor = erlang_c(l, l * rho)
    return (l / load.service_rate) * (1.0 + wait_factor / (l * (1.0 - rho)))


def sfc_response_sc(sfc: SfcSpec) -> float:
    return math.fsum(mm1_response(load) for load in _stage_loads(sfc))


def sfc_response_subchain_mm1(sfc: SfcSpec, l: int) -> float:
    # lambda/l over mu/l keeps every utilisation unchanged, so the delay scales by l
    if l < 1:
        raise ValueError("subchain count must be >= 1")
    return l * sfc_response_sc(sfc)


def sfc_response_mmm(sfc: SfcSpec, l: int) -> float:
    return math.fsum(mmm_vnf_response(load, l) for load in _stage_loads(sfc))


def sfc_response(sfc: SfcSpec, config: ChainConfig) -> float:
    """Expected end-to-end response for any deployment shape.

    SCB backups are cold standby and carry no traffic, so SCB behaves like SC.
    """
    if config.kind in (ConfigKind.SC, ConfigKind.SCB):
        return sfc_response_sc(sfc)
    if config.kind is ConfigKind.MM1:
        return sfc_response_subchain_mm1(sfc, config.count)
    return sfc_response_mmm(sfc, config.count)
