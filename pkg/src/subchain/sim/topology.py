"""Station graphs for each deployment shape.

SC and SCB map to one path of single-server stations (SCB backups are cold
standby and carry no traffic). ``MM1(l)`` becomes ``l`` parallel copies of the
chain at rate mu/l with each packet routed to a copy with probability 1/l;
random routing keeps every copy's input Poisson. ``MMm(l)`` keeps one path but
each station gets ``l`` servers of rate mu/l sharing a FIFO queue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import UnstableError
from ..model import ChainConfig, ConfigKind, SfcSpec


@dataclass(frozen=True)
class Station:
    stage: int  # VNF position in the chain
    branch: int  # subchain index, 0 unless MM1
    service_rate: float  # per server
    servers: int
    next: int  # index of the following station, -1 for the sink


@dataclass(frozen=True)
class Topology:
    stations: tuple
    entries: tuple  # first station of each branch
    entry_probs: tuple
    n_stages: int

    def __post_init__(self):
        if len(self.entries) != len(self.entry_probs):
            raise ValueError("one routing probability per entry station")
        if not math.isclose(math.fsum(self.entry_probs), 1.0, rel_tol=1e-12):
            raise ValueError("routing probabilities must sum to 1")

    @property
    def n_branches(self) -> int:
        return len(self.entries)

    def path(self, branch: int) -> list:
        out = []
        i = self.entries[branch]
        while i != -1:
            out.append(i)
            i = self.stations[i].next
        return out

    def check_stable(self, arrival_rate: float):
        for b, (entry, prob) in enumerate(zip(self.entries, self.entry_probs)):
            for i in self.path(b):
                st = self.stations[i]
                if not arrival_rate * prob < st.servers * st.service_rate:
                    raise UnstableError(
                        f"station for VNF {st.stage} (branch {b}) is unstable: "
                        f"load {arrival_rate * prob:g} >= capacity {st.servers * st.service_rate:g}",
                        st.stage,
                    )


def build_topology(sfc: SfcSpec, config: ChainConfig) -> Topology:
    n = len(sfc.vnfs)
    stations = []
    if config.kind is ConfigKind.MM1:
        l = config.count
        entries = []
        for b in range(l):
            entries.append(len(stations))
            for s, v in enumerate(sfc.vnfs):
                nxt = len(stations) + 1 if s < n - 1 else -1
                stations.append(Station(s, b, v.service_rate / l, 1, nxt))
        return Topology(tuple(stations), tuple(entries), (1.0 / l,) * l, n)

    servers = config.count if config.kind is ConfigKind.MMM else 1
    for s, v in enumerate(sfc.vnfs):
        nxt = s + 1 if s < n - 1 else -1
        stations.append(Station(s, 0, v.service_rate / servers, servers, nxt))
    return Topology(tuple(stations), (0,), (1.0,), n)
