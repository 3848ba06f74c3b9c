"""Event-driven simulation of a feed-forward network of FIFO multi-server stations."""

from __future__ import annotations

import bisect
import heapq
import math
import statistics
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

from scipy import stats

from ..errors import DivergedError
from .rng import RngStream, replication_seed
from .topology import Topology

MIN_MEASURED_DEPARTURES = 1000


@dataclass(frozen=True)
class SimConfig:
    topology: Topology
    arrival_rate: float
    warmup_departures: int = 10_000
    measured_departures: int = 100_000
    replications: int = 10
    seed: int = 0
    queue_bound: int = 10**7

    def __post_init__(self):
        if not self.arrival_rate > 0:
            raise ValueError("arrival_rate must be positive")
        if self.warmup_departures < 0:
            raise ValueError("warmup_departures must be >= 0")
        if self.measured_departures < MIN_MEASURED_DEPARTURES:
            raise ValueError(
                f"measured_departures must be >= {MIN_MEASURED_DEPARTURES} for a usable confidence interval")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.queue_bound < 1:
            raise ValueError("queue_bound must be >= 1")


@dataclass(frozen=True)
class ReplicationStats:
    mean_response: float
    mean_in_system: float  # time average over the measurement window
    route_counts: tuple  # packets routed to each branch
    departures: int


@dataclass(frozen=True)
class SimResult:
    mean_response: float
    ci95_halfwidth: float  # inf with a single replication
    per_replication_means: List[float]
    departures_counted: int
    seed: int
    mean_in_system: float = math.nan
    route_counts: tuple = ()
    replications: List[ReplicationStats] = field(default_factory=list, repr=False)


def run_replication(topology: Topology, arrival_rate: float, warmup: int, measured: int,
                    seed_seq, queue_bound: int = 10**7) -> ReplicationStats:
    """One independent run. Ties in event time are broken by insertion order."""
    draw = RngStream(seed_seq).uniform
    log = math.log
    push, pop = heapq.heappush, heapq.heappop

    stations = topology.stations
    rate = [st.service_rate for st in stations]
    cap = [st.servers for st in stations]
    nxt = [st.next for st in stations]
    busy = [0] * len(stations)
    queues = [deque() for _ in stations]

    entries = topology.entries
    n_branches = len(entries)
    cum = []
    acc = 0.0
    for p in topology.entry_probs[:-1]:
        acc += p
        cum.append(acc)
    route_counts = [0] * n_branches

    heap = []
    seq = 0
    push(heap, (-log(draw()) / arrival_rate, seq, -1, 0.0))
    seq += 1

    total = warmup + measured
    departed = 0
    resp_sum = 0.0
    n_sys = 0
    area = 0.0
    measuring = warmup == 0
    t_start = last_t = 0.0
    t = 0.0

    while departed < total:
        t, _, st, born = pop(heap)
        if st < 0:
            if measuring:
                area += n_sys * (t - last_t)
                last_t = t
            n_sys += 1
            push(heap, (t - log(draw()) / arrival_rate, seq, -1, 0.0))
            seq += 1
            if n_branches == 1:
                branch = 0
            else:
                branch = bisect.bisect_right(cum, 1.0 - draw())
            route_counts[branch] += 1
            target = entries[branch]
            born = t
        else:
            q = queues[st]
            if q:
                push(heap, (t - log(draw()) / rate[st], seq, st, q.popleft()))
                seq += 1
            else:
                busy[st] -= 1
            target = nxt[st]
            if target < 0:
                if measuring:
                    area += n_sys * (t - last_t)
                    last_t = t
                n_sys -= 1
                departed += 1
                if departed > warmup:
                    resp_sum += t - born
                elif departed == warmup:
                    measuring = True
                    t_start = last_t = t
                continue

        if busy[target] < cap[target]:
            busy[target] += 1
            push(heap, (t - log(draw()) / rate[target], seq, target, born))
            seq += 1
        else:
            q = queues[target]
            q.append(born)
            if len(q) > queue_bound:
                raise DivergedError(
                    f"queue at station {target} exceeded {queue_bound} packets at t={t:.6g}")

    window = t - t_start
    in_system = area / window if window > 0 else math.nan
    return ReplicationStats(resp_sum / measured, in_system, tuple(route_counts), measured)


def _replicate(args):
    config, k = args
    return run_replication(config.topology, config.arrival_rate, config.warmup_departures,
                           config.measured_departures, replication_seed(config.seed, k),
                           config.queue_bound)


def ci95_halfwidth(samples) -> float:
    n = len(samples)
    if n < 2:
        return math.inf
    return float(stats.t.ppf(0.975, n - 1)) * statistics.stdev(samples) / math.sqrt(n)


def run_simulation(config: SimConfig, workers: Optional[int] = None) -> SimResult:
    """Run all replications and pool them.

    Replications may run in worker processes; results are always combined in
    replication-index order, so the output does not depend on ``workers``.
    """
    config.topology.check_stable(config.arrival_rate)
    jobs = [(config, k) for k in range(config.replications)]
    if workers and workers > 1 and config.replications > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reps = list(pool.map(_replicate, jobs))
    else:
        reps = [_replicate(j) for j in jobs]

    means = [r.mean_response for r in reps]
    routes = tuple(sum(r.route_counts[b] for r in reps) for b in range(config.topology.n_branches))
    return SimResult(
        mean_response=math.fsum(means) / len(means),
        ci95_halfwidth=ci95_halfwidth(means),
        per_replication_means=means,
        departures_counted=sum(r.departures for r in reps),
        seed=config.seed,
        mean_in_system=math.fsum(r.mean_in_system for r in reps) / len(reps),
        route_counts=routes,
        replications=reps,
    )
