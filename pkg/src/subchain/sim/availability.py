"""Monte Carlo availability of a deployment by sampling every VNF instance.

Each trial draws an independent up/down state for every instance (primary,
backup, subchain copy or split instance) and applies the deployment's
structure function:

* SC      - every VNF up
* SCB(b)  - every stage has at least one of its b + 1 instances up
* MM1(l)  - at least one of the l subchains is up end to end
* MMm(l)  - every stage has at least one of its l instances up
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..model import ChainConfig, ConfigKind, SfcSpec

MIN_TRIALS = 10_000
_CHUNK_CELLS = 1 << 21  # uniforms drawn per chunk


@dataclass(frozen=True)
class AvailabilityEstimate:
    estimate: float
    trials: int
    ci95_halfwidth: float  # normal approximation to the binomial

    def sigma(self, p: float) -> float:
        """Binomial standard error of the estimate if the true availability is ``p``."""
        return math.sqrt(p * (1.0 - p) / self.trials)


def _up_limits(p) -> np.ndarray:
    """uint32 cut-offs with P(u <= cut) = p to within 2**-33, u uniform on uint32."""
    thr = np.clip(np.rint(np.asarray(p) * 2.0**32), 1, 2**32).astype(np.int64)
    return (thr - 1).astype(np.uint32)


def _chain_up(u: np.ndarray, limits: np.ndarray, config: ChainConfig) -> np.ndarray:
    """Structure function over a block of trials.

    ``u`` has shape (copies, stages, trials); instance (k, j) is up when
    ``u[k, j] <= limits[j]``. Loops run over the few instances, vector ops over trials.
    """
    copies, stages, _ = u.shape
    if config.kind is ConfigKind.MM1:
        chain = None
        for k in range(copies):
            sub = u[k, 0] <= limits[0]
            for j in range(1, stages):
                sub &= u[k, j] <= limits[j]
            chain = sub if chain is None else chain | sub
        return chain
    chain = None
    for j in range(stages):
        stage = u[0, j] <= limits[j]
        for k in range(1, copies):
            stage |= u[k, j] <= limits[j]
        chain = stage if chain is None else chain & stage
    return chain


def _copies(config: ChainConfig) -> int:
    if config.kind is ConfigKind.SC:
        return 1
    if config.kind is ConfigKind.SCB:
        return config.count + 1
    return config.count


def estimate_availability(sfc: SfcSpec, config: ChainConfig, trials: int, seed: int) -> AvailabilityEstimate:
    if trials < MIN_TRIALS:
        raise ValueError(f"trials must be >= {MIN_TRIALS}")
    rng = np.random.default_rng(seed)
    limits = _up_limits([v.reliability for v in sfc.vnfs])
    stages = len(limits)
    copies = _copies(config)
    per_trial = copies * stages
    chunk = max(1, _CHUNK_CELLS // per_trial)

    up_count = 0
    done = 0
    while done < trials:
        n = min(chunk, trials - done)
        u = rng.integers(0, 2**32, size=(copies, stages, n), dtype=np.uint32)
        up_count += int(np.count_nonzero(_chain_up(u, limits, config)))
        done += n

    est = up_count / trials
    half = 1.96 * math.sqrt(est * (1.0 - est) / trials)
    return AvailabilityEstimate(est, trials, half)
