"""Choose the largest subchain count that keeps the expected delay within the SLA.

Two settings are supported. ``MM1`` (independent subchains) has a closed-form
bound and is solved in constant time. ``MMm`` (shared scheduler per VNF) is
solved by search over l, relying on the response time being nondecreasing in
l; the result is checked after the search and a linear scan takes over if the
check fails.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional

from .errors import InfeasibleError
from .model import SfcSpec, reliability_mmm, reliability_subchain_mm1
from .queueing import sfc_response_mmm, sfc_response_sc

log = logging.getLogger(__name__)

DEFAULT_L_MAX = 10**6

# slack for the non-strict MM1 comparison, so a bound landing exactly on an
# integer is not lost to rounding in the delay sum
_MM1_REL_TOL = 1e-12


class Setting(enum.Enum):
    MM1 = "mm1"
    MMM = "mmm"

    @classmethod
    def parse(cls, text: str) -> "Setting":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown setting {text!r}; expected 'mm1' or 'mmm'") from None


@dataclass(frozen=True)
class PlanRequest:
    sfc: SfcSpec
    setting: Setting
    l_max: int = DEFAULT_L_MAX

    def __post_init__(self):
        if self.l_max < 1:
            raise ValueError("l_max must be >= 1")


@dataclass(frozen=True)
class PlanResult:
    l: int
    predicted_response: float
    predicted_reliability: float
    setting: Setting
    # set when the post-search check caught non-monotone delays
    diagnostic: Optional[str] = None


def _mm1_fits(sfc: SfcSpec, l: int, base: float) -> bool:
    return l * base <= sfc.delay_sla * (1.0 + _MM1_REL_TOL)


def plan_mm1(req: PlanRequest) -> PlanResult:
    sfc = req.sfc
    base = sfc_response_sc(sfc)  # raises UnstableError
    if not _mm1_fits(sfc, 1, base):
        raise InfeasibleError(
            f"delay SLA {sfc.delay_sla} s is below the single-chain response {base:.6g} s")
    l = max(1, math.floor(sfc.delay_sla / base))
    # floor of a rounded quotient can be off by one either way
    while l > 1 and not _mm1_fits(sfc, l, base):
        l -= 1
    while l < req.l_max and _mm1_fits(sfc, l + 1, base):
        l += 1
    l = min(l, req.l_max)
    return PlanResult(l, l * base, reliability_subchain_mm1(sfc, l), Setting.MM1)


def _mmm_fits(sfc: SfcSpec, l: int) -> bool:
    return sfc_response_mmm(sfc, l) < sfc.delay_sla


def _min_slack_scan(sfc: SfcSpec, l_max: int) -> int:
    """Feasible l with the smallest slack, by brute force over [1, l_max]."""
    best, best_slack = 1, math.inf
    for l in range(1, l_max + 1):
        slack = sfc.delay_sla - sfc_response_mmm(sfc, l)
        if 0 < slack <= best_slack:
            best, best_slack = l, slack
    return best


def _search_result_consistent(sfc: SfcSpec, l: int, l_max: int) -> bool:
    """Feasible at l, infeasible at l + 1 (unless capped), and E nondecreasing around l."""
    here = sfc_response_mmm(sfc, l)
    if not here < sfc.delay_sla:
        return False
    if l > 1 and sfc_response_mmm(sfc, l - 1) > here:
        return False
    if l < l_max:
        after = sfc_response_mmm(sfc, l + 1)
        if after < sfc.delay_sla or after < here:
            return False
    return True


def plan_mmm(req: PlanRequest) -> PlanResult:
    """Largest l in [1, l_max] with E[R] strictly below the SLA.

    Doubling finds a bracket, then bisection narrows it, so the number of
    delay evaluations is O(log l).
    """
    sfc = req.sfc
    if not _mmm_fits(sfc, 1):  # raises UnstableError first if needed
        raise InfeasibleError(
            f"delay SLA {sfc.delay_sla} s is not above the single-chain response {sfc_response_sc(sfc):.6g} s")
    l_max = req.l_max
    lo, hi = 1, 2
    while hi <= l_max and _mmm_fits(sfc, hi):
        lo, hi = hi, hi * 2
    if hi > l_max:
        if _mmm_fits(sfc, l_max):
            lo = hi = l_max
        else:
            hi = l_max
    # invariant: fits(lo), and hi is either infeasible or equal to lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _mmm_fits(sfc, mid):
            lo = mid
        else:
            hi = mid
    l = lo

    diagnostic = None
    if not _search_result_consistent(sfc, l, l_max):
        diagnostic = f"non-monotone response detected near l={l}; used linear scan"
        log.warning(diagnostic)
        l = _min_slack_scan(sfc, l_max)
    return PlanResult(l, sfc_response_mmm(sfc, l), reliability_mmm(sfc, l), Setting.MMM, diagnostic)


def plan(req: PlanRequest) -> PlanResult:
    if req.setting is Setting.MM1:
        return plan_mm1(req)
    return plan_mmm(req)
