"""Reliability and delay planning for subchained service function chains."""

from .errors import (DivergedError, InfeasibleError, ScenarioError, ScenarioParseError,
                     ScenarioValidationError, SubchainError, UnstableError)
from .model import (AnalysisReport, ChainConfig, ConfigKind, SfcSpec, VnfSpec, analyze, reliability,
                    reliability_mmm, reliability_sc, reliability_scb, reliability_subchain_mm1,
                    total_resources)
from .planner import PlanRequest, PlanResult, Setting, plan, plan_mm1, plan_mmm
from .queueing import (StationLoad, erlang_c, mm1_response, mmm_vnf_response, sfc_response,
                       sfc_response_mmm, sfc_response_sc, sfc_response_subchain_mm1)

__version__ = "0.1.0"
