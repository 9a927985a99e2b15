"""
State schema for the LangGraph run pipeline.
Defines the shared state passed between stages.
"""
from fractions import Fraction
from typing import List, Optional, TypedDict

from core.feasibility import Verdict
from core.instance import Instance
from evaluation.report import RunReport
from orchestration.dispatch import Outcome
from privacy.framework import TauTrace


class RunState(TypedDict, total=False):
    """State passed between stages of one run"""

    # Request
    instance_text: str
    variant: str
    underlying: Optional[str]
    with_oracle: bool
    seed: Optional[int]

    # Parsed input
    instance: Instance
    digest: str

    # Solve results
    outcome: Outcome
    trace: TauTrace
    wall_time: float

    # Checks
    verdict: Verdict
    oracle_value: Optional[Fraction]

    # Output
    report: RunReport
    stage_sequence: List[str]
