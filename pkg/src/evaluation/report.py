"""
Run reports written next to solution documents.
"""
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict

from config import BenchConfig
from core.feasibility import Verdict
from privacy.framework import TraceRecord
from utils.helpers import format_rational


class ViolationEntry(BaseModel):
    kind: str
    cluster: Optional[int] = None
    detail: str


class RunReport(BaseModel):
    """One solve / verify / oracle run. Rationals are strings in lowest terms."""
    model_config = ConfigDict(extra="forbid")

    digest: str
    variant: str
    underlying: Optional[str] = None
    radius: Optional[str] = None
    cost: Optional[str] = None
    oracle: Optional[str] = None
    ratio: Optional[str] = None
    declared_factor: Optional[str] = None
    within_factor: Optional[bool] = None
    feasible: bool
    violations: List[ViolationEntry] = []
    trace: List[TraceRecord] = []
    wall_time: Optional[float] = None
    seed: Optional[int] = None

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True)


def ratio_of(value: Fraction, oracle: Optional[Fraction]) -> Optional[Fraction]:
    """value / oracle; a zero optimum gives ratio 1 when matched and None (unbounded) otherwise"""
    if oracle is None:
        return None
    if oracle == 0:
        return Fraction(1) if value == 0 else None
    return Fraction(value) / oracle


def build_report(
    digest: str,
    variant: str,
    verdict: Verdict,
    underlying: Optional[str] = None,
    value: Optional[Fraction] = None,
    facility: bool = False,
    oracle: Optional[Fraction] = None,
    factor: Optional[Fraction] = None,
    trace: Optional[List[TraceRecord]] = None,
    wall_time: Optional[float] = None,
    seed: Optional[int] = None,
) -> RunReport:
    ratio = ratio_of(value, oracle) if value is not None else None
    within = None
    if oracle is not None and factor is not None and value is not None:
        within = value <= factor * oracle
    return RunReport(
        digest=digest,
        variant=variant,
        underlying=underlying,
        radius=format_rational(value) if value is not None and not facility else None,
        cost=format_rational(value) if value is not None and facility else None,
        oracle=format_rational(oracle) if oracle is not None else None,
        ratio=format_rational(ratio) if ratio is not None else None,
        declared_factor=format_rational(factor) if factor is not None else None,
        within_factor=within,
        feasible=verdict.feasible,
        violations=[ViolationEntry(**v.to_dict()) for v in verdict.violations],
        trace=list(trace or []),
        wall_time=round(wall_time, 6) if wall_time is not None and BenchConfig.REPORT_TIMINGS else None,
        seed=seed,
    )
