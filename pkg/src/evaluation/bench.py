"""
Factor-certification bench.

Every trial draws a random admissible instance, runs the variant, rechecks
feasibility and, with the oracle on, compares against the exact optimum with
no slack. Failures are written as self-contained replay files.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel

from config import REPLAY_DIR, BenchConfig
from core.documents import InstanceDocument, instance_to_document
from core.errors import ContractViolation, InfeasibleInstanceError, InvalidInputError, SizeCapError
from core.instance import VARIANT_FLAGS, Instance
from evaluation.generators import GeneratorSettings, random_instance
from evaluation.oracles import oracle_value
from evaluation.report import ratio_of
from orchestration.dispatch import SWEEPS, constraints_for, run_variant, verify
from privacy.framework import TauTrace
from utils import console
from utils.helpers import format_rational, write_text

VARIANTS: Sequence[str] = tuple(VARIANT_FLAGS)


class ReplayDocument(BaseModel):
    """A failing trial, inline instance included, so it reproduces without the generator"""
    variant: str
    underlying: Optional[str] = None
    reason: str
    seed: int
    trial: int
    instance: InstanceDocument


class VariantSummary(BaseModel):
    variant: str
    trials: int
    solved: int
    infeasible: int
    capped: int
    breaches: int
    worst_ratio: Optional[str] = None
    declared_factor: Optional[str] = None
    max_iterations: int
    iteration_bound: Optional[int] = None


class BenchReport(BaseModel):
    seed: int
    trials: int
    max_n: int
    with_oracle: bool
    underlying: Optional[str] = None
    variants: List[VariantSummary]
    replays: List[str] = []

    @property
    def failed(self) -> bool:
        return any(v.breaches for v in self.variants)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True)


@dataclass
class BenchSettings:
    variants: Sequence[str] = VARIANTS
    trials: int = BenchConfig.DEFAULT_TRIALS
    seed: int = BenchConfig.DEFAULT_SEED
    max_n: int = BenchConfig.DEFAULT_MAX_N
    with_oracle: bool = True
    underlying: Optional[str] = None
    replay_dir: Path = field(default_factory=lambda: REPLAY_DIR)


def iteration_bound(variant: str, inst: Instance) -> Optional[int]:
    """Recompute rounds allowed per threshold, None for variants without a sweep"""
    if variant in ("private-outliers", "private-kcenter"):
        return (inst.k + 1) * ((inst.outliers if variant == "private-outliers" else 0) + 1)
    if variant in SWEEPS:
        return inst.k
    return None


class Bench:
    """Run the sweep for a set of variants and aggregate per variant"""

    def __init__(self, settings: BenchSettings):
        self.settings = settings
        self.generator = GeneratorSettings(
            max_n=settings.max_n,
            max_locations=GeneratorSettings.max_locations if settings.with_oracle else None,
        )
        self.replays: List[str] = []

    def _rng(self, variant: str, trial: int) -> np.random.Generator:
        return np.random.default_rng([self.settings.seed, VARIANTS.index(variant), trial])

    def _replay(self, variant: str, trial: int, inst: Instance, reason: str) -> None:
        doc = ReplayDocument(
            variant=variant,
            underlying=self.settings.underlying,
            reason=reason,
            seed=self.settings.seed,
            trial=trial,
            instance=instance_to_document(inst),
        )
        path = self.settings.replay_dir / f"{variant}-seed{self.settings.seed}-trial{trial}.json"
        write_text(path, doc.model_dump_json(indent=2, exclude_none=True))
        self.replays.append(str(path))
        console.error(f"{variant} trial {trial}: {reason} (replay: {path})")

    def run_trial(self, variant: str, trial: int) -> Dict:
        inst = random_instance(self._rng(variant, trial), variant, self.generator)
        row = {
            "variant": variant, "trial": trial, "n": inst.n, "k": inst.k,
            "status": "solved", "value": None, "oracle": None, "ratio": None,
            "factor": None, "iterations": 0, "bound": iteration_bound(variant, inst),
        }
        trace = TauTrace()
        found = None
        try:
            found = run_variant(inst, variant, self.settings.underlying, trace)
            row.update(value=found.value, factor=found.factor, iterations=trace.max_iterations())
        except InfeasibleInstanceError:
            row["status"] = "infeasible"
        except SizeCapError:
            row["status"] = "capped"
            return row
        except (ContractViolation, InvalidInputError) as e:
            row["status"] = "breach"
            self._replay(variant, trial, inst, f"contract: {e}")
            return row

        if found is not None:
            verdict = verify(inst, variant, found.clustering)
            if not verdict.feasible:
                row["status"] = "breach"
                self._replay(variant, trial, inst, f"infeasible output: {verdict.describe()}")
                return row
        if row["bound"] is not None and row["iterations"] > row["bound"]:
            row["status"] = "breach"
            self._replay(variant, trial, inst, f"{row['iterations']} rounds exceed {row['bound']}")
            return row
        if not self.settings.with_oracle:
            return row

        try:
            best = oracle_value(inst, variant, constraints_for(inst, variant))
        except SizeCapError:
            return row
        except (ContractViolation, InvalidInputError) as e:
            row["status"] = "breach"
            self._replay(variant, trial, inst, f"oracle contract: {e}")
            return row
        row["oracle"] = best
        if found is None:
            if best is not None:
                row["status"] = "breach"
                self._replay(variant, trial, inst, f"reported infeasible, oracle optimum {best}")
            return row
        if best is None:
            row["status"] = "breach"
            self._replay(variant, trial, inst, "oracle found no solution for a verified output")
            return row
        row["ratio"] = ratio_of(found.value, best)
        if found.value > found.factor * best:
            row["status"] = "breach"
            self._replay(variant, trial, inst, f"value {found.value} > {found.factor} * {best}")
        return row

    def run(self) -> pd.DataFrame:
        rows = []
        for variant in self.settings.variants:
            console.info(f"bench: {variant}, {self.settings.trials} trials")
            for trial in range(self.settings.trials):
                rows.append(self.run_trial(variant, trial))
        return pd.DataFrame(rows)

    def summarize(self, df: pd.DataFrame) -> BenchReport:
        summaries = []
        groups = df.groupby("variant", sort=False) if not df.empty else []
        for variant, group in groups:
            ratios = [r for r in group["ratio"] if r is not None]
            factors = [f for f in group["factor"] if f is not None]
            bounds = [int(b) for b in group["bound"].dropna()]
            summaries.append(VariantSummary(
                variant=variant,
                trials=len(group),
                solved=int((group["status"] == "solved").sum()),
                infeasible=int((group["status"] == "infeasible").sum()),
                capped=int((group["status"] == "capped").sum()),
                breaches=int((group["status"] == "breach").sum()),
                worst_ratio=format_rational(max(ratios)) if ratios else None,
                declared_factor=format_rational(max(factors)) if factors else None,
                max_iterations=int(group["iterations"].max()),
                iteration_bound=max(bounds) if bounds else None,
            ))
        return BenchReport(
            seed=self.settings.seed,
            trials=self.settings.trials,
            max_n=self.settings.max_n,
            with_oracle=self.settings.with_oracle,
            underlying=self.settings.underlying,
            variants=summaries,
            replays=list(self.replays),
        )


def run_bench(settings: BenchSettings) -> BenchReport:
    bench = Bench(settings)
    report = bench.summarize(bench.run())
    for v in report.variants:
        line = (f"{v.variant}: {v.solved}/{v.trials} solved, worst ratio {v.worst_ratio or '-'}"
                f" (declared {v.declared_factor or '-'}), rounds {v.max_iterations}/{v.iteration_bound or '-'}")
        (console.warn if v.breaches else console.ok)(line)
    return report
