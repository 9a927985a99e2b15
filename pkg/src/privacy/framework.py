"""
Threshold sweep shared by every privatizer.

For each candidate radius tau (ascending) the relaxed problem is solved by
the underlying solver A. The solution is rejected when its radius exceeds
alpha * tau; otherwise threshold graphs are built and either their flow is
applied as reassignment moves, or the residual cut of an unsaturated graph
tells which clusters to recompute with one center fewer. Subclasses supply
the graphs, the recompute rule and the progress measure.
"""
import json
from abc import ABC, abstractmethod
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from config import SolverConfig
from core.errors import ContractViolation, InfeasibleInstanceError, InstanceError, ensure
from core.feasibility import check_feasible
from core.instance import Clustering, ConstraintSet, Instance, candidate_radii
from kernels.flow import FlowResult, max_flow
from privacy.cut_analysis import CutAnalysis, analyze_cut
from privacy.threshold_graph import ThresholdGraph, reassign_from_flow
from solvers.base_solver import ConstrainedSolver
from utils import console
from utils.helpers import format_rational, write_text


class TraceRecord(BaseModel):
    """One line of the tau trace."""
    tau: str
    iteration: int
    clusters: int
    outliers: int
    k2: Optional[int] = None
    status: Literal["rejected", "recompute", "accepted"]


class TauTrace:
    """Per-threshold iteration log, written as line-delimited JSON."""

    def __init__(self):
        self.records: List[TraceRecord] = []

    def add(self, tau: Fraction, iteration: int, sol: Optional[Clustering],
            status: str, k2: Optional[int] = None) -> None:
        self.records.append(TraceRecord(
            tau=format_rational(tau),
            iteration=iteration,
            clusters=sol.size if sol is not None else 0,
            outliers=len(sol.outliers) if sol is not None else 0,
            k2=k2,
            status=status,
        ))

    def max_iterations(self) -> int:
        return max((r.iteration for r in self.records), default=0)

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(r.model_dump()) for r in self.records)

    def write(self, path: Union[str, Path]) -> Path:
        return write_text(path, self.to_jsonl())


def splice(
    inst: Instance,
    sol: Clustering,
    replaced: Sequence[int],
    sub_points: Sequence[str],
    sub_sol: Clustering,
    blocks: Optional[Sequence[Tuple[str, ...]]] = None,
) -> Clustering:
    """
    Drop the replaced slots, keep the others in order and append the slots of
    sub_sol. Points of sub_points follow sub_sol (assigned or outlier); a
    location opened on both sides stays two distinct slots.
    """
    dropped = set(replaced)
    kept = [i for i in range(sol.size) if i not in dropped]
    remap = {old: new for new, old in enumerate(kept)}
    centers = [sol.centers[i] for i in kept]
    covered = set(sub_points)
    assignment: Dict[str, int] = {}
    for p, slot in sol.assignment.items():
        if p in covered:
            continue
        if slot not in remap:
            raise ContractViolation(f"Point {p} of a replaced cluster is missing from the recompute")
        assignment[p] = remap[slot]
    offset = len(centers)
    centers.extend(sub_sol.centers)
    for p, slot in sub_sol.assignment.items():
        assignment[p] = offset + slot
    outliers = (set(sol.outliers) - covered) | set(sub_sol.outliers)
    handled = set(sub_sol.assignment) | set(sub_sol.outliers)
    ensure(covered <= handled, "recomputed clustering leaves points unhandled")
    return Clustering.build(inst, centers, assignment, outliers, blocks=blocks)


class ThresholdSweep(ABC):
    """Base class for the privatizers: the per-threshold loop and the sweep over thresholds."""

    variant = ""

    def __init__(self, inst: Instance, underlying: ConstrainedSolver, trace: Optional[TauTrace] = None):
        self.inst = inst
        self.underlying = underlying
        self.trace = trace if trace is not None else TauTrace()
        self.constraints = self.build_constraints()
        self.relaxed = self.relaxed_constraints()
        if not underlying.accepts(self.relaxed):
            raise InstanceError(f"{underlying.name} cannot serve as the underlying solver of {self.variant}")
        self.alpha = underlying.factor_for(inst)
        self._memo: Dict[tuple, Optional[Clustering]] = {}

    # ------------------------------------------------------------- hooks

    @abstractmethod
    def build_constraints(self) -> ConstraintSet:
        """Full constraint set the returned clustering must satisfy."""

    def relaxed_constraints(self) -> ConstraintSet:
        return self.constraints.relaxed()

    def admissible(self) -> None:
        """Raise InfeasibleInstanceError when no clustering can exist."""

    @property
    def max_rounds(self) -> int:
        return self.inst.k

    @property
    def factor(self) -> Fraction:
        return self.alpha + 2

    @property
    def outlier_budget(self) -> int:
        return 0

    @abstractmethod
    def graphs(self, sol: Clustering, tau: Fraction) -> List[ThresholdGraph]:
        """Threshold graphs of sol at tau."""

    @abstractmethod
    def recompute(self, sol: Clustering, cut: CutAnalysis, tg: ThresholdGraph,
                  tau: Fraction) -> Optional[Clustering]:
        """Replacement clustering after a cut, or None to reject tau."""

    def progress(self, sol: Clustering) -> tuple:
        return (sol.size,)

    def radius_allowance(self, r: Fraction, tau: Fraction) -> Fraction:
        return r + 2 * tau

    def finish(self, sol: Clustering, graphs: List[ThresholdGraph], flows: List[FlowResult]) -> Clustering:
        ensure(len(graphs) == 1, f"{self.variant}: expected a single threshold graph")
        return reassign_from_flow(sol, graphs[0], flows[0])

    # ----------------------------------------------------------- machinery

    def run_underlying(self, points: Sequence[str], k: int, o: Optional[int] = None) -> Optional[Clustering]:
        """A on the restriction to `points`, memoized by (points, constraint key)."""
        rank = self.inst.point_order()
        points = tuple(sorted(set(points), key=rank.__getitem__))
        if self.relaxed.outliers:
            cs = self.relaxed.with_budget(k, self.outlier_budget if o is None else o)
        else:
            cs = self.relaxed.with_budget(k)
        key = (points, cs.key())
        if key not in self._memo:
            sub = self.inst if len(points) == self.inst.n else self.inst.restrict(points)
            self._memo[key] = self.underlying.solve(sub, cs)
        return self._memo[key]

    def within_alpha(self, sol: Optional[Clustering], tau: Fraction) -> bool:
        return sol is not None and sol.radius <= self.alpha * tau

    def attempt_threshold(self, tau: Fraction) -> Optional[Clustering]:
        """
        The single-threshold procedure.

        Returns:
            A clustering satisfying the full constraint set with radius at most
            (alpha + 2) * tau (variant factor), or None when tau is rejected
        """
        tau = Fraction(tau)
        sol = self.run_underlying(self.inst.points, self.inst.k)
        if not self.within_alpha(sol, tau):
            self.trace.add(tau, 0, sol, "rejected")
            return None

        rounds = 0
        while True:
            graphs = self.graphs(sol, tau)
            flows = [max_flow(tg.network) for tg in graphs]
            pending = [i for i, fr in enumerate(flows) if not fr.saturates_sink()]
            if not pending:
                result = self.finish(sol, graphs, flows)
                allowance = self.radius_allowance(sol.radius, tau)
                ensure(result.radius <= allowance,
                       f"{self.variant}: radius {result.radius} after moves exceeds {allowance}")
                self.trace.add(tau, rounds, result, "accepted")
                console.debug(f"{self.variant}: accepted tau={tau} after {rounds} recomputes, radius {result.radius}")
                return result

            tg, fr = graphs[pending[0]], flows[pending[0]]
            cut = analyze_cut(tg, fr)
            replacement = self.recompute(sol, cut, tg, tau)
            if replacement is None:
                self.trace.add(tau, rounds, sol, "rejected", cut.k2)
                console.debug(f"{self.variant}: rejected tau={tau} at recompute with k''={cut.k2}")
                return None
            rounds += 1
            ensure(self.progress(replacement) < self.progress(sol),
                   f"{self.variant}: recompute did not make progress {self.progress(sol)} -> "
                   f"{self.progress(replacement)}")
            ensure(rounds <= self.max_rounds,
                   f"{self.variant}: {rounds} recomputes exceed the bound {self.max_rounds}")
            self.trace.add(tau, rounds, replacement, "recompute", cut.k2)
            sol = replacement

    def solve(self) -> Clustering:
        """
        Sweep the candidate radii and return the accepted clustering.

        Raises:
            InfeasibleInstanceError: no threshold is accepted
            ContractViolation: the accepted clustering fails its own constraint check
        """
        self.admissible()
        best: Optional[Clustering] = None
        for tau in candidate_radii(self.inst):
            result = self.attempt_threshold(tau)
            if result is None:
                continue
            if best is None or result.radius < best.radius:
                best = result
            if not SolverConfig.FULL_TAU_SWEEP:
                break
        if best is None:
            raise InfeasibleInstanceError(f"{self.variant}: no threshold accepted")
        verdict = check_feasible(self.inst, self.constraints, best)
        if not verdict.feasible:
            raise ContractViolation(f"{self.variant} produced an infeasible clustering: {verdict.describe()}")
        return best
