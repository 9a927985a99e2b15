"""
The privatizers: one ThresholdSweep per constraint combination, the
fair-capacitated contraction pipeline and a ConstrainedSolver wrapper so a
privatizer can itself serve as an underlying solver.
"""
from fractions import Fraction
from math import ceil
from typing import Callable, Dict, List, Optional, Type

from core.errors import ContractViolation, InfeasibleInstanceError, InstanceError, ensure
from core.feasibility import check_feasible
from core.instance import Clustering, ConstraintSet, Instance, fair_structure
from fairness.fair_partition import FairStructure, fair_subset_partition
from fairness.fairlet_center import FairletSolver
from kernels.flow import FlowResult
from privacy.cut_analysis import CutAnalysis
from privacy.framework import TauTrace, ThresholdSweep, splice
from privacy.threshold_graph import (
    GraphKind,
    ThresholdGraph,
    apply_moves,
    build_threshold_graph,
    fair_units,
    flow_moves,
)
from solvers.base_solver import ConstrainedSolver
from solvers.exact import ExactSolver
from utils import console


class PrivateOutliersSweep(ThresholdSweep):
    """
    Privacy with outliers; with_outliers=False gives plain private k-center / k-supplier.

    Every recompute lowers (clusters, outliers) lexicographically, so a
    threshold takes at most (k+1)(o+1) recomputes. That is the bound
    `max_rounds` enforces and the bench reports; it is looser than k*o.
    """

    def __init__(self, inst: Instance, underlying: ConstrainedSolver,
                 trace: Optional[TauTrace] = None, with_outliers: bool = True):
        self.with_outliers = with_outliers
        self.variant = "private-outliers" if with_outliers else "private-kcenter"
        super().__init__(inst, underlying, trace)

    def build_constraints(self) -> ConstraintSet:
        return ConstraintSet.from_instance(self.inst, privacy=True, outliers=self.with_outliers)

    @property
    def outlier_budget(self) -> int:
        return self.inst.outliers if self.with_outliers else 0

    @property
    def max_rounds(self) -> int:
        return (self.inst.k + 1) * (self.outlier_budget + 1)

    def admissible(self) -> None:
        if self.inst.k * self.inst.ell > self.inst.n - self.outlier_budget:
            raise InfeasibleInstanceError(
                f"k*ell = {self.inst.k * self.inst.ell} exceeds |P| - o = {self.inst.n - self.outlier_budget}"
            )

    def progress(self, sol: Clustering) -> tuple:
        return (sol.size, len(sol.outliers))

    def graphs(self, sol: Clustering, tau: Fraction) -> List[ThresholdGraph]:
        kind = GraphKind.OUTLIERS if self.with_outliers else GraphKind.POINTS
        return [build_threshold_graph(sol, self.inst, tau, kind, self.inst.ell, self.outlier_budget)]

    def recompute(self, sol: Clustering, cut: CutAnalysis, tg: ThresholdGraph,
                  tau: Fraction) -> Optional[Clustering]:
        sub = sorted(cut.points | sol.outliers)
        current = cut.current_outliers
        if self.with_outliers and current >= 1:
            same_k = self.run_underlying(sub, cut.k2, current - 1)
            if self.within_alpha(same_k, tau):
                result = self._splice_special(sol, cut, sub, same_k, cut.k2)
                ensure(len(result.outliers) <= current - 1,
                       f"recompute with k'' = {cut.k2} kept {len(result.outliers)} of {current} outliers")
                return result
        if cut.k2 - 1 == 0:
            if len(sub) <= self.outlier_budget:
                return self._splice_special(sol, cut, sub, Clustering.empty(sub), 0)
            return None
        fewer = self.run_underlying(sub, cut.k2 - 1, self.outlier_budget)
        if self.within_alpha(fewer, tau):
            return self._splice_special(sol, cut, sub, fewer, cut.k2 - 1)
        return None

    def _splice_special(self, sol: Clustering, cut: CutAnalysis, sub: List[str],
                        replacement: Clustering, limit: int) -> Clustering:
        """Splice replacement in; only its clusters may be special, at most `limit` of them."""
        result = splice(self.inst, sol, cut.clusters, sub, replacement)
        special = sum(1 for members in result.clusters() if cut.is_special(members))
        ensure(special <= limit, f"{special} special clusters after recompute, at most {limit} allowed")
        return result


class _FewerCentersSweep(ThresholdSweep):
    """Recompute rule shared by the variants without outliers: A on P(V') with k'' - 1."""

    def recompute(self, sol: Clustering, cut: CutAnalysis, tg: ThresholdGraph,
                  tau: Fraction) -> Optional[Clustering]:
        if cut.k2 - 1 == 0:
            return None
        sub = sorted(cut.points)
        fewer = self.run_underlying(sub, cut.k2 - 1)
        if not self.within_alpha(fewer, tau):
            return None
        return splice(self.inst, sol, cut.clusters, sub, fewer, blocks=self.splice_blocks(cut, tg, fewer))

    def splice_blocks(self, cut: CutAnalysis, tg: ThresholdGraph, fewer: Clustering):
        return None


class PrivateCapacitatedSweep(_FewerCentersSweep):
    variant = "private-capacitated"

    def build_constraints(self) -> ConstraintSet:
        return ConstraintSet.from_instance(self.inst, privacy=True, capacities=True)

    def admissible(self) -> None:
        inst = self.inst
        if inst.k * inst.ell > inst.n:
            raise InfeasibleInstanceError(f"k*ell = {inst.k * inst.ell} exceeds |P| = {inst.n}")
        largest = sorted((inst.capacities[x] for x in inst.locations), reverse=True)[:inst.k]
        if sum(largest) < inst.n:
            raise InfeasibleInstanceError(f"k largest capacities hold {sum(largest)} < |P| = {inst.n} points")

    def graphs(self, sol: Clustering, tau: Fraction) -> List[ThresholdGraph]:
        return [build_threshold_graph(sol, self.inst, tau, GraphKind.POINTS, self.inst.ell)]


class PrivateFairSweep(_FewerCentersSweep):
    """
    Privacy with fairness. The lower bound is rounded up to ell' = b * ceil(ell / b)
    and clusters are counted in fair sets; moving a whole fair set keeps both
    clusters fair.
    """
    variant = "private-fair"

    def __init__(self, inst: Instance, underlying: ConstrainedSolver, trace: Optional[TauTrace] = None):
        self.quotas = fair_structure(inst)
        block = self.quotas.block
        self.rounded_ell = block * ceil(inst.ell / block)
        self.unit_bound = self.rounded_ell // block
        super().__init__(inst, underlying, trace)

    def build_constraints(self) -> ConstraintSet:
        return ConstraintSet.from_instance(self.inst, privacy=True, fairness=True)

    @property
    def factor(self) -> Fraction:
        if isinstance(self.underlying, FairletSolver):
            beta = self.underlying.partition_factor(self.inst)
            return 3 * beta + (5 if self.underlying.supplier else 4)
        return 3 * self.alpha + 2

    def admissible(self) -> None:
        if self.inst.k * self.rounded_ell > self.inst.n:
            raise InfeasibleInstanceError(
                f"k*ell' = {self.inst.k * self.rounded_ell} exceeds |P| = {self.inst.n} (ell rounded to {self.rounded_ell})"
            )

    def radius_allowance(self, r: Fraction, tau: Fraction) -> Fraction:
        return 3 * r + 2 * tau

    def graphs(self, sol: Clustering, tau: Fraction) -> List[ThresholdGraph]:
        units = fair_units(self.inst, sol, self.quotas.quotas)
        return [build_threshold_graph(sol, self.inst, tau, GraphKind.FAIR, self.unit_bound, units=units)]

    def finish(self, sol: Clustering, graphs: List[ThresholdGraph], flows: List[FlowResult]) -> Clustering:
        tg, fr = graphs[0], flows[0]
        if not fr.saturates_sink():
            raise ContractViolation("fair reassignment needs every t-arc saturated")
        moves = [(tg.units[u], j) for u, j in flow_moves(tg, fr)]
        blocks = [tg.units[u] for u in tg.units]
        return apply_moves(self.inst, sol, moves, blocks=blocks)

    def splice_blocks(self, cut: CutAnalysis, tg: ThresholdGraph, fewer: Clustering):
        kept = [tg.units[u] for u, h in tg.home.items() if h not in cut.clusters]
        return kept + list(fewer.blocks or ())


class StronglyPrivateSweep(_FewerCentersSweep):
    """Per-color lower bounds; one threshold graph per color with a positive bound."""
    variant = "strongly-private"

    def build_constraints(self) -> ConstraintSet:
        return ConstraintSet.from_instance(self.inst, strong_privacy=True)

    def relaxed_constraints(self) -> ConstraintSet:
        return ConstraintSet(k=self.inst.k)

    def admissible(self) -> None:
        bounds = self.inst.color_ell or {}
        for color, members in self.inst.color_classes().items():
            if len(members) < bounds.get(color, 0):
                raise InfeasibleInstanceError(
                    f"color {color} has {len(members)} points, fewer than ell_{color} = {bounds[color]}"
                )
        total = sum(bounds.values())
        if self.inst.k * total > self.inst.n:
            raise InfeasibleInstanceError(f"k * sum(ell_i) = {self.inst.k * total} exceeds |P| = {self.inst.n}")

    def graphs(self, sol: Clustering, tau: Fraction) -> List[ThresholdGraph]:
        bounds = self.inst.color_ell or {}
        return [
            build_threshold_graph(sol, self.inst, tau, GraphKind.COLOR, bounds[color], color=color)
            for color in self.inst.palette
            if bounds.get(color, 0) > 0
        ]

    def finish(self, sol: Clustering, graphs: List[ThresholdGraph], flows: List[FlowResult]) -> Clustering:
        moves = []
        seen = set()
        for tg, fr in zip(graphs, flows):
            for u, j in flow_moves(tg, fr):
                points = tg.units[u]
                ensure(seen.isdisjoint(points), f"per-color moves overlap on {points}")
                seen.update(points)
                moves.append((points, j))
        return apply_moves(self.inst, sol, moves)


def solve_private_outliers(inst: Instance, underlying: ConstrainedSolver,
                           trace: Optional[TauTrace] = None) -> Clustering:
    return PrivateOutliersSweep(inst, underlying, trace).solve()


def solve_private_kcenter(inst: Instance, underlying: ConstrainedSolver,
                          trace: Optional[TauTrace] = None) -> Clustering:
    return PrivateOutliersSweep(inst, underlying, trace, with_outliers=False).solve()


def solve_private_capacitated(inst: Instance, underlying: ConstrainedSolver,
                              trace: Optional[TauTrace] = None) -> Clustering:
    return PrivateCapacitatedSweep(inst, underlying, trace).solve()


def solve_private_fair(inst: Instance, underlying: ConstrainedSolver,
                       trace: Optional[TauTrace] = None) -> Clustering:
    return PrivateFairSweep(inst, underlying, trace).solve()


def solve_strongly_private(inst: Instance, underlying: ConstrainedSolver,
                           trace: Optional[TauTrace] = None) -> Clustering:
    return StronglyPrivateSweep(inst, underlying, trace).solve()


# ------------------------------------------------------ fair + capacitated


def _fresh_ids(count: int, taken: set) -> List[str]:
    prefix = "F"
    while any(s.startswith(prefix) for s in taken):
        prefix = "_" + prefix
    return [f"{prefix}{i}" for i in range(count)]


def contract_fairlets(inst: Instance, structure: FairStructure, ell: int,
                      capacities: Dict[str, int]) -> Instance:
    """
    One point per fairlet. d(F, x) = max over the fairlet's points, d(F, F')
    = max over pairs, 0 on the diagonal; location distances are unchanged.
    The result need not be a metric and is not validated.
    """
    ids = _fresh_ids(len(structure.subsets), set(inst.sites))
    sites = ids + list(inst.locations)
    rows = []
    for site in sites:
        row = []
        for other in sites:
            if site == other:
                row.append(Fraction(0))
                continue
            left = structure.subsets[ids.index(site)] if site in ids else (site,)
            right = structure.subsets[ids.index(other)] if other in ids else (other,)
            row.append(max(inst.d(p, q) for p in left for q in right))
        rows.append(row)
    return Instance.create(ids, inst.locations, rows, inst.k, sites=sites, ell=ell, capacities=capacities)


def solve_private_fair_capacitated(
    inst: Instance,
    underlying: Optional[ConstrainedSolver] = None,
    partition: Callable[[Instance], FairStructure] = fair_subset_partition,
) -> Clustering:
    """
    Contract a fair subset partition, solve private capacitated clustering on
    the fairlets and expand every fairlet to its contracted slot.

    Args:
        inst: Colored instance with capacities and ell
        underlying: Private capacitated solver A_pc (exact by default)
        partition: Fair subset partition routine

    Raises:
        InfeasibleInstanceError: the rounded bounds leave no room (ell' > min u'),
            or A_pc finds no clustering of the fairlets
    """
    if inst.capacities is None:
        raise InstanceError("private-fair-capacitated needs capacities")
    underlying = underlying or ExactSolver()
    quotas = fair_structure(inst)
    block = quotas.block
    rounded_ell = block * ceil(inst.ell / block)
    rounded_caps = {x: block * (inst.capacities[x] // block) for x in inst.locations}
    if max(rounded_caps.values()) == 0 or rounded_ell > min(rounded_caps.values()):
        raise InfeasibleInstanceError(
            f"rounded bounds ell'={rounded_ell}, min u'={min(rounded_caps.values())} leave no room"
        )

    structure = partition(inst)
    unit_caps = {x: u // block for x, u in rounded_caps.items()}
    contracted = contract_fairlets(inst, structure, rounded_ell // block, unit_caps)
    cs = ConstraintSet(k=inst.k, privacy=True, ell=rounded_ell // block, capacities=unit_caps)
    on_fairlets = underlying.solve(contracted, cs)
    if on_fairlets is None:
        raise InfeasibleInstanceError("no private capacitated clustering of the fairlets")

    assignment: Dict[str, int] = {}
    for fid, subset in zip(contracted.points, structure.subsets):
        slot = on_fairlets.assignment[fid]
        for p in subset:
            assignment[p] = slot
    result = Clustering.build(inst, on_fairlets.centers, assignment, blocks=structure.subsets)
    full = ConstraintSet.from_instance(inst, privacy=True, fairness=True, capacities=True)
    verdict = check_feasible(inst, full, result)
    if not verdict.feasible:
        raise ContractViolation(f"private-fair-capacitated produced an infeasible clustering: {verdict.describe()}")
    console.debug(f"private-fair-capacitated: {len(structure.subsets)} fairlets, radius {result.radius}")
    return result


# ----------------------------------------------------------------- wrapper


class PrivatizedSolver(ConstrainedSolver):
    """A privatizer exposed as a ConstrainedSolver (privacy flag honoured), e.g. A_pc."""

    def __init__(self, sweep: Type[ThresholdSweep], underlying: ConstrainedSolver, shape: frozenset):
        super().__init__(
            name=f"{sweep.variant}[{underlying.name}]",
            factor=underlying.factor + 2,
            supports=[shape],
            handles_privacy=True,
        )
        self.sweep = sweep
        self.underlying = underlying

    def _solve(self, inst: Instance, cs: ConstraintSet) -> Optional[Clustering]:
        scoped = inst.with_params(k=cs.k, ell=cs.ell, capacities=cs.capacities)
        try:
            return self.sweep(scoped, self.underlying).solve()
        except InfeasibleInstanceError:
            return None
