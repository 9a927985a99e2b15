"""
Privacy framework: threshold graphs, reassignment, cut analysis and the privatizers
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent / "src"))

import json

import numpy as np
import pytest

from conftest import line_instance
from core.errors import ContractViolation, InfeasibleInstanceError
from core.feasibility import check_feasible
from core.instance import Clustering, ConstraintSet, candidate_radii
from evaluation.generators import GeneratorSettings, random_instance
from evaluation.oracles import oracle_value
from fairness.fairlet_center import FairletSolver
from kernels.flow import max_flow
from privacy.cut_analysis import analyze_cut
from privacy.framework import TauTrace
from privacy.threshold_graph import (
    OUTLIER_NODE,
    SINK,
    SOURCE,
    GraphKind,
    build_threshold_graph,
    cluster_node,
    reassign_from_flow,
    unit_node,
)
from privacy.variants import (
    PrivateFairSweep,
    PrivateOutliersSweep,
    solve_private_capacitated,
    solve_private_fair,
    solve_private_fair_capacitated,
    solve_private_kcenter,
    solve_private_outliers,
    solve_strongly_private,
)
from solvers.exact import ExactSolver
from solvers.gonzalez import GonzalezSolver

COLORS = {"p0": "red", "p1": "blue", "p10": "red", "p11": "blue"}


def uneven(i1):
    return Clustering.build(i1, ["p0", "p11"], {"p0": 0, "p1": 0, "p10": 0, "p11": 1})


class TestThresholdGraph:
    def test_surplus_and_deficit_arcs(self, i1):
        tg = build_threshold_graph(uneven(i1), i1, 1, GraphKind.POINTS, bound=2)
        caps = tg.network.capacities
        assert caps[(SOURCE, cluster_node(0))] == 1
        assert caps[(cluster_node(1), SINK)] == 1
        assert caps[(unit_node("p10"), cluster_node(1))] == 1
        assert (unit_node("p0"), cluster_node(1)) not in caps
        assert tg.counts == (3, 1)

    def test_balanced_clusters_have_no_terminal_arcs(self, i1):
        sol = Clustering.build(i1, ["p0", "p11"], {"p0": 0, "p1": 0, "p10": 1, "p11": 1})
        tg = build_threshold_graph(sol, i1, 1, GraphKind.POINTS, bound=2)
        assert not [arc for arc in tg.network.capacities if SOURCE in arc or SINK in arc]

    def test_outlier_node(self):
        inst = line_instance([0, 1, 2, 100], k=1, ell=3, outliers=2)
        sol = Clustering.build(inst, ["p1"], {"p0": 0, "p1": 0, "p2": 0}, outliers=["p100"])
        tg = build_threshold_graph(sol, inst, 1, GraphKind.OUTLIERS, bound=3, outlier_budget=2)
        caps = tg.network.capacities
        assert caps[(SOURCE, OUTLIER_NODE)] == 2
        assert [arc for arc in caps if arc[0] == OUTLIER_NODE] == [(OUTLIER_NODE, unit_node("p100"))]


class TestReassignment:
    def test_moves_balance_clusters(self, i1):
        sol = uneven(i1)
        tg = build_threshold_graph(sol, i1, 1, GraphKind.POINTS, bound=2)
        fr = max_flow(tg.network)
        moved = reassign_from_flow(sol, tg, fr)
        assert moved.cluster_sizes() == (2, 2)
        assert moved.assignment["p10"] == 1
        assert moved.radius <= sol.radius + 2

    def test_zero_flow_keeps_solution(self, i1):
        sol = Clustering.build(i1, ["p0", "p11"], {"p0": 0, "p1": 0, "p10": 1, "p11": 1})
        tg = build_threshold_graph(sol, i1, 1, GraphKind.POINTS, bound=2)
        assert reassign_from_flow(sol, tg, max_flow(tg.network)) == sol


class TestCutAnalysis:
    def isolated(self):
        inst = line_instance([0, 1, 2, 50, 100], k=3, ell=2)
        sol = Clustering.build(inst, ["p1", "p50", "p100"],
                               {"p0": 0, "p1": 0, "p2": 0, "p50": 1, "p100": 2})
        tg = build_threshold_graph(sol, inst, 1, GraphKind.POINTS, bound=2)
        return sol, tg, max_flow(tg.network)

    def test_isolated_deficits(self):
        _, tg, fr = self.isolated()
        cut = analyze_cut(tg, fr)
        assert cut.clusters == (1, 2)
        assert cut.k2 == 2
        assert cut.points == frozenset({"p50", "p100"})
        assert cut.adjacent == frozenset()

    def test_single_short_cluster(self):
        inst = line_instance([0, 1], k=1, ell=3)
        sol = Clustering.build(inst, ["p0"], {"p0": 0, "p1": 0})
        tg = build_threshold_graph(sol, inst, 1, GraphKind.POINTS, bound=3)
        cut = analyze_cut(tg, max_flow(tg.network))
        assert cut.k2 == 1
        assert cut.units_inside < tg.bound

    def test_special_clusters_with_outliers(self):
        inst = line_instance([0, 1, 2, 50, 100], k=2, ell=2, outliers=1)
        sol = Clustering.build(inst, ["p1", "p50"], {"p0": 0, "p1": 0, "p2": 0, "p50": 1}, outliers=["p100"])
        tg = build_threshold_graph(sol, inst, 1, GraphKind.OUTLIERS, bound=2, outlier_budget=1)
        cut = analyze_cut(tg, max_flow(tg.network))
        assert cut.clusters == (1,)
        assert cut.far_side == frozenset({cluster_node(1), unit_node("p50"), SINK})
        assert tg.network.max_capacity == 5 + 1
        assert cut.current_outliers == 1
        assert cut.units_adjacent == 0
        assert cut.is_special(["p50"])
        assert cut.is_special(["p100"])
        assert cut.is_special(["p2", "p50"])
        assert not cut.is_special(["p0", "p1", "p2"])
        assert not cut.is_special(["p2", "p100"])
        assert not cut.is_special([])

    def test_isolated_cluster_rejects_small_thresholds(self):
        inst = line_instance([0, 1, 2, 50, 100], k=2, ell=2, outliers=1)
        cs = ConstraintSet.for_variant(inst, "private-outliers")
        trace = TauTrace()
        sol = solve_private_outliers(inst, ExactSolver(), trace)
        assert [r.status for r in trace.records][:2] == ["rejected", "rejected"]
        assert check_feasible(inst, cs, sol).feasible
        assert sol.radius <= 3 * oracle_value(inst, "private-outliers", cs)

    def test_misuse(self, i1):
        sol, tg, fr = self.isolated()
        with pytest.raises(ContractViolation):
            reassign_from_flow(sol, tg, fr)
        balanced = Clustering.build(i1, ["p0", "p11"], {"p0": 0, "p1": 0, "p10": 1, "p11": 1})
        ok = build_threshold_graph(balanced, i1, 1, GraphKind.POINTS, bound=2)
        with pytest.raises(ContractViolation):
            analyze_cut(ok, max_flow(ok.network))


class TestPrivatizers:
    def test_private_outliers(self):
        inst = line_instance([0, 1, 2, 100], k=1, ell=3, outliers=1)
        sol = solve_private_outliers(inst, ExactSolver())
        assert sol.outliers == frozenset({"p100"})
        assert sol.radius == 1

    def test_private_outliers_budget_violation(self):
        inst = line_instance([0, 1, 2, 100], k=2, ell=2, outliers=1)
        with pytest.raises(InfeasibleInstanceError):
            solve_private_outliers(inst, ExactSolver())

    def test_private_kcenter_with_greedy(self, i1):
        inst = i1.with_params(ell=2)
        sol = solve_private_kcenter(inst, GonzalezSolver())
        assert sol.radius == 1
        assert check_feasible(inst, ConstraintSet.from_instance(inst, privacy=True), sol).feasible

    def test_private_capacitated(self):
        inst = line_instance([0, 1, 10, 11], k=2, ell=2, uniform_capacity=2)
        sol = solve_private_capacitated(inst, ExactSolver())
        assert sol.radius == 1
        assert sol.cluster_sizes() == (2, 2)

    @pytest.mark.parametrize("underlying", [ExactSolver(), FairletSolver()])
    def test_private_fair(self, underlying):
        inst = line_instance([0, 1, 10, 11], k=2, ell=2, colors=COLORS)
        sol = solve_private_fair(inst, underlying)
        assert sol.radius == 1
        assert {frozenset(c) for c in sol.clusters()} == {frozenset({"p0", "p1"}), frozenset({"p10", "p11"})}

    def test_private_fair_declared_factor(self):
        inst = line_instance([0, 1, 10, 11], k=2, ell=2, colors=COLORS)
        assert PrivateFairSweep(inst, FairletSolver()).factor == 10
        assert PrivateFairSweep(inst, FairletSolver(supplier=True)).factor == 11
        assert PrivateFairSweep(inst, ExactSolver()).factor == 5

    def test_private_fair_rounds_lower_bound(self):
        inst = line_instance([0, 1, 10, 11], k=2, ell=3, colors=COLORS)
        with pytest.raises(InfeasibleInstanceError):
            solve_private_fair(inst, ExactSolver())

    def test_strongly_private(self):
        inst = line_instance([0, 1, 10, 11], k=2, colors=COLORS, color_ell={"red": 1, "blue": 1})
        sol = solve_strongly_private(inst, GonzalezSolver())
        assert sol.radius == 1
        assert {frozenset(c) for c in sol.clusters()} == {frozenset({"p0", "p1"}), frozenset({"p10", "p11"})}

    def test_strongly_private_budget(self):
        inst = line_instance([0, 1, 10, 11], k=2, colors=COLORS, color_ell={"red": 2, "blue": 1})
        with pytest.raises(InfeasibleInstanceError):
            solve_strongly_private(inst, GonzalezSolver())

    def test_strongly_private_color_below_its_bound(self):
        inst = line_instance([0, 1, 2], k=1, colors={"p0": "red", "p1": "red", "p2": "blue"},
                             color_ell={"red": 1, "blue": 2})
        trace = TauTrace()
        with pytest.raises(InfeasibleInstanceError, match="fewer than"):
            solve_strongly_private(inst, GonzalezSolver(), trace)
        assert trace.records == []

    def test_private_fair_capacitated(self):
        inst = line_instance([0, 1, 10, 11], k=2, ell=2, uniform_capacity=2, colors=COLORS)
        sol = solve_private_fair_capacitated(inst)
        assert sol.radius == 1
        assert sol.cluster_sizes() == (2, 2)

    def test_private_fair_capacitated_rounding_leaves_no_room(self):
        inst = line_instance([0, 1, 10, 11], k=2, ell=1, uniform_capacity=1, colors=COLORS)
        with pytest.raises(InfeasibleInstanceError):
            solve_private_fair_capacitated(inst)


def test_tau_trace():
    inst = line_instance([0, 1, 2, 100], k=1, ell=3, outliers=1)
    trace = TauTrace()
    solve_private_outliers(inst, ExactSolver(), trace)
    statuses = [(r.tau, r.status) for r in trace.records]
    assert statuses == [("0", "rejected"), ("1", "accepted")]
    assert trace.max_iterations() == 0
    lines = [json.loads(line) for line in trace.to_jsonl().splitlines()]
    assert lines[-1]["status"] == "accepted"


def test_thresholds_accepted_from_the_optimum_up():
    rng = np.random.default_rng(4)
    settings = GeneratorSettings(max_n=6, max_locations=5)
    for trial in range(40):
        variant = ("private-kcenter", "private-outliers")[trial % 2]
        inst = random_instance(rng, variant, settings)
        cs = ConstraintSet.for_variant(inst, variant)
        best = oracle_value(inst, variant, cs)
        sweep = PrivateOutliersSweep(inst, ExactSolver(), with_outliers=variant == "private-outliers")
        for tau in candidate_radii(inst):
            if tau < best:
                continue
            result = sweep.attempt_threshold(tau)
            assert result is not None, (variant, trial, tau)
            assert result.radius <= 3 * tau
            assert check_feasible(inst, cs, result).feasible


def test_threshold_acceptance_is_monotone_on_fixed_instances(i1):
    cases = [
        (line_instance([0, 1, 2, 100], k=1, ell=3, outliers=1), True),
        (i1.with_params(ell=2), False),
    ]
    for inst, with_outliers in cases:
        sweep = PrivateOutliersSweep(inst, ExactSolver(), with_outliers=with_outliers)
        accepted = [sweep.attempt_threshold(tau) is not None for tau in candidate_radii(inst)]
        first = accepted.index(True)
        assert all(accepted[first:])


def test_round_bound_counts_clusters_and_outliers():
    inst = line_instance([0, 1, 2, 50, 100], k=2, ell=2, outliers=1)
    assert PrivateOutliersSweep(inst, ExactSolver()).max_rounds == 3 * 2
    assert PrivateOutliersSweep(inst, ExactSolver(), with_outliers=False).max_rounds == 3
