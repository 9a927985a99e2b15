"""
Underlying solvers: farthest-first, k-supplier, outliers, soft capacities, exact oracle
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent / "src"))

import numpy as np
import pytest

from conftest import line_instance
from core.errors import InfeasibleInstanceError, InstanceError, SizeCapError, UnknownNameError
from core.feasibility import check_feasible
from core.instance import VARIANT_FLAGS, ConstraintSet, Instance
from evaluation.generators import GeneratorSettings, random_instance
from evaluation.oracles import enumerate_assignments
from solvers.exact import ExactSolver, exact_solver
from solvers.gonzalez import gonzalez_kcenter
from solvers.outliers import outliers_kcenter
from solvers.registry import available, get_solver
from solvers.soft_capacitated import soft_capacitated_kcenter
from solvers.supplier import hs_ksupplier


def supplier_instance(point_coords, location_coords, k, **params) -> Instance:
    points = [f"p{c}" for c in point_coords]
    locations = [f"x{c}" for c in location_coords]
    coords = list(point_coords) + list(location_coords)
    matrix = [[abs(a - b) for b in coords] for a in coords]
    return Instance.create(points, locations, matrix, k, **params).validate()


def coincident(count, k, **params) -> Instance:
    return line_instance([0] * count, k, ids=[f"q{i}" for i in range(count)], **params)


class TestGonzalez:
    def test_farthest_first(self):
        sol = gonzalez_kcenter(line_instance([0, 4, 5], k=2), 2)
        assert sol.centers == ("p0", "p5")
        assert sol.radius == 1

    def test_i1(self, i1):
        assert gonzalez_kcenter(i1, 2).radius == 1

    def test_budget_covers_every_point(self, i3):
        assert gonzalez_kcenter(i3, 5).radius == 0

    def test_needs_center_flavor(self):
        with pytest.raises(InstanceError):
            gonzalez_kcenter(supplier_instance([0, 10], [5], k=1), 1)


class TestSupplier:
    def test_single_forced_location(self):
        sol = hs_ksupplier(supplier_instance([0, 10], [5], k=1), 1)
        assert sol.centers == ("x5",)
        assert sol.radius == 5

    def test_locations_between_points(self):
        sol = hs_ksupplier(supplier_instance([0, 2, 20, 22], [1, 21], k=2), 2)
        assert set(sol.centers) <= {"x1", "x21"}
        assert sol.radius <= 3

    def test_colocated(self):
        inst = line_instance([0, 3, 7], k=3)
        assert hs_ksupplier(inst, 3).radius == 0


class TestOutliers:
    def test_far_point_dropped(self, i3):
        sol = outliers_kcenter(i3, 1, 1)
        assert sol.outliers == frozenset({"p100"})
        assert sol.radius <= 2

    def test_no_outliers(self, i1):
        sol = outliers_kcenter(i1, 2, 0)
        assert not sol.outliers
        assert sol.radius <= 3

    def test_coincident(self):
        assert outliers_kcenter(coincident(4, 1), 1, 0).radius == 0


class TestSoftCapacitated:
    def test_one_point_per_slot(self):
        sol = soft_capacitated_kcenter(line_instance([0, 1, 10, 11], k=4), 4, 1)
        assert sol.radius == 0
        assert sol.cluster_sizes() == (1, 1, 1, 1)

    def test_two_slots(self, i1):
        sol = soft_capacitated_kcenter(i1, 2, 2)
        assert sol.size <= 2
        assert max(sol.cluster_sizes()) <= 2
        assert sol.radius <= 5

    def test_coincident(self):
        sol = soft_capacitated_kcenter(coincident(4, 1), 1, 4)
        assert sol.radius == 0

    def test_total_capacity_too_small(self, i1):
        with pytest.raises(InfeasibleInstanceError):
            soft_capacitated_kcenter(i1, 1, 3)
        cs = ConstraintSet(k=1, capacities={x: 3 for x in i1.locations})
        assert get_solver("soft-capacitated").solve(i1, cs) is None


class TestExact:
    def test_private(self, i1):
        sol = exact_solver(i1, ConstraintSet(k=2, privacy=True, ell=2))
        assert sol.radius == 1
        assert exact_solver(i1, ConstraintSet(k=2, privacy=True, ell=3)) is None

    def test_color_class_below_its_bound(self):
        inst = line_instance([0, 1, 2], k=1, colors={"p0": "red", "p1": "red", "p2": "blue"},
                             color_ell={"red": 1, "blue": 2})
        assert exact_solver(inst, ConstraintSet.for_variant(inst, "strongly-private")) is None
        relaxed = line_instance([0, 1, 2], k=1, colors={"p0": "red", "p1": "red", "p2": "blue"},
                                color_ell={"red": 1, "blue": 1})
        assert exact_solver(relaxed, ConstraintSet.for_variant(relaxed, "strongly-private")).radius == 1

    def test_fair(self, i2):
        sol = exact_solver(i2, ConstraintSet.from_instance(i2, fairness=True))
        assert sol.radius == 1
        assert check_feasible(i2, ConstraintSet.from_instance(i2, fairness=True), sol).feasible

    def test_outliers(self, i3):
        sol = exact_solver(i3, ConstraintSet(k=1, privacy=True, ell=3, outliers=True, max_outliers=1))
        assert sol.radius == 1
        assert sol.outliers == frozenset({"p100"})

    def test_size_cap(self):
        with pytest.raises(SizeCapError):
            exact_solver(line_instance(list(range(13)), k=1), ConstraintSet(k=1))

    def test_matches_assignment_enumeration(self):
        rng = np.random.default_rng(2)
        settings = GeneratorSettings(max_n=5, max_locations=4)
        variants = [v for v in VARIANT_FLAGS if v != "private-capacitated-fl"]
        for trial in range(100):
            variant = variants[trial % len(variants)]
            inst = random_instance(rng, variant, settings)
            cs = ConstraintSet.for_variant(inst, variant)
            sol = exact_solver(inst, cs)
            expected = enumerate_assignments(inst, cs)
            assert (sol.radius if sol is not None else None) == expected, (variant, trial)


def test_registry():
    assert "exact" in available()
    assert isinstance(get_solver("exact"), ExactSolver)
    with pytest.raises(UnknownNameError):
        get_solver("simulated-annealing")


def test_solver_refuses_unsupported_constraints(i1):
    with pytest.raises(InstanceError):
        get_solver("gonzalez").solve(i1, ConstraintSet(k=2, privacy=True, ell=2))
