"""
Acceptance sweeps: feasibility on every variant, factors against the exact oracle
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent / "src"))

import numpy as np
import pytest

from core.instance import ConstraintSet
from evaluation.bench import VARIANTS, BenchSettings, run_bench
from evaluation.generators import GeneratorSettings, random_instance
from solvers.exact import exact_solver
from solvers.gonzalez import gonzalez_kcenter
from solvers.outliers import outliers_kcenter
from solvers.soft_capacitated import soft_capacitated_kcenter
from solvers.supplier import hs_ksupplier


def single_variant(tmp_path, variant, **settings):
    report = run_bench(BenchSettings(variants=(variant,), replay_dir=tmp_path, **settings))
    assert report.replays == [], report.replays
    [summary] = report.variants
    return summary


@pytest.mark.parametrize("variant", VARIANTS)
def test_feasibility_sweep(tmp_path, variant):
    summary = single_variant(tmp_path, variant, trials=200, seed=5, max_n=8, with_oracle=False)
    assert summary.trials == 200
    assert summary.breaches == 0
    assert summary.capped == 0
    assert summary.solved > 0


@pytest.mark.parametrize("variant", VARIANTS)
def test_factor_certification(tmp_path, variant):
    summary = single_variant(tmp_path, variant, trials=60, seed=11, max_n=9)
    assert summary.breaches == 0
    assert summary.solved > 0
    if summary.iteration_bound is not None:
        assert summary.max_iterations <= summary.iteration_bound


@pytest.mark.parametrize("variant", ["private-kcenter", "private-outliers", "private-capacitated"])
def test_exact_underlying_within_three(tmp_path, variant):
    summary = single_variant(tmp_path, variant, trials=30, seed=2, max_n=7, underlying="exact")
    assert summary.breaches == 0
    assert summary.declared_factor == "3"


class TestUnderlyingFactors:
    settings = GeneratorSettings(max_n=8)

    def instances(self, variant, seed, count=40):
        rng = np.random.default_rng(seed)
        return [random_instance(rng, variant, self.settings) for _ in range(count)]

    def test_farthest_first_and_supplier(self):
        for inst in self.instances("kcenter", 31):
            best = exact_solver(inst, ConstraintSet(k=inst.k)).radius
            assert hs_ksupplier(inst, inst.k).radius <= 3 * best
            if inst.center_flavor:
                assert gonzalez_kcenter(inst, inst.k).radius <= 2 * best

    def test_greedy_disks(self):
        for inst in self.instances("outliers", 32):
            if not inst.center_flavor:
                continue
            best = exact_solver(inst, ConstraintSet.for_variant(inst, "outliers")).radius
            sol = outliers_kcenter(inst, inst.k, inst.outliers)
            assert len(sol.outliers) <= inst.outliers
            assert sol.radius <= 3 * best

    def test_soft_capacities_against_hard_optimum(self):
        checked = 0
        for inst in self.instances("capacitated", 33, count=60):
            if not inst.center_flavor or inst.uniform_capacity is None:
                continue
            best = exact_solver(inst, ConstraintSet.for_variant(inst, "capacitated")).radius
            sol = soft_capacitated_kcenter(inst, inst.k, inst.uniform_capacity)
            assert max(sol.cluster_sizes()) <= inst.uniform_capacity
            assert sol.radius <= 5 * best
            checked += 1
        assert checked > 0
