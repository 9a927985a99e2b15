"""
Variant dispatch: maps a variant id and an optional underlying id to the
routine that solves it, and verifies what comes back.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from core.errors import ContractViolation, InfeasibleInstanceError, UnknownNameError
from core.feasibility import Verdict, check_feasible
from core.instance import VARIANT_FLAGS, Clustering, ConstraintSet, Instance
from evaluation.ledger import GuaranteeLedger
from facility.facility_location import FLSolution, brute_force_private_fl, privatize_fl
from privacy.framework import TauTrace
from privacy.variants import (
    solve_private_capacitated,
    solve_private_fair,
    solve_private_fair_capacitated,
    solve_private_kcenter,
    solve_private_outliers,
    solve_strongly_private,
)
from solvers.base_solver import ConstrainedSolver
from solvers.registry import get_solver
from utils import console

FACILITY_VARIANT = "private-capacitated-fl"

# (center flavor, supplier flavor)
DEFAULT_UNDERLYING: Dict[str, Tuple[str, str]] = {
    "kcenter": ("gonzalez", "hs-supplier"),
    "outliers": ("outliers-greedy", "exact"),
    "capacitated": ("exact", "exact"),
    "fair": ("fair-fairlet-center", "fair-fairlet-supplier"),
    "fair-capacitated": ("exact", "exact"),
    "private-kcenter": ("gonzalez", "hs-supplier"),
    "private-outliers": ("outliers-greedy", "exact"),
    "private-capacitated": ("exact", "exact"),
    "private-fair": ("fair-fairlet-center", "fair-fairlet-supplier"),
    "private-fair-capacitated": ("exact", "exact"),
    "strongly-private": ("gonzalez", "hs-supplier"),
}

SWEEPS: Dict[str, Callable[..., Clustering]] = {
    "private-kcenter": solve_private_kcenter,
    "private-outliers": solve_private_outliers,
    "private-capacitated": solve_private_capacitated,
    "private-fair": solve_private_fair,
    "strongly-private": solve_strongly_private,
}

ledger = GuaranteeLedger()


@dataclass(frozen=True)
class Outcome:
    """Result of one dispatched run: a clustering, or a facility-location solution."""
    variant: str
    underlying: Optional[str]
    factor: Fraction
    clustering: Clustering
    facility: Optional[FLSolution] = None

    @property
    def value(self) -> Fraction:
        """Radius, or total cost for facility location"""
        return self.facility.total if self.facility is not None else self.clustering.radius

    def costs(self) -> Optional[Dict[str, Fraction]]:
        return self.facility.costs() if self.facility is not None else None


def default_underlying(variant: str, inst: Instance) -> Optional[str]:
    if variant == FACILITY_VARIANT:
        return None
    if variant not in DEFAULT_UNDERLYING:
        raise UnknownNameError(f"Unknown variant: {variant}")
    center, supplier = DEFAULT_UNDERLYING[variant]
    return center if inst.center_flavor else supplier


def constraints_for(inst: Instance, variant: str) -> ConstraintSet:
    """Full constraint set of variant; facility location does not bound the number of opens."""
    cs = ConstraintSet.for_variant(inst, variant)
    if variant == FACILITY_VARIANT:
        cs = cs.with_budget(max(inst.k, inst.n))
    return cs


def verify(inst: Instance, variant: str, sol: Clustering) -> Verdict:
    return check_feasible(inst, constraints_for(inst, variant), sol)


def _solve_facility(inst: Instance) -> Outcome:
    base = brute_force_private_fl(inst, capacitated=False)
    if base is None:
        raise InfeasibleInstanceError(f"{FACILITY_VARIANT}: no private base solution")
    hard = privatize_fl(inst, base)
    return Outcome(FACILITY_VARIANT, None, ledger.declared(FACILITY_VARIANT, None, inst),
                   hard.to_clustering(inst), hard)


def _solve_with(inst: Instance, variant: str, solver: ConstrainedSolver,
                trace: Optional[TauTrace]) -> Clustering:
    if variant in SWEEPS:
        return SWEEPS[variant](inst, solver, trace)
    if variant == "private-fair-capacitated":
        return solve_private_fair_capacitated(inst, solver)
    sol = solver.solve(inst, ConstraintSet.for_variant(inst, variant))
    if sol is None:
        raise InfeasibleInstanceError(f"{variant}: {solver.name} found no clustering")
    return sol


def run_variant(inst: Instance, variant: str, underlying: Optional[str] = None,
                trace: Optional[TauTrace] = None) -> Outcome:
    """
    Solve inst for variant, with underlying (registry id) or the variant's default.

    Raises:
        UnknownNameError: unknown variant or underlying id
        InfeasibleInstanceError: no clustering exists or none was found
        SizeCapError: exact routines above their caps
        ContractViolation: the result fails its own constraint check
    """
    if variant not in VARIANT_FLAGS:
        raise UnknownNameError(f"Unknown variant: {variant}")
    if variant == FACILITY_VARIANT:
        outcome = _solve_facility(inst)
    else:
        name = underlying or default_underlying(variant, inst)
        solver = get_solver(name)
        sol = _solve_with(inst, variant, solver, trace)
        outcome = Outcome(variant, name, ledger.declared(variant, solver, inst), sol)

    verdict = verify(inst, variant, outcome.clustering)
    if not verdict.feasible:
        raise ContractViolation(f"{variant} returned an infeasible clustering: {verdict.describe()}")
    console.debug(f"{variant}[{outcome.underlying}]: value {outcome.value}, declared factor {outcome.factor}")
    return outcome
