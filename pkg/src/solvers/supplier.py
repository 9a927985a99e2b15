"""
Threshold 3-approximation for k-supplier.
"""
from fractions import Fraction
from typing import List, Optional

from core.errors import ContractViolation, InstanceError
from core.instance import Clustering, ConstraintSet, Instance, candidate_radii
from solvers.base_solver import ConstrainedSolver, assign_to_nearest
from utils import console


def _separated_points(inst: Instance, tau: Fraction) -> List[str]:
    """Greedy maximal subset of P with pairwise distances > 2*tau, scanned in index order."""
    chosen: List[str] = []
    for p in inst.points:
        if all(inst.d(p, q) > 2 * tau for q in chosen):
            chosen.append(p)
    return chosen


def _nearest_location(inst: Instance, p: str) -> tuple:
    best, best_value = None, None
    for x in inst.locations:
        value = inst.d(p, x)
        if best_value is None or value < best_value:
            best, best_value = x, value
    return best, best_value


def hs_ksupplier(inst: Instance, k: int) -> Clustering:
    """
    For tau over candidate_radii ascending: pick a maximal 2*tau-separated
    point set S, open the nearest location of every s in S (it must lie
    within tau), assign points to the nearest opened location and accept
    the first tau with |S| <= k and every point within 3*tau.

    Raises:
        InstanceError: k <= 0
        ContractViolation: no threshold was accepted
    """
    if k <= 0:
        raise InstanceError(f"k must be positive, got {k}")
    if not inst.points:
        return Clustering.empty()
    for tau in candidate_radii(inst):
        separated = _separated_points(inst, tau)
        if len(separated) > k:
            continue
        centers: List[str] = []
        for s in separated:
            x, value = _nearest_location(inst, s)
            if value > tau:
                break
            if x not in centers:
                centers.append(x)
        else:
            assignment = assign_to_nearest(inst, centers)
            sol = Clustering.build(inst, centers, assignment)
            if sol.radius <= 3 * tau:
                console.trace(f"hs_ksupplier accepted tau={tau} with {sol.size} centers")
                return sol
    raise ContractViolation("hs_ksupplier accepted no threshold")


class SupplierSolver(ConstrainedSolver):
    """Vanilla k-supplier, alpha = 3"""

    def __init__(self):
        super().__init__(name="hs-supplier", factor=Fraction(3), supports=[frozenset()])

    def _solve(self, inst: Instance, cs: ConstraintSet) -> Optional[Clustering]:
        return hs_ksupplier(inst, cs.k)
