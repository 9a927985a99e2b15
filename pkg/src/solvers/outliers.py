"""
Greedy disk covering: the 3-approximation for k-center with outliers.
"""
from fractions import Fraction
from typing import List, Optional

from core.errors import ContractViolation, InstanceError
from core.instance import Clustering, ConstraintSet, Instance, candidate_radii
from solvers.base_solver import ConstrainedSolver, assign_to_nearest, require_center_flavor
from utils import console


def _cover_at(inst: Instance, k: int, tau: Fraction) -> tuple:
    """k greedy rounds at threshold tau; returns (centers, still-uncovered points)."""
    uncovered = list(inst.points)
    centers: List[str] = []
    for _ in range(k):
        if not uncovered:
            break
        remaining = set(uncovered)
        best, best_count = None, -1
        for p in inst.points:
            count = sum(1 for q in remaining if inst.d(p, q) <= tau)
            if count > best_count:
                best, best_count = p, count
        centers.append(best)
        uncovered = [q for q in uncovered if inst.d(best, q) > 3 * tau]
    return centers, uncovered


def outliers_kcenter(inst: Instance, k: int, o: int) -> Clustering:
    """
    For tau ascending: k times open the point whose tau-disk covers the most
    uncovered points and discard its 3*tau-expansion; accept the first tau that
    leaves at most o points uncovered, which become the outliers.

    At least one center is opened whenever P is nonempty, even when o >= |P|.

    Raises:
        InstanceError: k <= 0, o < 0, or some point is not a location
    """
    if k <= 0:
        raise InstanceError(f"k must be positive, got {k}")
    if o < 0:
        raise InstanceError(f"Outlier budget must be nonnegative, got {o}")
    require_center_flavor(inst, "outliers_kcenter")
    if not inst.points:
        return Clustering.empty()
    for tau in candidate_radii(inst):
        centers, uncovered = _cover_at(inst, k, tau)
        if len(uncovered) > o:
            continue
        outliers = set(uncovered)
        covered = inst.restrict([p for p in inst.points if p not in outliers])
        assignment = assign_to_nearest(covered, centers)
        console.trace(f"outliers_kcenter accepted tau={tau}, {len(outliers)} outliers")
        return Clustering.build(inst, centers, assignment, outliers)
    # the largest candidate covers everything with a single disk
    raise ContractViolation("outliers_kcenter accepted no threshold")


class OutliersSolver(ConstrainedSolver):
    """k-center with outliers, alpha = 3 (plain k-center when o = 0)"""

    def __init__(self):
        super().__init__(
            name="outliers-greedy",
            factor=Fraction(3),
            supports=[frozenset(), frozenset({"outliers"})],
        )

    def _solve(self, inst: Instance, cs: ConstraintSet) -> Optional[Clustering]:
        return outliers_kcenter(inst, cs.k, cs.max_outliers if cs.outliers else 0)
