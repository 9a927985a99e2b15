"""
Farthest-first traversal: the 2-approximation for vanilla k-center.
"""
from fractions import Fraction
from typing import List, Optional

from core.errors import InstanceError
from core.instance import Clustering, ConstraintSet, Instance
from solvers.base_solver import ConstrainedSolver, assign_to_nearest, require_center_flavor


def gonzalez_kcenter(inst: Instance, k: int) -> Clustering:
    """
    Start at the lowest-index point and repeatedly open the point farthest
    from the open centers (ties to the lowest index), k times at most.

    Raises:
        InstanceError: k <= 0, or some point is not a location
    """
    if k <= 0:
        raise InstanceError(f"k must be positive, got {k}")
    require_center_flavor(inst, "gonzalez_kcenter")
    if not inst.points:
        return Clustering.empty()

    centers: List[str] = [inst.points[0]]
    nearest = {p: inst.d(p, centers[0]) for p in inst.points}
    while len(centers) < k:
        far_point, far = None, Fraction(0)
        for p in inst.points:
            if nearest[p] > far:
                far_point, far = p, nearest[p]
        if far_point is None:
            # every point already sits on a center
            break
        centers.append(far_point)
        for p in inst.points:
            value = inst.d(p, far_point)
            if value < nearest[p]:
                nearest[p] = value
    return Clustering.build(inst, centers, assign_to_nearest(inst, centers))


class GonzalezSolver(ConstrainedSolver):
    """Vanilla k-center, alpha = 2"""

    def __init__(self):
        super().__init__(name="gonzalez", factor=Fraction(2), supports=[frozenset()])

    def _solve(self, inst: Instance, cs: ConstraintSet) -> Optional[Clustering]:
        return gonzalez_kcenter(inst, cs.k)
