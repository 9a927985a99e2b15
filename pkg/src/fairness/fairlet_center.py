"""
Fair k-center / k-supplier by composing the fair subset partition with a
vanilla solver run on the fairlet representatives.
"""
from fractions import Fraction
from typing import Dict, List, Optional

from core.errors import InfeasibleInstanceError, InstanceError
from core.instance import Clustering, ConstraintSet, Instance, fair_structure
from fairness.fair_partition import FairStructure, fair_subset_partition
from solvers.base_solver import ConstrainedSolver
from solvers.gonzalez import gonzalez_kcenter
from solvers.supplier import hs_ksupplier


def fair_center_via_fairlets(
    inst: Instance,
    k: int,
    supplier: bool = False,
    structure: Optional[FairStructure] = None,
) -> Clustering:
    """
    Cluster the fairlet representatives with farthest-first (center flavor)
    or the k-supplier threshold algorithm, then move every fairlet wholly
    to its representative's center.

    Args:
        inst: Colored instance
        k: Center budget, at most n / b
        supplier: Use the k-supplier algorithm on the representatives
        structure: Precomputed partition of inst (computed when omitted)

    Returns:
        Fair clustering whose `blocks` are the fairlets

    Raises:
        InfeasibleInstanceError: k > n / b
    """
    if k <= 0:
        raise InstanceError(f"k must be positive, got {k}")
    if structure is None:
        structure = fair_subset_partition(inst)
    groups = len(structure.subsets)
    if k > groups:
        raise InfeasibleInstanceError(f"k = {k} exceeds the number of fairlets n/b = {groups}")

    distinct: List[str] = []
    for y in structure.representatives:
        if y not in distinct:
            distinct.append(y)
    rep_inst = inst.restrict(distinct)
    if supplier:
        on_reps = hs_ksupplier(rep_inst, k)
    else:
        on_reps = gonzalez_kcenter(rep_inst, k)

    assignment: Dict[str, int] = {}
    for y, subset in zip(structure.representatives, structure.subsets):
        slot = on_reps.assignment[y]
        for p in subset:
            assignment[p] = slot
    return Clustering.build(inst, on_reps.centers, assignment, blocks=structure.subsets)


class FairletSolver(ConstrainedSolver):
    """Fair k-center (beta + 2) or fair k-supplier (beta + 3) on top of the fair subset partition"""

    def __init__(self, supplier: bool = False):
        super().__init__(
            name="fair-fairlet-supplier" if supplier else "fair-fairlet-center",
            factor=Fraction(15 if supplier else 14),
            supports=[frozenset({"fairness"})],
            fair_partition_factor=Fraction(12),
        )
        self.supplier = supplier

    def partition_factor(self, inst: Instance) -> Fraction:
        return Fraction(2) if fair_structure(inst).unit_quota else Fraction(12)

    def factor_for(self, inst: Instance) -> Fraction:
        return self.partition_factor(inst) + (3 if self.supplier else 2)

    def _solve(self, inst: Instance, cs: ConstraintSet) -> Optional[Clustering]:
        try:
            return fair_center_via_fairlets(inst, cs.k, self.supplier)
        except InfeasibleInstanceError:
            return None
