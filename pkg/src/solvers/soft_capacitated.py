"""
Soft-capacitated k-center (uniform capacity, several slots per location).

Per threshold tau the points are split into empires: monarchs form a
maximal 2*tau-separated set grown so that every new monarch lies within
3*tau of one already chosen (its parent), and each point joins its nearest
monarch. Slots are opened at monarchs only. A monarch may hand some of its
own empire to its parent, so every point ends within 2*tau + 3*tau of its
slot; a tree DP picks the hand-over amounts that minimize the slot count.
The first tau whose minimum fits in k slots is accepted.
"""
from fractions import Fraction
from math import ceil
from typing import Dict, List, Optional, Tuple

from core.errors import ContractViolation, InfeasibleInstanceError, InstanceError, ensure
from core.instance import Clustering, ConstraintSet, Instance, candidate_radii
from solvers.base_solver import ConstrainedSolver, require_center_flavor
from utils import console


def _monarch_forest(inst: Instance, tau: Fraction) -> Tuple[List[str], Dict[str, Optional[str]]]:
    monarchs: List[str] = []
    parent: Dict[str, Optional[str]] = {}
    while True:
        free = [p for p in inst.points if all(inst.d(p, m) > 2 * tau for m in monarchs)]
        if not free:
            return monarchs, parent
        linked = None
        for p in free:
            near = [m for m in monarchs if inst.d(p, m) <= 3 * tau]
            if near:
                linked = (p, min(near, key=lambda m: (inst.d(p, m), monarchs.index(m))))
                break
        if linked is None:
            linked = (free[0], None)
        monarchs.append(linked[0])
        parent[linked[0]] = linked[1]


def _empires(inst: Instance, monarchs: List[str]) -> Dict[str, List[str]]:
    empires: Dict[str, List[str]] = {m: [] for m in monarchs}
    for p in inst.points:
        home = min(monarchs, key=lambda m: (inst.d(p, m), monarchs.index(m)))
        empires[home].append(p)
    return empires


def _slots(count: int, cap: int) -> int:
    return ceil(count / cap) if count else 0


def _plan_handover(
    monarchs: List[str],
    parent: Dict[str, Optional[str]],
    empires: Dict[str, List[str]],
    cap: int,
) -> Tuple[int, Dict[str, int]]:
    """
    Tree DP. best[m][y] = fewest slots in m's subtree when m hands y of its
    own empire points to its parent. Returns (total slots, hand-over per monarch).
    """
    children: Dict[str, List[str]] = {m: [] for m in monarchs}
    for m in monarchs:
        if parent[m] is not None:
            children[parent[m]].append(m)

    best: Dict[str, List[int]] = {}
    # received[m][Y] = (fewest slots over children, per-child hand-over) with sum Y
    received: Dict[str, Dict[int, Tuple[int, Tuple[int, ...]]]] = {}

    # monarchs are appended after their parent, so reverse order is a post-order
    for m in reversed(monarchs):
        table: Dict[int, Tuple[int, Tuple[int, ...]]] = {0: (0, ())}
        for c in children[m]:
            merged: Dict[int, Tuple[int, Tuple[int, ...]]] = {}
            for total, (cost, picks) in table.items():
                for y, child_cost in enumerate(best[c]):
                    key = total + y
                    candidate = (cost + child_cost, picks + (y,))
                    if key not in merged or candidate < merged[key]:
                        merged[key] = candidate
            table = merged
        received[m] = table
        own = len(empires[m])
        limit = own if parent[m] is not None else 0
        row = []
        for y in range(limit + 1):
            row.append(min(cost + _slots(own - y + incoming, cap) for incoming, (cost, _) in table.items()))
        best[m] = row

    handover: Dict[str, int] = {}
    total = 0

    def settle(m: str, y: int) -> None:
        own = len(empires[m])
        handover[m] = y
        target = best[m][y]
        choice = min(
            (incoming for incoming, (cost, _) in received[m].items()
             if cost + _slots(own - y + incoming, cap) == target),
        )
        for c, y_child in zip(children[m], received[m][choice][1]):
            settle(c, y_child)

    for m in monarchs:
        if parent[m] is None:
            total += best[m][0]
            settle(m, 0)
    return total, handover


def soft_capacitated_kcenter(inst: Instance, k: int, cap: int) -> Clustering:
    """
    Returns at most k slots, each serving at most `cap` points; a location may
    host several slots. Radius at most 5*tau for the accepted tau.

    Raises:
        InstanceError: k <= 0 or cap <= 0, or some point is not a location
        InfeasibleInstanceError: k * cap < |P|
    """
    if k <= 0 or cap <= 0:
        raise InstanceError(f"k and the soft capacity must be positive (k={k}, cap={cap})")
    require_center_flavor(inst, "soft_capacitated_kcenter")
    if k * cap < inst.n:
        raise InfeasibleInstanceError(f"k*cap = {k * cap} < |P| = {inst.n}")
    if not inst.points:
        return Clustering.empty()
    rank = inst.point_order()

    for tau in candidate_radii(inst):
        monarchs, parent = _monarch_forest(inst, tau)
        empires = _empires(inst, monarchs)
        total, handover = _plan_handover(monarchs, parent, empires, cap)
        if total > k:
            continue

        pools: Dict[str, List[str]] = {m: [] for m in monarchs}
        for m in monarchs:
            own = empires[m]
            y = handover[m]
            if y:
                up = parent[m]
                passed = sorted(own, key=lambda p: (inst.d(p, up), rank[p]))[:y]
                pools[up].extend(passed)
                pools[m].extend(p for p in own if p not in passed)
            else:
                pools[m].extend(own)

        centers: List[str] = []
        assignment: Dict[str, int] = {}
        for m in monarchs:
            pool = sorted(pools[m], key=rank.__getitem__)
            for start in range(0, len(pool), cap):
                slot = len(centers)
                centers.append(m)
                for p in pool[start:start + cap]:
                    assignment[p] = slot
        sol = Clustering.build(inst, centers, assignment)
        ensure(sol.size <= k, "soft_capacitated_kcenter opened too many slots")
        ensure(sol.radius <= 5 * tau, f"soft_capacitated_kcenter radius {sol.radius} > 5*{tau}")
        console.trace(f"soft_capacitated_kcenter accepted tau={tau} with {sol.size} slots")
        return sol
    raise ContractViolation("soft_capacitated_kcenter accepted no threshold")


class SoftCapacitatedSolver(ConstrainedSolver):
    """Uniform soft capacities, alpha = 5; cluster capacity is read from the constraint set"""

    def __init__(self):
        super().__init__(name="soft-capacitated", factor=Fraction(5), supports=[frozenset({"capacities"})])

    def _solve(self, inst: Instance, cs: ConstraintSet) -> Optional[Clustering]:
        caps = {cs.capacities[x] for x in inst.locations}
        if len(caps) != 1:
            raise InstanceError("soft-capacitated needs a uniform capacity")
        try:
            return soft_capacitated_kcenter(inst, cs.k, caps.pop())
        except InfeasibleInstanceError:
            return None
