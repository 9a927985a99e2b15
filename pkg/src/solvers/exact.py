"""
Exact solver for oracle-sized instances.

Enumerates center subsets (distinct locations, hard capacities) of size at
most k and decides assignment feasibility with flows:
  - privacy / capacities / outliers: one flow with lower and upper bounds;
  - fairness: per-color flows once every cluster's multiple of b is fixed;
  - strong privacy: one lower-bounded flow per color.
The optimal radius is found by binary search over candidate_radii. Also
serves as an alpha = 1 underlying solver.
"""
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, Optional, Sequence, Tuple

from config import SolverConfig
from core.errors import InstanceError, SizeCapError
from core.instance import Clustering, ConstraintSet, Instance, candidate_radii, fair_structure
from kernels.flow import FlowNetwork, bounded_flow, max_flow
from solvers.base_solver import ConstrainedSolver

SOURCE = ("s",)
SINK = ("t",)
OUT = ("out",)

Found = Tuple[Tuple[str, ...], Dict[str, int], Tuple[str, ...]]


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Positive integer tuples of length `parts` summing to `total`, lexicographic."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _check_caps(inst: Instance, k: int) -> None:
    if inst.n > SolverConfig.EXACT_MAX_POINTS:
        raise SizeCapError(f"exact solver: |P| = {inst.n} exceeds cap {SolverConfig.EXACT_MAX_POINTS}")
    if len(inst.locations) > SolverConfig.EXACT_MAX_LOCATIONS:
        raise SizeCapError(
            f"exact solver: |L| = {len(inst.locations)} exceeds cap {SolverConfig.EXACT_MAX_LOCATIONS}"
        )
    if k > SolverConfig.EXACT_MAX_K:
        raise SizeCapError(f"exact solver: k = {k} exceeds cap {SolverConfig.EXACT_MAX_K}")


class _Decider:
    """Feasibility of (center subset, radius) for one constraint set."""

    def __init__(self, inst: Instance, cs: ConstraintSet):
        self.inst = inst
        self.cs = cs
        self.budget = cs.max_outliers if cs.outliers else 0
        self.quotas = fair_structure(inst).quotas if cs.fairness else None
        self.classes = inst.color_classes() if (cs.fairness or cs.strong_privacy) else None

    def upper(self, center: str) -> int:
        if self.cs.capacities is not None:
            return self.cs.capacities.get(center, self.inst.n)
        return self.inst.n

    def decide(self, centers: Tuple[str, ...], r: Fraction) -> Optional[Found]:
        inst = self.inst
        uncovered = [p for p in inst.points if all(inst.d(p, c) > r for c in centers)]
        if len(uncovered) > self.budget:
            return None
        if self.cs.fairness:
            return self._fair(centers, r)
        if self.cs.strong_privacy:
            return self._per_color(centers, r)
        return self._general(centers, r)

    def _general(self, centers: Tuple[str, ...], r: Fraction) -> Optional[Found]:
        inst, cs = self.inst, self.cs
        slots = [("c", i) for i in range(len(centers))]
        nodes = [SOURCE] + [("p", p) for p in inst.points] + slots + [OUT, SINK]
        bounds = {}
        for p in inst.points:
            bounds[(SOURCE, ("p", p))] = (1, 1)
            for i, c in enumerate(centers):
                if inst.d(p, c) <= r:
                    bounds[(("p", p), ("c", i))] = (0, 1)
            if self.budget:
                bounds[(("p", p), OUT)] = (0, 1)
        if self.budget:
            bounds[(OUT, SINK)] = (0, self.budget)
        lower = cs.ell if cs.privacy else 0
        for i, c in enumerate(centers):
            bounds[(("c", i), SINK)] = (lower, self.upper(c))
        flow = bounded_flow(nodes, SOURCE, SINK, bounds)
        if flow is None:
            return None
        assignment, outliers = {}, []
        for p in inst.points:
            slot = next((i for i in range(len(centers)) if flow.get((("p", p), ("c", i)), 0) == 1), None)
            if slot is None:
                outliers.append(p)
            else:
                assignment[p] = slot
        return centers, assignment, tuple(outliers)

    def _per_color(self, centers: Tuple[str, ...], r: Fraction) -> Optional[Found]:
        inst = self.inst
        bounds_by_color = self.cs.color_ell or {}
        assignment: Dict[str, int] = {}
        for color, members in self.classes.items():
            lower = bounds_by_color.get(color, 0)
            if len(members) < lower:
                return None
            if not members:
                continue
            nodes = [SOURCE] + [("p", p) for p in members] + [("c", i) for i in range(len(centers))] + [SINK]
            bounds = {}
            for p in members:
                bounds[(SOURCE, ("p", p))] = (1, 1)
                for i, c in enumerate(centers):
                    if inst.d(p, c) <= r:
                        bounds[(("p", p), ("c", i))] = (0, 1)
            for i in range(len(centers)):
                bounds[(("c", i), SINK)] = (lower, len(members))
            flow = bounded_flow(nodes, SOURCE, SINK, bounds)
            if flow is None:
                return None
            for p in members:
                assignment[p] = next(i for i in range(len(centers)) if flow.get((("p", p), ("c", i)), 0) == 1)
        return centers, assignment, ()

    def _fair(self, centers: Tuple[str, ...], r: Fraction) -> Optional[Found]:
        inst, cs = self.inst, self.cs
        block = sum(self.quotas.values())
        groups = inst.n // block
        for multiples in _compositions(groups, len(centers)):
            sizes = [block * m for m in multiples]
            if cs.privacy and any(size < cs.ell for size in sizes):
                continue
            if any(size > self.upper(c) for size, c in zip(sizes, centers)):
                continue
            assignment = self._fair_assign(centers, r, multiples)
            if assignment is not None:
                return centers, assignment, ()
        return None

    def _fair_assign(self, centers: Tuple[str, ...], r: Fraction,
                     multiples: Sequence[int]) -> Optional[Dict[str, int]]:
        inst = self.inst
        assignment: Dict[str, int] = {}
        for color, members in self.classes.items():
            quota = self.quotas[color]
            nodes = [SOURCE] + [("p", p) for p in members] + [("c", i) for i in range(len(centers))] + [SINK]
            caps = {}
            for p in members:
                caps[(SOURCE, ("p", p))] = 1
                for i, c in enumerate(centers):
                    if inst.d(p, c) <= r:
                        caps[(("p", p), ("c", i))] = 1
            for i, m in enumerate(multiples):
                caps[(("c", i), SINK)] = quota * m
            fr = max_flow(FlowNetwork(tuple(nodes), SOURCE, SINK, caps))
            if fr.value < len(members):
                return None
            for p in members:
                assignment[p] = next(i for i in range(len(centers)) if fr.on(("p", p), ("c", i)) == 1)
        return assignment


def exact_solver(
    inst: Instance,
    cs: ConstraintSet,
    k: Optional[int] = None,
    o: Optional[int] = None,
) -> Optional[Clustering]:
    """
    Optimal clustering for cs over at most k distinct centers, or None.

    Args:
        inst: Instance within the configured size caps
        cs: Constraint set (any supported shape, privacy included)
        k: Budget override (default cs.k)
        o: Outlier budget override (default cs.max_outliers)

    Returns:
        Minimum-radius feasible clustering; None when none exists or when a
        privacy budget violates k * ell <= |P| - o

    Raises:
        SizeCapError: the instance exceeds the configured caps
    """
    k = cs.k if k is None else k
    if k <= 0:
        raise InstanceError(f"k must be positive, got {k}")
    if cs.outliers:
        cs = cs.with_budget(k, cs.max_outliers if o is None else o)
    else:
        cs = cs.with_budget(k)
    _check_caps(inst, k)
    if not inst.points:
        return Clustering.empty()
    budget = cs.max_outliers if cs.outliers else 0
    if cs.privacy and k * cs.ell > inst.n - budget:
        return None

    decider = _Decider(inst, cs)
    subsets = [
        subset
        for size in range(1, min(k, len(inst.locations)) + 1)
        for subset in combinations(inst.locations, size)
    ]

    def feasible(r: Fraction) -> Optional[Found]:
        for subset in subsets:
            found = decider.decide(subset, r)
            if found is not None:
                return found
        return None

    radii = candidate_radii(inst)
    best = feasible(radii[-1])
    if best is None:
        return None
    lo, hi = 0, len(radii) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        found = feasible(radii[mid])
        if found is not None:
            hi, best = mid, found
        else:
            lo = mid + 1
    # best was found at radii[hi] and hi == lo
    centers, assignment, outliers = best
    return Clustering.build(inst, centers, assignment, outliers)


class ExactSolver(ConstrainedSolver):
    """Exhaustive oracle, alpha = 1, every supported shape with or without privacy"""

    def __init__(self):
        shapes = [frozenset(), frozenset({"outliers"}), frozenset({"capacities"}),
                  frozenset({"fairness"}), frozenset({"fairness", "capacities"})]
        super().__init__(
            name="exact",
            factor=Fraction(1),
            supports=shapes,
            handles_privacy=True,
            handles_strong_privacy=True,
        )

    def _solve(self, inst: Instance, cs: ConstraintSet) -> Optional[Clustering]:
        return exact_solver(inst, cs)
