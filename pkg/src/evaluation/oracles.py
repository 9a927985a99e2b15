"""
Brute-force certificates used by the tests and the bench.

Nothing here is clever: every routine enumerates its whole search space and
is only meant for desk-scale inputs.
"""
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from core.errors import SizeCapError
from core.feasibility import check_feasible
from core.instance import Clustering, ConstraintSet, Instance, fair_structure
from facility.facility_location import brute_force_private_fl
from kernels.flow import FlowNetwork, cut_capacity
from solvers.exact import exact_solver

ENUMERATION_MAX_POINTS = 6
MIN_CUT_MAX_NODES = 12
PARTITION_MAX_POINTS = 10


def oracle_value(inst: Instance, variant: str, cs: ConstraintSet) -> Optional[Fraction]:
    """
    Optimal radius (or facility-location cost) for the variant, None when infeasible.

    Raises:
        SizeCapError: the instance is too large for the exact routines
    """
    if variant == "private-capacitated-fl":
        best = brute_force_private_fl(inst, capacitated=True)
        return best.total if best is not None else None
    best = exact_solver(inst, cs)
    return best.radius if best is not None else None


def enumerate_assignments(inst: Instance, cs: ConstraintSet) -> Optional[Fraction]:
    """
    Optimal radius by trying every map P -> L + {outlier}; one slot per location.

    Raises:
        SizeCapError: more than ENUMERATION_MAX_POINTS points
    """
    if inst.n > ENUMERATION_MAX_POINTS:
        raise SizeCapError(f"assignment enumeration: |P| = {inst.n} > {ENUMERATION_MAX_POINTS}")
    budget = cs.max_outliers if cs.outliers else 0
    choices: List[Optional[str]] = list(inst.locations) + ([None] if budget else [])
    best: Optional[Fraction] = None
    for image in product(choices, repeat=inst.n):
        outliers = [p for p, x in zip(inst.points, image) if x is None]
        if len(outliers) > budget:
            continue
        radius = max((inst.d(p, x) for p, x in zip(inst.points, image) if x is not None), default=Fraction(0))
        if best is not None and radius >= best:
            continue
        centers = list(dict.fromkeys(x for x in image if x is not None))
        if len(centers) > cs.k:
            continue
        slot = {x: i for i, x in enumerate(centers)}
        assignment = {p: slot[x] for p, x in zip(inst.points, image) if x is not None}
        sol = Clustering.build(inst, centers, assignment, outliers)
        if check_feasible(inst, cs, sol).feasible:
            best = radius
    return best


def min_cut_brute_force(net: FlowNetwork) -> int:
    """Minimum s-t cut capacity over every split of the inner nodes."""
    inner = [v for v in net.nodes if v not in (net.source, net.sink)]
    if len(inner) + 2 > MIN_CUT_MAX_NODES:
        raise SizeCapError(f"min-cut enumeration: {len(inner) + 2} nodes > {MIN_CUT_MAX_NODES}")
    best: Optional[int] = None
    for mask in range(1 << len(inner)):
        far = frozenset([net.sink] + [v for i, v in enumerate(inner) if mask >> i & 1])
        value = cut_capacity(net, far)
        if best is None or value < best:
            best = value
    return best if best is not None else 0


def _subset_radius(inst: Instance, subset: Sequence[str]) -> Fraction:
    return min(max(inst.d(y, p) for p in subset) for y in subset)


def _fair_subsets(remaining: Tuple[str, ...], colors: Dict[str, str],
                  quotas: Dict[str, int]) -> Iterator[List[Tuple[str, ...]]]:
    if not remaining:
        yield []
        return
    first, rest = remaining[0], remaining[1:]
    need = dict(quotas)
    need[colors[first]] -= 1
    pools = {c: [p for p in rest if colors[p] == c] for c in need}
    picks = [list(combinations(pools[c], need[c])) for c in sorted(need)]
    for combo in product(*picks):
        chosen = (first,) + tuple(p for part in combo for p in part)
        taken = set(chosen)
        for tail in _fair_subsets(tuple(p for p in rest if p not in taken), colors, quotas):
            yield [chosen] + tail


def fair_partition_oracle(inst: Instance) -> Fraction:
    """
    Smallest achievable max over fair subsets of min_y max_p d(y, p), y a member.

    Raises:
        SizeCapError: more than PARTITION_MAX_POINTS points
    """
    if inst.n > PARTITION_MAX_POINTS:
        raise SizeCapError(f"fair partition enumeration: |P| = {inst.n} > {PARTITION_MAX_POINTS}")
    quotas = dict(fair_structure(inst).quotas)
    colors = {p: inst.color_of(p) for p in inst.points}
    best: Optional[Fraction] = None
    for partition in _fair_subsets(tuple(inst.points), colors, quotas):
        value = max(_subset_radius(inst, subset) for subset in partition)
        if best is None or value < best:
            best = value
    return best if best is not None else Fraction(0)
