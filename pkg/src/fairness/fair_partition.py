"""
Fair subset partition: split P into fairlets holding exactly b_c points of
every color c, keeping each fairlet close to its representative.

The seed color is clustered with soft capacity b_c so that every slot holds
exactly b_c seed points; every other color is then distributed over the
slots by a bottleneck perfect matching against b_d copies of each slot.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from core.errors import ensure
from core.instance import FairQuotas, Instance, fair_structure
from kernels.matching import BipartiteWeights, bottleneck_perfect_matching
from solvers.soft_capacitated import soft_capacitated_kcenter
from utils import console


@dataclass(frozen=True)
class FairStructure:
    """Fairlets F_i with representatives y_i and the realized bottleneck max d(y_i, p)."""
    quotas: FairQuotas
    seed_color: str
    subsets: Tuple[Tuple[str, ...], ...]
    representatives: Tuple[str, ...]
    radius: Fraction
    factor: Fraction

    @property
    def block(self) -> int:
        return self.quotas.block


def _seed_color(quotas: FairQuotas, classes: Dict[str, Tuple[str, ...]]) -> str:
    unit = sorted(c for c, q in quotas.quotas.items() if q == 1)
    if unit:
        return unit[0]
    return min(sorted(classes), key=lambda c: len(classes[c]))


def fair_subset_partition(inst: Instance) -> FairStructure:
    """
    Partition P into fair subsets.

    Args:
        inst: Instance with colors; locations are ignored (representatives come from P)

    Returns:
        FairStructure with factor 2 when some b_c = 1, else 12

    Raises:
        InstanceError: no colors or an empty color class
    """
    quotas = fair_structure(inst)
    classes = inst.color_classes()
    seed = _seed_color(quotas, classes)
    seed_points = classes[seed]
    seed_quota = quotas.quotas[seed]
    groups = len(seed_points) // seed_quota

    # seed centers must come from the seed color itself
    seed_inst = inst.restrict(seed_points).with_params(locations=seed_points)
    seeded = soft_capacitated_kcenter(seed_inst, groups, seed_quota)
    ensure(seeded.size == groups, f"seed clustering opened {seeded.size} slots, expected {groups}")
    ensure(all(size == seed_quota for size in seeded.cluster_sizes()),
           "seed slots must hold exactly b_c points")

    representatives = seeded.centers
    members: List[List[str]] = [list(cluster) for cluster in seeded.clusters()]
    for color in sorted(classes):
        if color == seed:
            continue
        copies = quotas.quotas[color]
        right = classes[color]
        left = [(i, copy) for i in range(groups) for copy in range(copies)]
        weights = [[inst.d(representatives[i], p) for p in right] for i, _ in left]
        threshold, outcome = bottleneck_perfect_matching(BipartiteWeights(left, right, weights))
        console.trace(f"fair_subset_partition: color {color} matched at bottleneck {threshold}")
        for (i, _copy), p in outcome.matching.items():
            members[i].append(p)

    rank = inst.point_order()
    subsets = tuple(tuple(sorted(group, key=rank.__getitem__)) for group in members)
    for subset in subsets:
        counts: Dict[str, int] = {}
        for p in subset:
            counts[inst.color_of(p)] = counts.get(inst.color_of(p), 0) + 1
        ensure(counts == dict(quotas.quotas), f"fair subset {subset} has counts {counts}")

    radius = max(
        (inst.d(y, p) for y, subset in zip(representatives, subsets) for p in subset),
        default=Fraction(0),
    )
    factor = Fraction(2) if quotas.unit_quota else Fraction(12)
    return FairStructure(quotas, seed, subsets, tuple(representatives), radius, factor)
