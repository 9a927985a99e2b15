"""
Residual cut analysis of a maximum flow that leaves a deficit uncovered.

The nodes unreachable from s (V') certify a region holding too few units
for the clusters opened inside it, so those clusters can be recomputed
with one center fewer.
"""
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Tuple

from config import SolverConfig
from core.errors import ContractViolation, ensure
from kernels.flow import FlowResult, residual_unreachable
from privacy.threshold_graph import OUTLIER_NODE, SOURCE, ThresholdGraph, cluster_node, unit_node


@dataclass(frozen=True)
class CutAnalysis:
    far_side: FrozenSet[tuple]
    clusters: Tuple[int, ...]
    points: FrozenSet[str]
    adjacent: FrozenSet[str]
    former_outliers: FrozenSet[str]
    units_inside: int
    units_adjacent: int

    @property
    def k2(self) -> int:
        """k'' = number of clusters in V'"""
        return len(self.clusters)

    @property
    def current_outliers(self) -> int:
        """o' = outliers of the solution the cut was taken on"""
        return len(self.former_outliers)

    def is_special(self, members: Iterable[str]) -> bool:
        """A cluster is special when it touches P(V') or consists solely of former outliers."""
        members = frozenset(members)
        if not members:
            return False
        return bool(members & self.points) or members <= self.former_outliers


def _check_structure(tg: ThresholdGraph, fr: FlowResult, far: FrozenSet[tuple]) -> None:
    net = tg.network
    for u in tg.units:
        w = unit_node(u)
        for j in tg.unit_arc_targets(u):
            v = cluster_node(j)
            if v in far and w not in far:
                raise ContractViolation(f"cut property broken: {v} in V' but unit {u!r} is not")
            if w in far and fr.on(w, v) > 0 and v not in far:
                raise ContractViolation(f"cut property broken: unit {u!r} in V' sends flow outside")
        h = tg.home[u]
        origin = OUTLIER_NODE if h is None else cluster_node(h)
        if w in far and origin not in far and fr.on(origin, w) != 1:
            raise ContractViolation(f"cut property broken: unit {u!r} in V' not fed from outside")
    ensure(SOURCE not in far, "source cannot lie in V'")
    ensure(net.sink in far, "sink must lie in V' for a maximum flow")


def analyze_cut(tg: ThresholdGraph, fr: FlowResult) -> CutAnalysis:
    """
    Derive V', C(V'), P(V') and P_A(V') from a maximum flow on tg.

    Raises:
        ContractViolation: every t-arc is saturated, or a structural property fails
    """
    if fr.saturates_sink():
        raise ContractViolation("analyze_cut needs an unsaturated t-arc")
    far = residual_unreachable(tg.network, fr)
    if SolverConfig.CHECK_INVARIANTS:
        _check_structure(tg, fr, far)

    slots = tuple(i for i in range(len(tg.clusters)) if cluster_node(i) in far)
    points = frozenset(p for i in slots for p in tg.clusters[i])
    adjacent = set()
    units_adjacent = 0
    for u, members in tg.units.items():
        if unit_node(u) not in far:
            continue
        h = tg.home[u]
        if h is not None and h not in slots:
            adjacent.update(members)
            units_adjacent += 1
    units_inside = sum(tg.counts[i] for i in slots)
    former = frozenset(p for u, h in tg.home.items() if h is None for p in tg.units[u])

    if SolverConfig.CHECK_INVARIANTS:
        ensure(units_inside + units_adjacent < len(slots) * tg.bound,
               f"cut counting fails: {units_inside} + {units_adjacent} >= {len(slots)} * {tg.bound}")

    return CutAnalysis(
        far_side=far,
        clusters=slots,
        points=points,
        adjacent=frozenset(adjacent),
        former_outliers=former,
        units_inside=units_inside,
        units_adjacent=units_adjacent,
    )
