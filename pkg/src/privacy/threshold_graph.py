"""
Threshold graphs: the flow networks that move points (or whole fair sets)
between clusters of a relaxed solution until every cluster meets its lower
bound.

Node layout, in BFS order: s, one node per cluster ("v", slot), the outlier
node when present, one node per movable unit ("w", unit) and t.
  - s -> v_i   capacity |C_i| - bound   (surplus clusters)
  - v_i -> t   capacity bound - |C_i|   (deficit clusters)
  - v_i -> w_u capacity 1               (u currently in C_i)
  - w_u -> v_j capacity 1               (u not in C_j, within 2*tau of C_j)
  - s -> v_out capacity o, v_out -> w_p capacity 1 for every outlier p
Cluster sizes are counted in units of the graph kind. Distances to a cluster
always refer to its membership when the graph was built.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from core.errors import ContractViolation, ensure
from core.instance import Clustering, Instance
from kernels.flow import FlowNetwork, FlowResult

SOURCE = ("s",)
SINK = ("t",)
OUTLIER_NODE = ("v", "out")


class GraphKind(Enum):
    POINTS = "points"
    OUTLIERS = "outliers"
    FAIR = "fair"
    COLOR = "color"


def cluster_node(slot: int) -> tuple:
    return ("v", slot)


def unit_node(unit: Hashable) -> tuple:
    return ("w", unit)


@dataclass(frozen=True)
class ThresholdGraph:
    """Flow network for one threshold plus the bookkeeping to turn flow into moves."""
    kind: GraphKind
    inst: Instance
    tau: Fraction
    bound: int
    network: FlowNetwork
    clusters: Tuple[Tuple[str, ...], ...]
    units: Mapping[Hashable, Tuple[str, ...]]
    home: Mapping[Hashable, Optional[int]]
    counts: Tuple[int, ...]
    color: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "units", MappingProxyType(dict(self.units)))
        object.__setattr__(self, "home", MappingProxyType(dict(self.home)))

    def unit_arc_targets(self, unit: Hashable) -> List[int]:
        return [v[1] for v in self.network.neighbours(unit_node(unit))
                if v[0] == "v" and v != OUTLIER_NODE and self.network.cap(unit_node(unit), v) > 0]


def greedy_fair_sets(
    inst: Instance,
    members: Sequence[str],
    quotas: Mapping[str, int],
) -> List[Tuple[str, ...]]:
    """Split a fair cluster into fair sets, taking each color's points by id order."""
    rank = inst.point_order()
    by_color: Dict[str, List[str]] = {c: [] for c in quotas}
    for p in sorted(members, key=rank.__getitem__):
        by_color[inst.color_of(p)].append(p)
    first = next(iter(quotas))
    count = len(by_color[first]) // quotas[first]
    ensure(all(len(by_color[c]) == count * quotas[c] for c in quotas), "cluster is not a union of fair sets")
    sets = []
    for j in range(count):
        picked: List[str] = []
        for c in sorted(quotas):
            picked.extend(by_color[c][j * quotas[c]:(j + 1) * quotas[c]])
        sets.append(tuple(sorted(picked, key=rank.__getitem__)))
    return sets


def fair_units(inst: Instance, sol: Clustering, quotas: Mapping[str, int]) -> List[Tuple[str, ...]]:
    """
    Fair sets per cluster: recorded blocks lying wholly inside one cluster are
    reused, the rest of each cluster is split greedily.
    """
    blocks = sol.blocks or ()
    units: List[Tuple[str, ...]] = []
    for members in sol.clusters():
        inside = set(members)
        covered = set()
        for block in blocks:
            if block and set(block) <= inside:
                units.append(tuple(block))
                covered.update(block)
        rest = [p for p in members if p not in covered]
        units.extend(greedy_fair_sets(inst, rest, quotas))
    return units


def build_threshold_graph(
    sol: Clustering,
    inst: Instance,
    tau: Fraction,
    kind: GraphKind,
    bound: int,
    outlier_budget: int = 0,
    units: Optional[Sequence[Tuple[str, ...]]] = None,
    color: Optional[str] = None,
) -> ThresholdGraph:
    """
    Build the threshold graph of `sol` at `tau`.

    Args:
        sol: Clustering of the relaxed problem
        inst: Instance sol clusters
        tau: Threshold; a unit may move to a cluster within 2*tau
        kind: POINTS, OUTLIERS, FAIR (units are fair sets) or COLOR (points of one color)
        bound: Lower bound per cluster, in units of the kind
        outlier_budget: Capacity of the s -> v_out arc (OUTLIERS only)
        units: Fair sets partitioning the assigned points (FAIR only)
        color: The color whose points are units (COLOR only)
    """
    clusters = sol.clusters()
    slot_of = dict(sol.assignment)

    if kind is GraphKind.FAIR:
        if units is None:
            raise ContractViolation("Fair threshold graph needs fair sets")
        unit_sets = {j: tuple(u) for j, u in enumerate(units)}
        home = {j: slot_of[u[0]] for j, u in unit_sets.items()}
        for j, u in unit_sets.items():
            ensure(all(slot_of[p] == home[j] for p in u), f"fair set {u} spans several clusters")
    elif kind is GraphKind.COLOR:
        if color is None:
            raise ContractViolation("Per-color threshold graph needs a color")
        chosen = [p for p in inst.points if p in slot_of and inst.color_of(p) == color]
        unit_sets = {p: (p,) for p in chosen}
        home = {p: slot_of[p] for p in chosen}
    else:
        assigned = [p for p in inst.points if p in slot_of]
        unit_sets = {p: (p,) for p in assigned}
        home = {p: slot_of[p] for p in assigned}
        if kind is GraphKind.OUTLIERS:
            for p in inst.points:
                if p in sol.outliers:
                    unit_sets[p] = (p,)
                    home[p] = None

    counts = [0] * len(clusters)
    for u, h in home.items():
        if h is not None:
            counts[h] += 1

    nodes: List[tuple] = [SOURCE] + [cluster_node(i) for i in range(len(clusters))]
    if kind is GraphKind.OUTLIERS:
        nodes.append(OUTLIER_NODE)
    nodes.extend(unit_node(u) for u in unit_sets)
    nodes.append(SINK)

    caps: Dict[tuple, int] = {}
    for i, count in enumerate(counts):
        if count > bound:
            caps[(SOURCE, cluster_node(i))] = count - bound
        elif count < bound:
            caps[(cluster_node(i), SINK)] = bound - count
    if kind is GraphKind.OUTLIERS:
        caps[(SOURCE, OUTLIER_NODE)] = outlier_budget

    two_tau = 2 * tau
    for u, points in unit_sets.items():
        h = home[u]
        if h is None:
            caps[(OUTLIER_NODE, unit_node(u))] = 1
        else:
            caps[(cluster_node(h), unit_node(u))] = 1
        for j, members in enumerate(clusters):
            if j == h:
                continue
            gap = inst.set_distance(points, members)
            if gap is not None and gap <= two_tau:
                caps[(unit_node(u), cluster_node(j))] = 1

    # no arc carries more than every point plus the outlier budget
    ceiling = max(inst.n, bound) + outlier_budget
    network = FlowNetwork(tuple(nodes), SOURCE, SINK, caps, max_capacity=ceiling)
    return ThresholdGraph(kind, inst, Fraction(tau), bound, network, clusters,
                          unit_sets, home, tuple(counts), color)


def flow_moves(tg: ThresholdGraph, fr: FlowResult) -> List[Tuple[Hashable, int]]:
    """(unit, target slot) for every unit arc carrying flow."""
    moves = []
    for u in tg.units:
        for j in tg.unit_arc_targets(u):
            if fr.on(unit_node(u), cluster_node(j)) > 0:
                moves.append((u, j))
    return moves


def apply_moves(
    inst: Instance,
    sol: Clustering,
    moves: Sequence[Tuple[Tuple[str, ...], int]],
    blocks: Optional[Sequence[Tuple[str, ...]]] = None,
) -> Clustering:
    """Reassign each moved point set to its target slot; moved outliers become assigned."""
    assignment = dict(sol.assignment)
    outliers = set(sol.outliers)
    moved = set()
    for points, slot in moves:
        for p in points:
            if p in moved:
                raise ContractViolation(f"Point {p} moved twice")
            moved.add(p)
            assignment[p] = slot
            outliers.discard(p)
    return Clustering.build(inst, sol.centers, assignment, outliers,
                           blocks=sol.blocks if blocks is None else blocks)


def reassign_from_flow(sol: Clustering, tg: ThresholdGraph, fr: FlowResult) -> Clustering:
    """
    Apply every unit move of a flow that saturates all t-arcs.

    Raises:
        ContractViolation: some t-arc is unsaturated (use the cut analysis instead)
    """
    if not fr.saturates_sink():
        raise ContractViolation("reassign_from_flow needs a flow saturating every t-arc")
    moves = [(tg.units[u], j) for u, j in flow_moves(tg, fr)]
    return apply_moves(tg.inst, sol, moves)
