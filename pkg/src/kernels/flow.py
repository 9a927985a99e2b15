"""
Integral maximum s-t flow (shortest augmenting paths) and residual analysis.

Node ids are arbitrary hashables; the order of FlowNetwork.nodes fixes the
BFS neighbour order, so the flow returned for a given network is always the
same one.
"""
from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, FrozenSet, Hashable, List, Mapping, Optional, Sequence, Tuple

from core.errors import ContractViolation, InvalidInputError

Node = Hashable
Arc = Tuple[Node, Node]


@dataclass(frozen=True)
class FlowNetwork:
    """Directed network with nonnegative integer capacities, one arc per ordered pair.

    max_capacity, when set, caps every arc capacity.
    """
    nodes: Tuple[Node, ...]
    source: Node
    sink: Node
    capacities: Mapping[Arc, int]
    max_capacity: Optional[int] = None
    _order: Mapping[Node, int] = field(init=False, repr=False, compare=False)
    _adjacent: Mapping[Node, Tuple[Node, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "capacities", MappingProxyType(dict(self.capacities)))
        order = {node: i for i, node in enumerate(nodes)}
        if len(order) != len(nodes):
            raise InvalidInputError("Duplicate node ids")
        if self.source not in order or self.sink not in order:
            raise InvalidInputError("Source and sink must be nodes of the network")
        if self.source == self.sink:
            raise InvalidInputError("Source and sink must differ")
        neighbours: Dict[Node, set] = {node: set() for node in nodes}
        for (u, v), cap in self.capacities.items():
            if u not in order or v not in order:
                raise InvalidInputError(f"Arc ({u!r}, {v!r}) uses an unknown node")
            if u == v:
                raise InvalidInputError(f"Self-loop at {u!r}")
            if v == self.source:
                raise InvalidInputError("Arcs into the source are not allowed")
            if u == self.sink:
                raise InvalidInputError("Arcs out of the sink are not allowed")
            if not isinstance(cap, int) or isinstance(cap, bool) or cap < 0:
                raise InvalidInputError(f"Capacity of ({u!r}, {v!r}) must be a nonnegative int")
            if self.max_capacity is not None and cap > self.max_capacity:
                raise InvalidInputError(f"Capacity {cap} of ({u!r}, {v!r}) exceeds {self.max_capacity}")
            neighbours[u].add(v)
            neighbours[v].add(u)
        adjacent = {node: tuple(sorted(neighbours[node], key=order.__getitem__)) for node in nodes}
        object.__setattr__(self, "_order", MappingProxyType(order))
        object.__setattr__(self, "_adjacent", MappingProxyType(adjacent))

    def cap(self, u: Node, v: Node) -> int:
        return self.capacities.get((u, v), 0)

    def neighbours(self, node: Node) -> Tuple[Node, ...]:
        return self._adjacent[node]

    def arcs_into(self, node: Node) -> List[Arc]:
        return [arc for arc in self.capacities if arc[1] == node]


@dataclass(frozen=True)
class FlowResult:
    flow: Mapping[Arc, int]
    value: int
    sink_arcs: Mapping[Node, Tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "flow", MappingProxyType(dict(self.flow)))
        object.__setattr__(self, "sink_arcs", MappingProxyType(dict(self.sink_arcs)))

    def on(self, u: Node, v: Node) -> int:
        return self.flow.get((u, v), 0)

    def saturates_sink(self) -> bool:
        """True when every arc into t carries its full capacity."""
        return all(f == c for f, c in self.sink_arcs.values())

    def unsaturated_sink_arcs(self) -> List[Node]:
        return [u for u, (f, c) in self.sink_arcs.items() if f < c]


def _residual(net: FlowNetwork, flow: Mapping[Arc, int], u: Node, v: Node) -> int:
    return net.cap(u, v) - flow.get((u, v), 0) + flow.get((v, u), 0)


def _bfs(net: FlowNetwork, flow: Mapping[Arc, int]) -> Dict[Node, Optional[Node]]:
    parent: Dict[Node, Optional[Node]] = {net.source: None}
    queue = deque([net.source])
    while queue:
        u = queue.popleft()
        for v in net.neighbours(u):
            if v not in parent and _residual(net, flow, u, v) > 0:
                parent[v] = u
                queue.append(v)
    return parent


def max_flow(net: FlowNetwork) -> FlowResult:
    """Edmonds-Karp on the residual network; every flow value is an int."""
    flow: Dict[Arc, int] = {arc: 0 for arc in net.capacities}
    value = 0
    while True:
        parent = _bfs(net, flow)
        if net.sink not in parent:
            break
        path: List[Arc] = []
        v = net.sink
        while parent[v] is not None:
            u = parent[v]
            path.append((u, v))
            v = u
        delta = min(_residual(net, flow, u, v) for u, v in path)
        for u, v in path:
            # cancel opposing flow first, push the rest forward
            back = min(delta, flow.get((v, u), 0))
            if back:
                flow[(v, u)] -= back
            if delta - back:
                flow[(u, v)] += delta - back
        value += delta
    sink_arcs = {u: (flow[(u, v)], net.cap(u, v)) for (u, v) in net.capacities if v == net.sink}
    return FlowResult(flow, value, sink_arcs)


def residual_unreachable(net: FlowNetwork, fr: FlowResult) -> FrozenSet[Node]:
    """
    Nodes with no residual path from s (the set V').

    Raises:
        ContractViolation: t is reachable, i.e. fr is not a maximum flow
    """
    reached = _bfs(net, fr.flow)
    if net.sink in reached:
        raise ContractViolation("Flow is not maximum: an augmenting path remains")
    return frozenset(node for node in net.nodes if node not in reached)


def cut_capacity(net: FlowNetwork, far_side: FrozenSet[Node]) -> int:
    """Total capacity of arcs leaving the complement of far_side into far_side."""
    return sum(cap for (u, v), cap in net.capacities.items() if u not in far_side and v in far_side)


def check_flow(net: FlowNetwork, fr: FlowResult) -> None:
    """
    Raises:
        ContractViolation: capacity, conservation or value bookkeeping is off
    """
    balance: Dict[Node, int] = {node: 0 for node in net.nodes}
    for arc, f in fr.flow.items():
        if arc not in net.capacities:
            raise ContractViolation(f"Flow on unknown arc {arc!r}")
        if not 0 <= f <= net.capacities[arc]:
            raise ContractViolation(f"Flow {f} violates capacity on {arc!r}")
        balance[arc[0]] -= f
        balance[arc[1]] += f
    for node, b in balance.items():
        if node not in (net.source, net.sink) and b != 0:
            raise ContractViolation(f"Conservation fails at {node!r}")
    if -balance[net.source] != fr.value:
        raise ContractViolation("Flow value differs from net outflow of s")


def decompose_paths(net: FlowNetwork, fr: FlowResult) -> List[Tuple[Tuple[Node, ...], int]]:
    """Split the flow into s-t paths with integral values; circulations are cancelled."""
    remaining = {arc: f for arc, f in fr.flow.items() if f > 0}
    paths: List[Tuple[Tuple[Node, ...], int]] = []
    while True:
        path = [net.source]
        position = {net.source: 0}
        while path[-1] != net.sink:
            u = path[-1]
            v = next((w for w in net.neighbours(u) if remaining.get((u, w), 0) > 0), None)
            if v is None:
                break
            if v in position:
                cycle = path[position[v]:] + [v]
                amount = min(remaining[(cycle[i], cycle[i + 1])] for i in range(len(cycle) - 1))
                for i in range(len(cycle) - 1):
                    remaining[(cycle[i], cycle[i + 1])] -= amount
                for node in path[position[v] + 1:]:
                    del position[node]
                path = path[:position[v] + 1]
                continue
            position[v] = len(path)
            path.append(v)
        if path[-1] != net.sink:
            return paths
        amount = min(remaining[(path[i], path[i + 1])] for i in range(len(path) - 1))
        for i in range(len(path) - 1):
            remaining[(path[i], path[i + 1])] -= amount
        paths.append((tuple(path), amount))


def bounded_flow(
    nodes: Sequence[Node],
    source: Node,
    sink: Node,
    bounds: Mapping[Arc, Tuple[int, int]],
) -> Optional[Dict[Arc, int]]:
    """
    Find an s-t flow meeting lower and upper bounds on every arc, or None.

    Classic reduction: lower bounds become node excesses served from a super
    source, and an uncapped t->s arc turns the s-t flow into a circulation.
    """
    super_source = ("__bounded_source__",)
    super_sink = ("__bounded_sink__",)
    excess: Dict[Node, int] = {node: 0 for node in nodes}
    capacities: Dict[Arc, int] = {}
    total_upper = 0
    for (u, v), (lower, upper) in bounds.items():
        if lower < 0 or upper < lower:
            raise InvalidInputError(f"Bad bounds {lower}..{upper} on ({u!r}, {v!r})")
        capacities[(u, v)] = upper - lower
        excess[v] += lower
        excess[u] -= lower
        total_upper += upper
    if (sink, source) in capacities:
        raise InvalidInputError("Arc from sink to source is reserved by the reduction")
    capacities[(sink, source)] = total_upper
    demand = 0
    for node in nodes:
        if excess[node] > 0:
            capacities[(super_source, node)] = excess[node]
            demand += excess[node]
        elif excess[node] < 0:
            capacities[(node, super_sink)] = -excess[node]
    net = FlowNetwork(tuple(nodes) + (super_source, super_sink), super_source, super_sink, capacities)
    fr = max_flow(net)
    if fr.value < demand:
        return None
    return {arc: lower + fr.on(*arc) for arc, (lower, _upper) in bounds.items()}
