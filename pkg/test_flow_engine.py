"""
Max-flow kernel: Edmonds-Karp, residual cuts, lower-bounded flows
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent / "src"))

import numpy as np
import pytest

from core.errors import ContractViolation, InvalidInputError
from evaluation.oracles import min_cut_brute_force
from kernels.flow import (
    FlowNetwork,
    FlowResult,
    bounded_flow,
    check_flow,
    cut_capacity,
    decompose_paths,
    max_flow,
    residual_unreachable,
)


def network(arcs, inner=("a", "b")):
    return FlowNetwork(("s",) + tuple(inner) + ("t",), "s", "t", arcs)


def test_single_arc():
    net = network({("s", "t"): 3}, inner=())
    fr = max_flow(net)
    assert fr.value == 3
    assert fr.saturates_sink()
    assert residual_unreachable(net, fr) == frozenset({"t"})


def test_four_node_example():
    net = network({("s", "a"): 2, ("s", "b"): 2, ("a", "t"): 1, ("b", "t"): 5})
    fr = max_flow(net)
    assert fr.value == 3
    check_flow(net, fr)
    # s -> b is saturated, s -> a still has room but a -> t is full
    far = residual_unreachable(net, fr)
    assert far == frozenset({"b", "t"})
    assert cut_capacity(net, far) == 3
    assert fr.unsaturated_sink_arcs() == ["b"]


def test_no_path():
    net = network({("s", "a"): 1}, inner=("a",))
    fr = max_flow(net)
    assert fr.value == 0
    assert residual_unreachable(net, fr) == frozenset({"t"})

    zero = network({("s", "t"): 0}, inner=())
    assert residual_unreachable(zero, max_flow(zero)) == frozenset({"t"})


def test_residual_cut_rejects_non_maximum_flow():
    net = network({("s", "t"): 2}, inner=())
    partial = FlowResult({("s", "t"): 1}, 1, {"s": (1, 2)})
    with pytest.raises(ContractViolation):
        residual_unreachable(net, partial)


@pytest.mark.parametrize("arcs", [
    {("s", "a"): -1},
    {("a", "a"): 1},
    {("a", "s"): 1},
    {("t", "a"): 1},
    {("s", "x"): 1},
])
def test_invalid_networks(arcs):
    with pytest.raises(InvalidInputError):
        network(arcs)


def test_capacity_ceiling():
    arcs = {("s", "a"): 4, ("a", "t"): 3}
    assert max_flow(FlowNetwork(("s", "a", "t"), "s", "t", arcs, max_capacity=4)).value == 3
    with pytest.raises(InvalidInputError, match="exceeds 3"):
        FlowNetwork(("s", "a", "t"), "s", "t", arcs, max_capacity=3)


def random_network(rng, size):
    inner = [f"n{i}" for i in range(size - 2)]
    nodes = ["s"] + inner + ["t"]
    arcs = {}
    for u in nodes:
        for v in nodes:
            if u == v or v == "s" or u == "t":
                continue
            if rng.random() < 0.45:
                arcs[(u, v)] = int(rng.integers(0, 5))
    return FlowNetwork(tuple(nodes), "s", "t", arcs)


def test_max_flow_matches_brute_force_min_cut():
    rng = np.random.default_rng(11)
    for _ in range(500):
        net = random_network(rng, int(rng.integers(2, 9)))
        fr = max_flow(net)
        check_flow(net, fr)
        assert fr.value == min_cut_brute_force(net)
        assert cut_capacity(net, residual_unreachable(net, fr)) == fr.value
        assert sum(amount for _, amount in decompose_paths(net, fr)) == fr.value


def test_max_flow_is_deterministic():
    rng = np.random.default_rng(3)
    net = random_network(rng, 8)
    assert dict(max_flow(net).flow) == dict(max_flow(net).flow)


def test_bounded_flow():
    nodes = ("s", "a", "t")
    found = bounded_flow(nodes, "s", "t", {("s", "a"): (1, 2), ("a", "t"): (0, 1)})
    assert found == {("s", "a"): 1, ("a", "t"): 1}

    assert bounded_flow(nodes, "s", "t", {("s", "a"): (2, 2), ("a", "t"): (0, 1)}) is None

    with pytest.raises(InvalidInputError):
        bounded_flow(nodes, "s", "t", {("s", "a"): (3, 1)})
