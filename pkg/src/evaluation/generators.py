"""
Random instance generators for the bench and the sample-instance script.

Two metric kinds: integer points in a square (Euclidean, rounded to a fixed
denominator) and shortest-path metrics over a random connected graph. Colors
are dealt in one of three modes: balanced, skewed, or unit (some color has
b_c = 1).
"""
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Dict, List, Optional, Sequence

import networkx as nx
import numpy as np

from config import SolverConfig
from core.documents import euclidean_matrix
from core.errors import UnknownNameError
from core.instance import VARIANT_FLAGS, Instance, fair_structure

METRIC_KINDS = ("euclidean", "graph")
COLOR_MODES = ("balanced", "skewed", "unit")
PALETTE = ("red", "blue", "green")


@dataclass(frozen=True)
class GeneratorSettings:
    """Ranges for random instances. max_locations caps |L| so the exact oracle stays usable."""
    max_n: int = 10
    max_locations: Optional[int] = SolverConfig.EXACT_MAX_LOCATIONS
    max_k: int = 3
    max_ell: int = 4
    max_outliers: int = 2
    max_colors: int = 3
    side: int = 20
    denominator: int = 100
    fl_max_n: int = 9


def _pick(rng: np.random.Generator, low: int, high: int) -> int:
    """Uniform integer in [low, high] (high clamped up to low)."""
    return int(rng.integers(low, max(low, high) + 1))


# ------------------------------------------------------------------ metrics

def euclidean_metric(rng: np.random.Generator, sites: Sequence[str], side: int,
                     denominator: int) -> List[List[Fraction]]:
    coords = rng.integers(0, side + 1, size=(len(sites), 2))
    return euclidean_matrix(list(sites), {s: list(map(int, coords[i])) for i, s in enumerate(sites)}, denominator)


def graph_metric(rng: np.random.Generator, sites: Sequence[str], edge_probability: float = 0.4,
                 max_weight: int = 9) -> List[List[Fraction]]:
    """Shortest paths over a random graph with integer weights, made connected by a spanning path."""
    size = len(sites)
    graph = nx.gnp_random_graph(size, edge_probability, seed=int(rng.integers(2**31)))
    order = [int(i) for i in rng.permutation(size)]
    graph.add_edges_from(zip(order, order[1:]))
    for u, v in sorted(graph.edges()):
        graph[u][v]["weight"] = int(rng.integers(1, max_weight + 1))
    lengths = dict(nx.all_pairs_dijkstra_path_length(graph, weight="weight"))
    return [[Fraction(lengths[i][j]) for j in range(size)] for i in range(size)]


# ------------------------------------------------------------------- colors

def color_counts(rng: np.random.Generator, n: int, palette_size: int, mode: str) -> List[int]:
    if mode not in COLOR_MODES:
        raise UnknownNameError(f"Unknown color mode: {mode}")
    palette_size = max(1, min(palette_size, n))
    if palette_size == 1:
        return [n]
    if mode == "balanced":
        return [n // palette_size + (1 if i < n % palette_size else 0) for i in range(palette_size)]
    if mode == "unit":
        # common unit g; the first color gets exactly g points so its b_c is 1
        divisors = [g for g in range(1, n // palette_size + 1) if n % g == 0]
        g = divisors[int(rng.integers(len(divisors)))]
        units = n // g
        extra = rng.multinomial(units - palette_size, [1 / (palette_size - 1)] * (palette_size - 1))
        return [g] + [g * (1 + int(e)) for e in extra]
    weights = rng.dirichlet(np.linspace(1.0, 0.25, palette_size))
    extra = rng.multinomial(n - palette_size, weights)
    return [1 + int(e) for e in extra]


def assign_colors(rng: np.random.Generator, points: Sequence[str], palette_size: int,
                  mode: str) -> Dict[str, str]:
    counts = color_counts(rng, len(points), palette_size, mode)
    dealt = [PALETTE[i] for i, count in enumerate(counts) for _ in range(count)]
    order = rng.permutation(len(points))
    return {points[int(i)]: color for i, color in zip(order, dealt)}


# ---------------------------------------------------------------- instances

def _capacities(rng: np.random.Generator, locations: Sequence[str], n: int, k: int, low: int,
                step: int = 1) -> Dict[str, int]:
    """Per-location capacities, multiples of step, at least low, with the k largest covering n."""
    caps = {x: low + step * _pick(rng, 0, 2) for x in locations}
    largest = sorted(locations, key=lambda x: -caps[x])[:k]
    while sum(caps[x] for x in largest) < n:
        for x in largest:
            caps[x] += step
    return caps


def random_instance(rng: np.random.Generator, variant: str,
                    settings: GeneratorSettings = GeneratorSettings()) -> Instance:
    """
    A random instance that meets the admissibility rules of `variant`
    (k * ell <= |P| - o, k <= n / b for fairness, 2 * ell <= u for facility location).

    Raises:
        UnknownNameError: unknown variant
    """
    if variant not in VARIANT_FLAGS:
        raise UnknownNameError(f"Unknown variant: {variant}")
    flags = VARIANT_FLAGS[variant]
    facility = variant == "private-capacitated-fl"
    supplier = not facility and bool(rng.random() < 1 / 3)

    max_n = settings.fl_max_n if facility else settings.max_n
    if not supplier and settings.max_locations is not None:
        max_n = min(max_n, settings.max_locations)
    n = _pick(rng, 4, max_n)
    points = [f"p{i}" for i in range(n)]
    if supplier:
        m = _pick(rng, 2, settings.max_locations or n)
        locations = [f"x{i}" for i in range(m)]
    else:
        locations = list(points)
    sites = points + [x for x in locations if x not in set(points)]

    if rng.random() < 0.5:
        matrix = euclidean_metric(rng, sites, settings.side, settings.denominator)
    else:
        matrix = graph_metric(rng, sites)

    k = _pick(rng, 1, min(settings.max_k, len(locations)))
    params: dict = {}

    if flags.get("outliers"):
        params["outliers"] = _pick(rng, 0, min(settings.max_outliers, n - 1))
    o = params.get("outliers", 0)

    if flags.get("fairness") or flags.get("strong_privacy"):
        mode = COLOR_MODES[int(rng.integers(len(COLOR_MODES)))]
        params["colors"] = assign_colors(rng, points, _pick(rng, 2, settings.max_colors), mode)

    block = 1
    if flags.get("fairness"):
        draft = Instance.create(points, locations, matrix, k, sites=sites, colors=params["colors"])
        block = fair_structure(draft).block
        k = max(1, min(k, n // block))

    if flags.get("privacy"):
        ell = _pick(rng, 1, min(settings.max_ell, n - o))
        rounded = block * ceil(ell / block)
        k = max(1, min(k, (n - o) // rounded))
        params["ell"] = ell

    if flags.get("strong_privacy"):
        sizes = Counter(params["colors"].values())
        palette = sorted(sizes)
        bounds = {c: min(_pick(rng, 0, 2), sizes[c]) for c in palette}
        if not any(bounds.values()):
            bounds[palette[0]] = 1
        k = max(1, min(k, n // max(1, sum(bounds.values()))))
        params["color_ell"] = bounds

    if facility:
        ell = _pick(rng, 1, max(1, n // 4))
        params.update(ell=ell, uniform_capacity=_pick(rng, 2 * ell, n),
                      opening_cost=Fraction(_pick(rng, 0, 8), 2))
        k = n
    elif flags.get("capacities"):
        low = block * ceil(params.get("ell", 1) / block)
        if rng.random() < 0.5:
            u = max(low, block * ceil(ceil(n / k) / block))
            params["uniform_capacity"] = u + block * _pick(rng, 0, 1)
        else:
            params["capacities"] = _capacities(rng, locations, n, k, low, block)

    return Instance.create(points, locations, matrix, k, sites=sites, **params).validate()
