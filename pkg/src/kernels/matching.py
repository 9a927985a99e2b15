"""
Bottleneck bipartite perfect matching with Hall-deficiency certificates.

Maximum matchings come from Hopcroft-Karp over the threshold graph
(edges with weight <= w). Vertices are visited in index order, so results
are reproducible.
"""
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, FrozenSet, Hashable, List, Mapping, Optional, Sequence, Tuple

from core.errors import InvalidInputError


@dataclass(frozen=True)
class BipartiteWeights:
    """Complete bipartite weight table: weights[i][j] = w(left[i], right[j])."""
    left: Tuple[Hashable, ...]
    right: Tuple[Hashable, ...]
    weights: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        object.__setattr__(self, "weights", tuple(tuple(Fraction(w) for w in row) for row in self.weights))
        if len(self.weights) != len(self.left):
            raise InvalidInputError("One weight row per left vertex is required")
        for row in self.weights:
            if len(row) != len(self.right):
                raise InvalidInputError("Weight rows must cover every right vertex")
            if any(w < 0 for w in row):
                raise InvalidInputError("Weights must be nonnegative")

    def distinct_weights(self) -> List[Fraction]:
        return sorted({w for row in self.weights for w in row})

    def adjacency(self, threshold: Fraction) -> List[List[int]]:
        return [[j for j, w in enumerate(row) if w <= threshold] for row in self.weights]


@dataclass(frozen=True)
class MatchingOutcome:
    """
    Result of a threshold query. When no perfect matching exists, `deficient`
    is a left set B whose neighbourhood (within the threshold) is smaller than B.
    """
    exists: bool
    threshold: Fraction
    matching: Mapping[Hashable, Hashable]
    deficient: Optional[FrozenSet[Hashable]] = None
    neighbourhood: Optional[FrozenSet[Hashable]] = None

    def __post_init__(self):
        object.__setattr__(self, "matching", MappingProxyType(dict(self.matching)))


class HopcroftKarp:
    """Maximum-cardinality matching on index-labelled bipartite adjacency lists."""

    def __init__(self, adjacency: Sequence[Sequence[int]], num_right: int):
        self.adjacency = adjacency
        self.num_left = len(adjacency)
        self.num_right = num_right
        self.match_left = [-1] * self.num_left
        self.match_right = [-1] * num_right
        self.dist: List[int] = []

    def _layer(self) -> bool:
        infinity = self.num_left + 1
        self.dist = [infinity] * self.num_left
        queue = deque()
        for u in range(self.num_left):
            if self.match_left[u] == -1:
                self.dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in self.adjacency[u]:
                w = self.match_right[v]
                if w == -1:
                    found = True
                elif self.dist[w] == infinity:
                    self.dist[w] = self.dist[u] + 1
                    queue.append(w)
        return found

    def _augment(self, u: int) -> bool:
        for v in self.adjacency[u]:
            w = self.match_right[v]
            if w == -1 or (self.dist[w] == self.dist[u] + 1 and self._augment(w)):
                self.match_left[u] = v
                self.match_right[v] = u
                return True
        # dead end for this phase
        self.dist[u] = self.num_left + 1
        return False

    def __call__(self) -> List[int]:
        while self._layer():
            for u in range(self.num_left):
                if self.match_left[u] == -1:
                    self._augment(u)
        return self.match_left

    def deficient_set(self) -> Tuple[FrozenSet[int], FrozenSet[int]]:
        """Left/right vertices reachable from unmatched left vertices by alternating paths."""
        left_seen = {u for u in range(self.num_left) if self.match_left[u] == -1}
        right_seen = set()
        queue = deque(sorted(left_seen))
        while queue:
            u = queue.popleft()
            for v in self.adjacency[u]:
                if v in right_seen:
                    continue
                right_seen.add(v)
                w = self.match_right[v]
                if w != -1 and w not in left_seen:
                    left_seen.add(w)
                    queue.append(w)
        return frozenset(left_seen), frozenset(right_seen)


def perfect_matching_exists(bw: BipartiteWeights, threshold: Fraction) -> MatchingOutcome:
    """
    Decide whether a perfect matching uses only edges of weight <= threshold.

    Raises:
        InvalidInputError: the two sides differ in size
    """
    if len(bw.left) != len(bw.right):
        raise InvalidInputError(f"Perfect matching needs equal sides ({len(bw.left)} vs {len(bw.right)})")
    threshold = Fraction(threshold)
    solver = HopcroftKarp(bw.adjacency(threshold), len(bw.right))
    match_left = solver()
    matching = {bw.left[u]: bw.right[v] for u, v in enumerate(match_left) if v != -1}
    if len(matching) == len(bw.left):
        return MatchingOutcome(True, threshold, matching)
    left_set, right_set = solver.deficient_set()
    return MatchingOutcome(
        False,
        threshold,
        matching,
        deficient=frozenset(bw.left[u] for u in left_set),
        neighbourhood=frozenset(bw.right[v] for v in right_set),
    )


def bottleneck_perfect_matching(bw: BipartiteWeights) -> Tuple[Fraction, MatchingOutcome]:
    """
    Smallest w* among the distinct weights admitting a perfect matching.

    Binary search over the sorted distinct weights; the largest weight always
    admits one because the table is complete.
    """
    if len(bw.left) != len(bw.right):
        raise InvalidInputError(f"Perfect matching needs equal sides ({len(bw.left)} vs {len(bw.right)})")
    if not bw.left:
        return Fraction(0), MatchingOutcome(True, Fraction(0), {})
    weights = bw.distinct_weights()
    lo, hi = 0, len(weights) - 1
    best = perfect_matching_exists(bw, weights[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        outcome = perfect_matching_exists(bw, weights[mid])
        if outcome.exists:
            hi = mid
            best = outcome
        else:
            lo = mid + 1
    if best.threshold != weights[lo]:
        best = perfect_matching_exists(bw, weights[lo])
    return weights[lo], best


def neighbourhood_of(bw: BipartiteWeights, left_ids: FrozenSet[Hashable], threshold: Fraction) -> FrozenSet[Hashable]:
    """Right vertices adjacent (weight <= threshold) to any of left_ids."""
    index = {x: i for i, x in enumerate(bw.left)}
    out = set()
    for x in left_ids:
        for j, w in enumerate(bw.weights[index[x]]):
            if w <= threshold:
                out.add(bw.right[j])
    return frozenset(out)
