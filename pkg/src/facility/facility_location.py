"""
Private capacitated facility location for uniform capacities u with 2*ell <= u.

A private facility-location solution (every open serves at least ell points)
is turned into one that also respects u:
  1. every point is translated to its base center;
  2. per base cluster, one open takes |C| mod u points and floor(|C| / u)
     further opens are full;
  3. a non-full open next to a full one is topped up to ceil(u/2) points
     (same location, so free);
  4. every resulting cluster is re-centered at its best member point.
Steps 1-3 give the soft-capacity solution, step 4 the hard one.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, lcm
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from config import FacilityConfig
from core.errors import PreconditionError, SizeCapError, ensure
from core.instance import Clustering, Instance
from utils import console


@dataclass(frozen=True)
class FLSolution:
    """Opens are slots: with soft capacities one location may be opened several times."""
    centers: Tuple[str, ...]
    assignment: Mapping[str, int]
    connection: Fraction
    opening: Fraction
    soft: bool = False

    def __post_init__(self):
        object.__setattr__(self, "assignment", MappingProxyType(dict(self.assignment)))

    @classmethod
    def build(cls, inst: Instance, centers: Sequence[str], assignment: Mapping[str, int],
              soft: bool = False) -> "FLSolution":
        sol = Clustering.build(inst, centers, assignment)
        connection = sum((inst.d(p, sol.centers[s]) for p, s in sol.assignment.items()), Fraction(0))
        opening = (inst.opening_cost or Fraction(0)) * sol.size
        return cls(sol.centers, sol.assignment, connection, opening, soft)

    @property
    def total(self) -> Fraction:
        return self.connection + self.opening

    @property
    def size(self) -> int:
        return len(self.centers)

    def clusters(self) -> Tuple[Tuple[str, ...], ...]:
        members: List[List[str]] = [[] for _ in self.centers]
        for p, slot in self.assignment.items():
            members[slot].append(p)
        return tuple(tuple(m) for m in members)

    def to_clustering(self, inst: Instance) -> Clustering:
        return Clustering.build(inst, self.centers, self.assignment)

    def costs(self) -> Dict[str, Fraction]:
        return {"connection": self.connection, "opening": self.opening, "total": self.total}


def _uniform_capacity(inst: Instance) -> int:
    if inst.uniform_capacity is not None:
        return inst.uniform_capacity
    values = {inst.capacities[x] for x in inst.locations} if inst.capacities is not None else set()
    if len(values) != 1:
        raise PreconditionError("Facility location needs one uniform capacity u")
    return values.pop()


def _check_preconditions(inst: Instance, base: FLSolution) -> int:
    if set(inst.points) != set(inst.locations):
        raise PreconditionError("Facility location pipeline needs L = P")
    u = _uniform_capacity(inst)
    if 2 * inst.ell > u:
        raise PreconditionError(f"2*ell = {2 * inst.ell} exceeds u = {u}")
    small = [i for i, members in enumerate(base.clusters()) if len(members) < inst.ell]
    if small:
        raise PreconditionError(f"Base solution violates the lower bound in opens {small}")
    return u


def soften_private_fl(inst: Instance, base: FLSolution) -> FLSolution:
    """
    Soft-capacity solution respecting ell and u at connection cost equal to
    the base connection cost, with at most k' + floor(n/u) opens.

    Raises:
        PreconditionError: L != P, non-uniform capacities, 2*ell > u, or base not private
    """
    u = _check_preconditions(inst, base)
    rank = inst.point_order()
    centers: List[str] = []
    assignment: Dict[str, int] = {}
    for slot, members in enumerate(base.clusters()):
        location = base.centers[slot]
        ordered = sorted(members, key=rank.__getitem__)
        rest = len(ordered) % u
        chunks: List[List[str]] = []
        if rest:
            chunks.append(ordered[:rest])
        for start in range(rest, len(ordered), u):
            chunks.append(ordered[start:start + u])
        half = ceil(u / 2)
        if rest and len(chunks) > 1 and rest < half:
            shift = half - rest
            donor = chunks[1]
            chunks[0] = chunks[0] + donor[len(donor) - shift:]
            chunks[1] = donor[:len(donor) - shift]
        for chunk in chunks:
            for p in chunk:
                assignment[p] = len(centers)
            centers.append(location)

    soft = FLSolution.build(inst, centers, assignment, soft=True)
    ensure(soft.connection == base.connection, "shifts between opens at one location changed the connection cost")
    ensure(soft.size <= base.size + inst.n // u, f"{soft.size} soft opens exceed k' + n/u")
    for members in soft.clusters():
        ensure(inst.ell <= len(members) <= u, f"soft open with {len(members)} points outside [{inst.ell}, {u}]")
    return soft


def privatize_fl(inst: Instance, base: FLSolution) -> FLSolution:
    """
    Hard-capacity private facility location from a private base solution.

    Returns:
        Distinct opens, each serving between ell and u points; cost at most
        2 * base connection + f * (k' + floor(n/u))
    """
    soft = soften_private_fl(inst, base)
    rank = inst.point_order()
    centers: List[str] = []
    assignment: Dict[str, int] = {}
    for slot, members in enumerate(soft.clusters()):
        old = soft.centers[slot]
        before = sum((inst.d(x, old) for x in members), Fraction(0))
        best = min(members, key=lambda c: (sum((inst.d(x, c) for x in members), Fraction(0)), rank[c]))
        after = sum((inst.d(x, best) for x in members), Fraction(0))
        ensure(after <= 2 * before, f"re-centering cluster {slot} more than doubled its cost")
        for x in members:
            assignment[x] = len(centers)
        centers.append(best)
    hard = FLSolution.build(inst, centers, assignment)
    ensure(len(set(hard.centers)) == hard.size, "hard solution opens a location twice")
    console.debug(f"privatize_fl: {base.size} base opens -> {hard.size} opens, total {hard.total}")
    return hard


# --------------------------------------------------------------- oracle


def _scaled(values: Sequence[Fraction]) -> Tuple[List[int], int]:
    scale = 1
    for v in values:
        scale = lcm(scale, v.denominator)
    return [int(v * scale) for v in values], scale


def _assign_cost(inst: Instance, opens: Tuple[str, ...], lower: int,
                 upper: int) -> Optional[Tuple[Fraction, Dict[str, int]]]:
    """
    Cheapest assignment of P to `opens` with lower..upper points each, via a
    square assignment problem: every open contributes `lower` mandatory and
    `upper - lower` optional columns, dummy rows may only take optional ones.
    """
    n = inst.n
    columns: List[Tuple[int, bool]] = []
    for slot in range(len(opens)):
        columns.extend((slot, True) for _ in range(lower))
        columns.extend((slot, False) for _ in range(upper - lower))
    if len(columns) < n or lower * len(opens) > n:
        return None
    raw = [inst.d(p, opens[slot]) for p in inst.points for slot, _ in columns]
    ints, scale = _scaled(raw)
    forbidden = sum(ints) + 1
    size = len(columns)
    cost = np.zeros((size, size), dtype=np.int64)
    cost[:n, :] = np.array(ints, dtype=np.int64).reshape(n, size)
    for j, (_, mandatory) in enumerate(columns):
        if mandatory:
            cost[n:, j] = forbidden
    rows, cols = linear_sum_assignment(cost)
    if cost[rows, cols].sum() >= forbidden:
        return None
    assignment = {inst.points[r]: columns[c][0] for r, c in zip(rows, cols) if r < n}
    total = Fraction(int(cost[rows, cols][rows < n].sum()), scale)
    return total, assignment


def brute_force_private_fl(inst: Instance, capacitated: bool = True) -> Optional[FLSolution]:
    """
    Exact private (optionally capacitated) facility location by enumerating
    every nonempty set of opens.

    Returns:
        Cheapest solution, ties to the earlier subset; None when infeasible

    Raises:
        SizeCapError: |P| or |L| above FacilityConfig.BRUTE_FORCE_MAX_POINTS
    """
    cap = FacilityConfig.BRUTE_FORCE_MAX_POINTS
    if inst.n > cap or len(inst.locations) > cap:
        raise SizeCapError(f"brute_force_private_fl: |P| = {inst.n}, |L| = {len(inst.locations)} exceed cap {cap}")
    upper = _uniform_capacity(inst) if capacitated else inst.n
    upper = min(upper, inst.n)
    f = inst.opening_cost or Fraction(0)
    best: Optional[Tuple[Fraction, Tuple[str, ...], Dict[str, int]]] = None
    for size in range(1, len(inst.locations) + 1):
        if size * inst.ell > inst.n:
            break
        for opens in combinations(inst.locations, size):
            found = _assign_cost(inst, opens, inst.ell, upper)
            if found is None:
                continue
            total = found[0] + f * size
            if best is None or total < best[0]:
                best = (total, opens, found[1])
    if best is None:
        return None
    return FLSolution.build(inst, best[1], best[2])
