"""
Instances, clusterings and constraint sets.

Distances are exact Fractions held in a dense matrix over the sites
P ∪ L (points first, then the locations that are not points). Every type
here is an immutable value; solvers derive sub-instances with restrict()
and new clusterings with Clustering.build().
"""
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from core.errors import InstanceError, MalformedSolutionError, UnknownNameError


def _frozen_map(mapping: Optional[Mapping]) -> Optional[Mapping]:
    if mapping is None:
        return None
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class Instance:
    """A clustering instance over an explicit finite metric."""
    points: Tuple[str, ...]
    locations: Tuple[str, ...]
    sites: Tuple[str, ...]
    matrix: Tuple[Tuple[Fraction, ...], ...]
    k: int
    ell: int = 0
    outliers: int = 0
    capacities: Optional[Mapping[str, int]] = None
    uniform_capacity: Optional[int] = None
    colors: Optional[Mapping[str, str]] = None
    color_ell: Optional[Mapping[str, int]] = None
    opening_cost: Optional[Fraction] = None
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "capacities", _frozen_map(self.capacities))
        object.__setattr__(self, "colors", _frozen_map(self.colors))
        object.__setattr__(self, "color_ell", _frozen_map(self.color_ell))
        index = {site: i for i, site in enumerate(self.sites)}
        if len(index) != len(self.sites):
            raise InstanceError("Site ids must be unique")
        missing = [x for x in (*self.points, *self.locations) if x not in index]
        if missing:
            raise InstanceError(f"Ids without a metric row: {missing[:5]}")
        object.__setattr__(self, "_index", MappingProxyType(index))

    @classmethod
    def create(
        cls,
        points: Sequence[str],
        locations: Sequence[str],
        distances: Sequence[Sequence[Fraction]],
        k: int,
        sites: Optional[Sequence[str]] = None,
        **params,
    ) -> "Instance":
        """
        Build an instance from a square matrix over `sites`.

        Args:
            points: Point ids P in their canonical order
            locations: Location ids L
            distances: Matrix rows in `sites` order
            k: Center budget
            sites: Row order of the matrix (default: points, then locations not in P)
            **params: ell, outliers, capacities, uniform_capacity, colors, color_ell, opening_cost

        Returns:
            Instance (not yet validated, see Instance.validate)
        """
        points = tuple(points)
        locations = tuple(locations)
        if sites is None:
            seen = set(points)
            sites = points + tuple(x for x in locations if x not in seen)
        matrix = tuple(tuple(Fraction(v) for v in row) for row in distances)
        if params.get("uniform_capacity") is not None and params.get("capacities") is None:
            params["capacities"] = {x: params["uniform_capacity"] for x in locations}
        return cls(points=points, locations=locations, sites=tuple(sites), matrix=matrix, k=k, **params)

    # ------------------------------------------------------------------ access

    def d(self, a: str, b: str) -> Fraction:
        return self.matrix[self._index[a]][self._index[b]]

    def dist_to_set(self, a: str, others: Iterable[str]) -> Optional[Fraction]:
        """min d(a, x) over others; None for an empty set"""
        best = None
        for x in others:
            value = self.d(a, x)
            if best is None or value < best:
                best = value
        return best

    def set_distance(self, first: Iterable[str], second: Iterable[str]) -> Optional[Fraction]:
        """min d(p, q) over p in first, q in second"""
        second = tuple(second)
        best = None
        for p in first:
            value = self.dist_to_set(p, second)
            if value is not None and (best is None or value < best):
                best = value
        return best

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def center_flavor(self) -> bool:
        """True when every point may itself be opened (P ⊆ L)."""
        locations = set(self.locations)
        return all(p in locations for p in self.points)

    def capacity(self, location: str) -> Optional[int]:
        if self.capacities is None:
            return None
        return self.capacities.get(location)

    def color_of(self, point: str) -> str:
        if self.colors is None:
            raise InstanceError("Instance has no colors")
        return self.colors[point]

    @property
    def palette(self) -> Tuple[str, ...]:
        """Sorted colors appearing on points or in the per-color bounds."""
        names = set(self.colors.values()) if self.colors else set()
        if self.color_ell:
            names.update(self.color_ell)
        return tuple(sorted(names))

    def color_classes(self) -> Dict[str, Tuple[str, ...]]:
        classes: Dict[str, List[str]] = {c: [] for c in self.palette}
        for p in self.points:
            classes[self.color_of(p)].append(p)
        return {c: tuple(members) for c, members in classes.items()}

    def point_order(self) -> Mapping[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    # ------------------------------------------------------------ derivation

    def restrict(self, points: Iterable[str]) -> "Instance":
        """Same metric and locations, point set cut down to `points` (kept in original order)."""
        keep = set(points)
        unknown = keep.difference(self.points)
        if unknown:
            raise InstanceError(f"restrict() got ids outside P: {sorted(unknown)[:5]}")
        sub = tuple(p for p in self.points if p in keep)
        colors = None
        if self.colors is not None:
            colors = {p: self.colors[p] for p in sub}
        return replace(self, points=sub, colors=colors)

    def with_params(self, **changes) -> "Instance":
        return replace(self, **changes)

    # ------------------------------------------------------------ validation

    def validate(self, check_metric: bool = True) -> "Instance":
        """
        Check structure and (optionally) the metric axioms.

        Raises:
            InstanceError: on any structural or metric problem
        """
        size = len(self.sites)
        if not self.points:
            raise InstanceError("Instance needs at least one point")
        if not self.locations:
            raise InstanceError("Instance needs at least one location")
        if len(set(self.points)) != len(self.points):
            raise InstanceError("Point ids must be unique")
        if len(set(self.locations)) != len(self.locations):
            raise InstanceError("Location ids must be unique")
        if len(self.matrix) != size or any(len(row) != size for row in self.matrix):
            raise InstanceError(f"Distance matrix must be {size}x{size}")
        if self.k < 1:
            raise InstanceError(f"k must be positive, got {self.k}")
        if self.ell < 0 or self.outliers < 0:
            raise InstanceError("ell and outliers must be nonnegative")
        if self.capacities is not None:
            for x in self.locations:
                u = self.capacities.get(x)
                if u is None or u < 1:
                    raise InstanceError(f"Location {x} needs a positive capacity")
                if self.ell > u:
                    raise InstanceError(f"Lower bound {self.ell} exceeds capacity {u} of {x}")
        if self.colors is not None:
            missing = [p for p in self.points if p not in self.colors]
            if missing:
                raise InstanceError(f"Points without a color: {missing[:5]}")
        if self.color_ell is not None and any(v < 0 for v in self.color_ell.values()):
            raise InstanceError("Per-color lower bounds must be nonnegative")
        if self.opening_cost is not None and self.opening_cost < 0:
            raise InstanceError("Opening cost must be nonnegative")
        if check_metric:
            self._check_metric()
        return self

    def _check_metric(self) -> None:
        m = self.matrix
        size = len(m)
        for i in range(size):
            if m[i][i] != 0:
                raise InstanceError(f"d({self.sites[i]}, {self.sites[i]}) must be 0")
            for j in range(i + 1, size):
                if m[i][j] < 0:
                    raise InstanceError("Distances must be nonnegative")
                if m[i][j] != m[j][i]:
                    raise InstanceError(f"Metric is not symmetric at ({self.sites[i]}, {self.sites[j]})")
        for z in range(size):
            row_z = m[z]
            for i in range(size):
                dz = m[i][z]
                row_i = m[i]
                for j in range(size):
                    if row_i[j] > dz + row_z[j]:
                        raise InstanceError(
                            f"Triangle inequality fails: d({self.sites[i]},{self.sites[j]}) > "
                            f"d({self.sites[i]},{self.sites[z]}) + d({self.sites[z]},{self.sites[j]})"
                        )


@dataclass(frozen=True)
class Clustering:
    """
    Centers are slots: centers[i] is the location opened by slot i, so one
    location may appear several times (soft capacities, spliced halves).
    """
    centers: Tuple[str, ...]
    assignment: Mapping[str, int]
    outliers: FrozenSet[str]
    radius: Fraction
    blocks: Optional[Tuple[Tuple[str, ...], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "assignment", MappingProxyType(dict(self.assignment)))
        object.__setattr__(self, "outliers", frozenset(self.outliers))

    @classmethod
    def build(
        cls,
        inst: Instance,
        centers: Sequence[str],
        assignment: Mapping[str, int],
        outliers: Iterable[str] = (),
        blocks: Optional[Iterable[Iterable[str]]] = None,
    ) -> "Clustering":
        """
        Normalize and evaluate: empty slots are dropped, slots keep their
        relative order, assignment follows inst.points order, radius is
        recomputed.
        """
        used = sorted(set(assignment.values()))
        renumber = {old: new for new, old in enumerate(used)}
        ordered = {
            p: renumber[assignment[p]] for p in inst.points if p in assignment
        }
        if len(ordered) != len(assignment):
            extra = sorted(set(assignment) - set(ordered))
            raise MalformedSolutionError(f"Assignment names points outside P: {extra[:5]}")
        kept_centers = tuple(centers[old] for old in used)
        frozen_blocks = None
        if blocks is not None:
            frozen_blocks = tuple(tuple(b) for b in blocks)
        radius = Fraction(0)
        for p, slot in ordered.items():
            value = inst.d(p, kept_centers[slot])
            if value > radius:
                radius = value
        return cls(kept_centers, ordered, frozenset(outliers), radius, frozen_blocks)

    @classmethod
    def empty(cls, outliers: Iterable[str] = ()) -> "Clustering":
        return cls((), {}, frozenset(outliers), Fraction(0))

    @property
    def size(self) -> int:
        """k' = number of opened slots"""
        return len(self.centers)

    def clusters(self) -> Tuple[Tuple[str, ...], ...]:
        """Member points per slot, in assignment order."""
        members: List[List[str]] = [[] for _ in self.centers]
        for p, slot in self.assignment.items():
            members[slot].append(p)
        return tuple(tuple(m) for m in members)

    def cluster_sizes(self) -> Tuple[int, ...]:
        sizes = [0] * len(self.centers)
        for slot in self.assignment.values():
            sizes[slot] += 1
        return tuple(sizes)


@dataclass(frozen=True)
class FairQuotas:
    """Per-color quotas b_c with block size b = sum of quotas."""
    quotas: Mapping[str, int]
    block: int

    def __post_init__(self):
        object.__setattr__(self, "quotas", MappingProxyType(dict(self.quotas)))

    @property
    def unit_quota(self) -> bool:
        """Some color has b_c = 1 (the factor-2 partition path)."""
        return any(q == 1 for q in self.quotas.values())


VARIANT_FLAGS = {
    "kcenter": {},
    "outliers": {"outliers": True},
    "capacitated": {"capacities": True},
    "fair": {"fairness": True},
    "fair-capacitated": {"fairness": True, "capacities": True},
    "private-kcenter": {"privacy": True},
    "private-outliers": {"privacy": True, "outliers": True},
    "private-capacitated": {"privacy": True, "capacities": True},
    "private-fair": {"privacy": True, "fairness": True},
    "private-fair-capacitated": {"privacy": True, "fairness": True, "capacities": True},
    "strongly-private": {"strong_privacy": True},
    "private-capacitated-fl": {"privacy": True, "capacities": True},
}

_ALLOWED_SHAPES = (
    frozenset(),
    frozenset({"outliers"}),
    frozenset({"capacities"}),
    frozenset({"fairness"}),
    frozenset({"fairness", "capacities"}),
)


@dataclass(frozen=True)
class ConstraintSet:
    """Active constraint flags plus the parameters they read."""
    k: int
    privacy: bool = False
    ell: int = 0
    outliers: bool = False
    max_outliers: int = 0
    capacities: Optional[Mapping[str, int]] = None
    fairness: bool = False
    strong_privacy: bool = False
    color_ell: Optional[Mapping[str, int]] = None

    def __post_init__(self):
        object.__setattr__(self, "capacities", _frozen_map(self.capacities))
        object.__setattr__(self, "color_ell", _frozen_map(self.color_ell))
        if self.strong_privacy:
            if self.privacy or self.shape:
                raise InstanceError("Strong privacy is only supported on its own")
            if self.color_ell is None:
                raise InstanceError("Strong privacy needs per-color lower bounds")
        elif self.shape not in _ALLOWED_SHAPES:
            raise InstanceError(f"Unsupported constraint combination: {sorted(self.shape)}")
        if not self.outliers and self.max_outliers:
            raise InstanceError("Outlier budget given while outliers are disabled")

    @property
    def shape(self) -> FrozenSet[str]:
        """Active non-privacy flags."""
        flags = set()
        if self.outliers:
            flags.add("outliers")
        if self.capacities is not None:
            flags.add("capacities")
        if self.fairness:
            flags.add("fairness")
        return frozenset(flags)

    @classmethod
    def from_instance(
        cls,
        inst: Instance,
        privacy: bool = False,
        outliers: bool = False,
        capacities: bool = False,
        fairness: bool = False,
        strong_privacy: bool = False,
    ) -> "ConstraintSet":
        if capacities and inst.capacities is None:
            raise InstanceError("Capacities requested but the instance has none")
        if (fairness or strong_privacy) and inst.colors is None:
            raise InstanceError("Colors requested but the instance has none")
        return cls(
            k=inst.k,
            privacy=privacy,
            ell=inst.ell if privacy else 0,
            outliers=outliers,
            max_outliers=inst.outliers if outliers else 0,
            capacities=inst.capacities if capacities else None,
            fairness=fairness,
            strong_privacy=strong_privacy,
            color_ell=(inst.color_ell or {}) if strong_privacy else None,
        )

    @classmethod
    def for_variant(cls, inst: Instance, variant: str) -> "ConstraintSet":
        if variant not in VARIANT_FLAGS:
            raise UnknownNameError(f"Unknown variant: {variant}")
        return cls.from_instance(inst, **VARIANT_FLAGS[variant])

    def relaxed(self) -> "ConstraintSet":
        """The same constraints with the privacy flag off."""
        return replace(self, privacy=False, ell=0)

    def with_budget(self, k: int, max_outliers: Optional[int] = None) -> "ConstraintSet":
        if max_outliers is None:
            max_outliers = self.max_outliers
        return replace(self, k=k, max_outliers=max_outliers)

    def key(self) -> tuple:
        caps = tuple(sorted(self.capacities.items())) if self.capacities is not None else None
        bounds = tuple(sorted(self.color_ell.items())) if self.color_ell is not None else None
        return (self.k, self.privacy, self.ell, self.outliers, self.max_outliers, caps,
                self.fairness, self.strong_privacy, bounds)


# ---------------------------------------------------------------- operations

def candidate_radii(inst: Instance) -> List[Fraction]:
    """Sorted distinct distances d(p, l) over P x L."""
    values = {inst.d(p, l) for p in inst.points for l in inst.locations}
    return sorted(values)


def eval_radius(inst: Instance, sol: Clustering) -> Fraction:
    """
    Max distance from an assigned point to its center, 0 when nothing is assigned.

    Raises:
        MalformedSolutionError: a non-outlier point is unassigned, an id is unknown
            or a slot index is out of range
    """
    points = set(inst.points)
    stray = [p for p in (*sol.assignment, *sol.outliers) if p not in points]
    if stray:
        raise MalformedSolutionError(f"Solution names ids outside P: {sorted(stray)[:5]}")
    both = [p for p in sol.outliers if p in sol.assignment]
    if both:
        raise MalformedSolutionError(f"Points both assigned and outliers: {sorted(both)[:5]}")
    radius = Fraction(0)
    for p in inst.points:
        if p in sol.outliers:
            continue
        slot = sol.assignment.get(p)
        if slot is None:
            raise MalformedSolutionError(f"Point {p} is neither assigned nor an outlier")
        if not 0 <= slot < len(sol.centers):
            raise MalformedSolutionError(f"Point {p} names missing slot {slot}")
        value = inst.d(p, sol.centers[slot])
        if value > radius:
            radius = value
    return radius


def fair_structure(inst: Instance) -> FairQuotas:
    """
    b_c = |c(P)| / gcd of all class sizes, b = sum of b_c.

    Raises:
        InstanceError: no colors, or a palette color with no points
    """
    if inst.colors is None:
        raise InstanceError("Fairness needs colors")
    classes = inst.color_classes()
    empty = [c for c, members in classes.items() if not members]
    if empty:
        raise InstanceError(f"Empty color classes: {empty}")
    counts = {c: len(members) for c, members in classes.items()}
    g = reduce(gcd, counts.values())
    quotas = {c: count // g for c, count in counts.items()}
    return FairQuotas(quotas, sum(quotas.values()))


def is_fair_cluster(members: Sequence[str], inst: Instance, totals: Mapping[str, int]) -> bool:
    """Integer cross-multiplication test |c(C)|*|d(P)| == |d(C)|*|c(P)| for all color pairs."""
    counts = {c: 0 for c in totals}
    for p in members:
        counts[inst.color_of(p)] += 1
    for c, d in combinations(sorted(totals), 2):
        if counts[c] * totals[d] != counts[d] * totals[c]:
            return False
    return True
