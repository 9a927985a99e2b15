"""
Instance and solution documents (JSON), modelled with pydantic.

Canonical instance documents always carry an explicit matrix. A Euclidean
metric block is converted once: pairwise distances from scipy, rounded to
a fixed denominator, then closed under shortest paths with networkx so the
rounded matrix still satisfies the triangle inequality exactly.
"""
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Union

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError
from scipy.spatial.distance import cdist

from config import SolverConfig
from core.errors import InstanceError, MalformedSolutionError
from core.instance import Clustering, Instance
from utils.helpers import format_rational, parse_rational, sha256_digest

RationalText = Union[str, int]


class MetricBlock(BaseModel):
    """Either an explicit matrix over `sites` or Euclidean coordinates per site."""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["matrix", "euclidean"] = "matrix"
    sites: Optional[List[str]] = None
    matrix: Optional[List[List[RationalText]]] = None
    coords: Optional[Dict[str, List[Union[float, int, str]]]] = None
    denominator: Optional[int] = None


class InstanceDocument(BaseModel):
    """On-disk instance. `capacities` is an int for uniform(u) or a per-location map."""
    model_config = ConfigDict(extra="forbid")

    points: List[str]
    locations: Optional[List[str]] = None
    metric: MetricBlock
    k: int
    ell: int = 0
    outliers: int = 0
    capacities: Optional[Union[int, Dict[str, int]]] = None
    colors: Optional[Dict[str, str]] = None
    color_ell: Optional[Dict[str, int]] = None
    opening_cost: Optional[RationalText] = None


class SolutionDocument(BaseModel):
    """On-disk clustering; assignment maps point id -> slot index into `centers`."""
    model_config = ConfigDict(extra="forbid")

    variant: str
    underlying: Optional[str] = None
    centers: List[str]
    assignment: Dict[str, int]
    outliers: List[str] = []
    radius: str
    connection_cost: Optional[str] = None
    opening_cost: Optional[str] = None
    total_cost: Optional[str] = None


# ------------------------------------------------------------------- metric

def euclidean_matrix(sites: List[str], coords: Dict[str, List], denominator: int) -> List[List[Fraction]]:
    """Rounded Euclidean distances, closed under shortest paths."""
    missing = [s for s in sites if s not in coords]
    if missing:
        raise InstanceError(f"Sites without coordinates: {missing[:5]}")
    try:
        array = np.array([[float(v) for v in coords[s]] for s in sites], dtype=float)
    except (TypeError, ValueError) as e:
        raise InstanceError(f"Invalid coordinates: {e}") from e
    if array.ndim != 2:
        raise InstanceError("All coordinate vectors must have the same dimension")
    raw = cdist(array, array)
    size = len(sites)
    rounded = [[Fraction(int(round(raw[i][j] * denominator)), denominator) for j in range(size)]
               for i in range(size)]
    return metric_closure(rounded)


def metric_closure(matrix: List[List[Fraction]]) -> List[List[Fraction]]:
    """All-pairs shortest paths over the complete graph weighted by `matrix`."""
    size = len(matrix)
    graph = nx.Graph()
    graph.add_nodes_from(range(size))
    for i in range(size):
        for j in range(i + 1, size):
            graph.add_edge(i, j, weight=min(matrix[i][j], matrix[j][i]))
    closed = nx.floyd_warshall(graph, weight="weight")
    return [[Fraction(0) if i == j else Fraction(closed[i][j]) for j in range(size)]
            for i in range(size)]


# ----------------------------------------------------------------- instances

def instance_from_document(doc: InstanceDocument, validate: bool = True) -> Instance:
    points = list(doc.points)
    locations = list(doc.locations) if doc.locations is not None else list(points)
    metric = doc.metric
    seen = set(points)
    default_sites = points + [x for x in locations if x not in seen]
    sites = list(metric.sites) if metric.sites is not None else default_sites

    if metric.kind == "matrix":
        if metric.matrix is None:
            raise InstanceError("Matrix metric without a matrix")
        matrix = [[parse_rational(v) for v in row] for row in metric.matrix]
    else:
        if metric.coords is None:
            raise InstanceError("Euclidean metric without coordinates")
        denominator = metric.denominator or SolverConfig.EUCLIDEAN_DENOMINATOR
        if denominator < 1:
            raise InstanceError("Denominator must be positive")
        matrix = euclidean_matrix(sites, metric.coords, denominator)

    uniform = doc.capacities if isinstance(doc.capacities, int) else None
    capacities = doc.capacities if isinstance(doc.capacities, dict) else None
    if isinstance(capacities, dict):
        unknown = sorted(set(capacities) - set(locations))
        if unknown:
            raise InstanceError(f"Capacities for unknown locations: {unknown[:5]}")
    if doc.colors is not None:
        unknown = sorted(set(doc.colors) - set(points))
        if unknown:
            raise InstanceError(f"Colors for unknown points: {unknown[:5]}")

    inst = Instance.create(
        points=points,
        locations=locations,
        distances=matrix,
        k=doc.k,
        sites=sites,
        ell=doc.ell,
        outliers=doc.outliers,
        capacities=capacities,
        uniform_capacity=uniform,
        colors=doc.colors,
        color_ell=doc.color_ell,
        opening_cost=parse_rational(doc.opening_cost) if doc.opening_cost is not None else None,
    )
    if validate:
        inst.validate()
    return inst


def instance_to_document(inst: Instance) -> InstanceDocument:
    capacities: Optional[Union[int, Dict[str, int]]] = None
    if inst.uniform_capacity is not None:
        capacities = inst.uniform_capacity
    elif inst.capacities is not None:
        capacities = {x: inst.capacities[x] for x in inst.locations}
    return InstanceDocument(
        points=list(inst.points),
        locations=list(inst.locations),
        metric=MetricBlock(
            kind="matrix",
            sites=list(inst.sites),
            matrix=[[format_rational(v) for v in row] for row in inst.matrix],
        ),
        k=inst.k,
        ell=inst.ell,
        outliers=inst.outliers,
        capacities=capacities,
        colors={p: inst.colors[p] for p in inst.points} if inst.colors is not None else None,
        color_ell=dict(sorted(inst.color_ell.items())) if inst.color_ell is not None else None,
        opening_cost=format_rational(inst.opening_cost) if inst.opening_cost is not None else None,
    )


def parse_instance(text: str, validate: bool = True) -> Instance:
    """
    Parse an instance document.

    Raises:
        InstanceError: malformed JSON, schema errors or metric violations
    """
    try:
        doc = InstanceDocument.model_validate_json(text)
    except ValidationError as e:
        raise InstanceError(f"Malformed instance document: {e.error_count()} error(s): {e.errors()[0]['msg']}") from e
    return instance_from_document(doc, validate=validate)


def serialize_instance(inst: Instance) -> str:
    return instance_to_document(inst).model_dump_json(indent=2, exclude_none=True)


def instance_digest(inst: Instance) -> str:
    return sha256_digest(serialize_instance(inst))


# ----------------------------------------------------------------- solutions

def solution_to_document(
    sol: Clustering,
    variant: str,
    underlying: Optional[str] = None,
    costs: Optional[Dict[str, Fraction]] = None,
) -> SolutionDocument:
    costs = costs or {}
    return SolutionDocument(
        variant=variant,
        underlying=underlying,
        centers=list(sol.centers),
        assignment=dict(sol.assignment),
        outliers=sorted(sol.outliers),
        radius=format_rational(sol.radius),
        connection_cost=format_rational(costs["connection"]) if "connection" in costs else None,
        opening_cost=format_rational(costs["opening"]) if "opening" in costs else None,
        total_cost=format_rational(costs["total"]) if "total" in costs else None,
    )


def serialize_solution(sol: Clustering, variant: str, underlying: Optional[str] = None,
                       costs: Optional[Dict[str, Fraction]] = None) -> str:
    return solution_to_document(sol, variant, underlying, costs).model_dump_json(indent=2, exclude_none=True)


def parse_solution(text: str) -> SolutionDocument:
    """
    Raises:
        MalformedSolutionError: malformed JSON or schema errors
    """
    try:
        return SolutionDocument.model_validate_json(text)
    except ValidationError as e:
        raise MalformedSolutionError(f"Malformed solution document: {e.errors()[0]['msg']}") from e


def clustering_from_document(doc: SolutionDocument) -> Clustering:
    """Raw clustering exactly as stored; callers recompute the radius themselves."""
    try:
        radius = Fraction(doc.radius)
    except (ValueError, ZeroDivisionError) as e:
        raise MalformedSolutionError(f"Invalid radius {doc.radius!r}") from e
    return Clustering(tuple(doc.centers), dict(doc.assignment), frozenset(doc.outliers), radius)

