"""
Constraint verification: every violation is reported, never just the first.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

from core.errors import MalformedSolutionError
from core.instance import Clustering, ConstraintSet, Instance, eval_radius, is_fair_cluster


@dataclass(frozen=True)
class Violation:
    kind: str
    cluster: Optional[int]
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "cluster": self.cluster, "detail": self.detail}


@dataclass(frozen=True)
class Verdict:
    feasible: bool
    violations: Tuple[Violation, ...]

    def kinds(self) -> List[str]:
        return sorted({v.kind for v in self.violations})

    def describe(self) -> str:
        if self.feasible:
            return "feasible"
        return "; ".join(f"{v.kind}@{v.cluster}: {v.detail}" for v in self.violations)


def check_feasible(inst: Instance, cs: ConstraintSet, sol: Clustering) -> Verdict:
    """
    Check a clustering against exactly the active flags of `cs`.

    The budget and assignment sanity (|C| <= k, centers in L, every non-outlier
    assigned, stored radius equal to the recomputed one) are always checked.
    """
    violations: List[Violation] = []

    try:
        radius = eval_radius(inst, sol)
    except MalformedSolutionError as e:
        return Verdict(False, (Violation("assignment", None, str(e)),))
    if radius != sol.radius:
        violations.append(Violation("radius", None, f"stored {sol.radius} != recomputed {radius}"))

    if sol.size > cs.k:
        violations.append(Violation("budget", None, f"{sol.size} clusters > k={cs.k}"))
    locations = set(inst.locations)
    for i, c in enumerate(sol.centers):
        if c not in locations:
            violations.append(Violation("assignment", i, f"center {c} is not a location"))

    clusters = sol.clusters()

    if cs.privacy:
        for i, members in enumerate(clusters):
            if len(members) < cs.ell:
                violations.append(Violation("privacy", i, f"{len(members)} points < ell={cs.ell}"))

    if cs.capacities is not None:
        for i, members in enumerate(clusters):
            u = cs.capacities.get(sol.centers[i])
            if u is not None and len(members) > u:
                violations.append(Violation("capacity", i, f"{len(members)} points > u={u}"))

    if cs.outliers:
        if len(sol.outliers) > cs.max_outliers:
            violations.append(
                Violation("outliers", None, f"{len(sol.outliers)} outliers > o={cs.max_outliers}")
            )
    elif sol.outliers:
        violations.append(Violation("outliers", None, f"{len(sol.outliers)} outliers while disabled"))

    if cs.fairness:
        totals = {c: len(m) for c, m in inst.color_classes().items()}
        for i, members in enumerate(clusters):
            if not is_fair_cluster(members, inst, totals):
                violations.append(Violation("fairness", i, "color ratio differs from P"))

    if cs.strong_privacy:
        bounds = cs.color_ell or {}
        for i, members in enumerate(clusters):
            counts = {}
            for p in members:
                color = inst.color_of(p)
                counts[color] = counts.get(color, 0) + 1
            for color in sorted(bounds):
                have = counts.get(color, 0)
                if have < bounds[color]:
                    violations.append(
                        Violation("strong_privacy", i, f"{have} points of {color} < {bounds[color]}")
                    )

    return Verdict(not violations, tuple(violations))
