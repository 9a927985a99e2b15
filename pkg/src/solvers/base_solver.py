"""
Base solver class for the underlying algorithms the privacy layer consumes.
Provides the common budget handling and shape checks.
"""
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import FrozenSet, Iterable, Optional

from core.errors import InstanceError
from core.instance import Clustering, ConstraintSet, Instance
from utils import console


class ConstrainedSolver(ABC):
    """Abstract base class for all underlying solvers"""

    def __init__(
        self,
        name: str,
        factor: Fraction,
        supports: Iterable[FrozenSet[str]],
        handles_privacy: bool = False,
        handles_strong_privacy: bool = False,
        fair_partition_factor: Optional[Fraction] = None,
    ):
        """
        Initialize base solver.

        Args:
            name: Registry identifier
            factor: Declared approximation factor alpha
            supports: Constraint shapes (sets of non-privacy flags) the solver honours
            handles_privacy: Whether the privacy flag itself is honoured
            handles_strong_privacy: Whether per-color lower bounds are honoured
            fair_partition_factor: beta of the fair subset partition the solver is built on, if any
        """
        self.name = name
        self.factor = Fraction(factor)
        self.supports = frozenset(frozenset(shape) for shape in supports)
        self.handles_privacy = handles_privacy
        self.handles_strong_privacy = handles_strong_privacy
        self.fair_partition_factor = fair_partition_factor

    def accepts(self, cs: ConstraintSet) -> bool:
        if cs.strong_privacy:
            return self.handles_strong_privacy
        if cs.privacy and not self.handles_privacy:
            return False
        return cs.shape in self.supports

    def solve(self, inst: Instance, cs: ConstraintSet) -> Optional[Clustering]:
        """
        Run the solver on (inst, cs).

        Args:
            inst: Instance (possibly a restriction of a larger one)
            cs: Constraint set; cs.k and cs.max_outliers are the budgets

        Returns:
            Clustering honouring cs, or None when the solver finds none
        """
        if cs.k <= 0:
            raise InstanceError(f"{self.name}: budget k must be positive, got {cs.k}")
        if not self.accepts(cs):
            raise InstanceError(f"{self.name} does not handle constraints {sorted(cs.shape)}"
                                f"{' + privacy' if cs.privacy else ''}")
        result = self._solve(inst, cs)
        if result is not None:
            console.trace(f"{self.name}: k={cs.k} |P|={inst.n} -> radius {result.radius}")
        return result

    @abstractmethod
    def _solve(self, inst: Instance, cs: ConstraintSet) -> Optional[Clustering]:
        """
        Solver-specific work. Must be implemented by subclasses.
        """
        pass

    def factor_for(self, inst: Instance) -> Fraction:
        """Declared factor on this instance (solvers built on a fair partition refine it)."""
        return self.factor

    def describe(self) -> str:
        return f"{self.name} (alpha={self.factor})"


def assign_to_nearest(inst: Instance, centers) -> dict:
    """
    Map every point to the slot of its nearest center; ties go to the center
    that comes first in the instance's site order.
    """
    site_rank = {s: i for i, s in enumerate(inst.sites)}
    order = sorted(range(len(centers)), key=lambda i: (site_rank[centers[i]], i))
    assignment = {}
    for p in inst.points:
        best_slot, best = None, None
        for slot in order:
            value = inst.d(p, centers[slot])
            if best is None or value < best:
                best_slot, best = slot, value
        assignment[p] = best_slot
    return assignment


def require_center_flavor(inst: Instance, name: str) -> None:
    if not inst.center_flavor:
        raise InstanceError(f"{name} needs every point to be a location (L = P)")
