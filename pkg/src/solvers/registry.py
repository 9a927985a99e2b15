"""
Underlying solver registry, keyed by the ids accepted by --underlying.
"""
from typing import Callable, Dict, List

from core.errors import UnknownNameError
from solvers.base_solver import ConstrainedSolver
from solvers.exact import ExactSolver
from solvers.gonzalez import GonzalezSolver
from solvers.outliers import OutliersSolver
from solvers.soft_capacitated import SoftCapacitatedSolver
from solvers.supplier import SupplierSolver


def _fairlet(supplier: bool) -> Callable[[], ConstrainedSolver]:
    def build() -> ConstrainedSolver:
        from fairness.fairlet_center import FairletSolver
        return FairletSolver(supplier=supplier)
    return build


def _private_capacitated() -> ConstrainedSolver:
    from privacy.variants import PrivateCapacitatedSweep, PrivatizedSolver
    return PrivatizedSolver(PrivateCapacitatedSweep, ExactSolver(), frozenset({"capacities"}))


UNDERLYING: Dict[str, Callable[[], ConstrainedSolver]] = {
    "gonzalez": GonzalezSolver,
    "hs-supplier": SupplierSolver,
    "outliers-greedy": OutliersSolver,
    "soft-capacitated": SoftCapacitatedSolver,
    "exact": ExactSolver,
    "fair-fairlet-center": _fairlet(False),
    "fair-fairlet-supplier": _fairlet(True),
    "private-capacitated": _private_capacitated,
}


def available() -> List[str]:
    return sorted(UNDERLYING)


def get_solver(name: str) -> ConstrainedSolver:
    """
    Raises:
        UnknownNameError: unknown id
    """
    if name not in UNDERLYING:
        raise UnknownNameError(f"Unknown underlying solver: {name} (known: {', '.join(available())})")
    return UNDERLYING[name]()
