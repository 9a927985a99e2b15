"""
Guarantee ledger: published approximation factors and the composition
rules that derive a declared factor for any (variant, underlying) pair.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import pandas as pd

from core.errors import UnknownNameError
from core.instance import VARIANT_FLAGS, Instance, fair_structure
from fairness.fairlet_center import FairletSolver
from solvers.base_solver import ConstrainedSolver
from utils.helpers import format_rational


@dataclass(frozen=True)
class Guarantee:
    variant: str
    setting: str
    factor: Fraction
    basis: str


# ------------------------------------------------------------ compositions

def plus_two(alpha: Fraction) -> Fraction:
    """Privatizers for outliers, capacities and per-color bounds"""
    return Fraction(alpha) + 2


def fair_privatized(alpha: Fraction) -> Fraction:
    """Private fair clustering on top of an arbitrary fair solver"""
    return 3 * Fraction(alpha) + 2


def fair_privatized_via_fairlets(beta: Fraction, supplier: bool) -> Fraction:
    return 3 * Fraction(beta) + (5 if supplier else 4)


def fairlet_factor(beta: Fraction, supplier: bool) -> Fraction:
    return Fraction(beta) + (3 if supplier else 2)


def contracted(alpha: Fraction, beta: Fraction) -> Fraction:
    """Private capacitated solver alpha on contracted fair subsets of bottleneck beta"""
    return Fraction(alpha) * (2 * Fraction(beta) + 1)


def facility(gamma: Fraction) -> Fraction:
    return 2 * Fraction(gamma) + 1


# Best known factors for the problems without privacy
UNDERLYING_FACTORS: Dict[Tuple[str, str], Fraction] = {
    ("kcenter", "center"): Fraction(2),
    ("kcenter", "supplier"): Fraction(3),
    ("capacitated", "center/uniform"): Fraction(6),
    ("capacitated", "center"): Fraction(9),
    ("capacitated", "supplier"): Fraction(11),
    ("outliers", "center"): Fraction(2),
    ("outliers", "supplier"): Fraction(3),
    ("fair-partition", "unit-quota"): Fraction(2),
    ("fair-partition", "general"): Fraction(12),
}

# alpha of the private capacitated solver used on contracted fair subsets
CONTRACTED_ALPHA: Dict[str, Fraction] = {
    "center": Fraction(9),
    "center/uniform": Fraction(6),
    "supplier": Fraction(13),
    "supplier/uniform": Fraction(9),
}


def _published() -> Tuple[Guarantee, ...]:
    u = UNDERLYING_FACTORS
    two, twelve = u[("fair-partition", "unit-quota")], u[("fair-partition", "general")]
    rows: List[Guarantee] = [
        Guarantee("private-kcenter", "center", plus_two(u[("kcenter", "center")]), "alpha + 2"),
        Guarantee("private-kcenter", "supplier", plus_two(u[("kcenter", "supplier")]), "alpha + 2"),
        Guarantee("private-outliers", "center", plus_two(u[("outliers", "center")]), "alpha + 2"),
        Guarantee("private-outliers", "supplier", plus_two(u[("outliers", "supplier")]), "alpha + 2"),
        Guarantee("private-capacitated", "center/uniform", plus_two(u[("capacitated", "center/uniform")]),
                  "alpha + 2"),
        Guarantee("private-capacitated", "center", plus_two(u[("capacitated", "center")]), "alpha + 2"),
        Guarantee("private-capacitated", "supplier", plus_two(u[("capacitated", "supplier")]), "alpha + 2"),
        Guarantee("fair", "center", fairlet_factor(twelve, False), "beta + 2"),
        Guarantee("fair", "supplier", fairlet_factor(twelve, True), "beta + 3"),
        Guarantee("fair", "center/unit-quota", fairlet_factor(two, False), "beta + 2"),
        Guarantee("fair", "supplier/unit-quota", fairlet_factor(two, True), "beta + 3"),
        Guarantee("private-fair", "center", fair_privatized_via_fairlets(twelve, False), "3 beta + 4"),
        Guarantee("private-fair", "supplier", fair_privatized_via_fairlets(twelve, True), "3 beta + 5"),
        Guarantee("private-fair", "center/unit-quota", fair_privatized_via_fairlets(two, False), "3 beta + 4"),
        Guarantee("private-fair", "supplier/unit-quota", fair_privatized_via_fairlets(two, True), "3 beta + 5"),
    ]
    for setting, alpha in CONTRACTED_ALPHA.items():
        rows.append(Guarantee("private-fair-capacitated", setting, contracted(alpha, twelve),
                              "alpha (2 beta + 1)"))
        rows.append(Guarantee("private-fair-capacitated", f"{setting}/unit-quota", contracted(alpha, two),
                              "alpha (2 beta + 1)"))
    rows.extend([
        Guarantee("strongly-private", "center", plus_two(u[("kcenter", "center")]), "alpha + 2"),
        Guarantee("strongly-private", "supplier", plus_two(u[("kcenter", "supplier")]), "alpha + 2"),
        Guarantee("private-capacitated-fl", "uniform", facility(Fraction(1)), "2 gamma + 1"),
    ])
    return tuple(rows)


PUBLISHED: Tuple[Guarantee, ...] = _published()


class GuaranteeLedger:
    """Declared factors: published ones for lookup, derived ones for certification."""

    def __init__(self, entries: Tuple[Guarantee, ...] = PUBLISHED):
        self.entries = entries

    def published(self, variant: str, setting: str) -> Fraction:
        for g in self.entries:
            if g.variant == variant and g.setting == setting:
                return g.factor
        raise UnknownNameError(f"No published guarantee for {variant} ({setting})")

    def declared(self, variant: str, underlying: Optional[ConstrainedSolver], inst: Instance) -> Fraction:
        """
        Factor the (variant, underlying) combination guarantees on inst.

        Raises:
            UnknownNameError: unknown variant
        """
        if variant not in VARIANT_FLAGS:
            raise UnknownNameError(f"Unknown variant: {variant}")
        if variant == "private-capacitated-fl":
            return facility(Fraction(1))
        if underlying is None:
            raise UnknownNameError(f"{variant} needs an underlying solver to declare a factor")
        alpha = underlying.factor_for(inst)
        if not variant.startswith(("private-", "strongly-")):
            return alpha
        if variant == "private-fair":
            if isinstance(underlying, FairletSolver):
                return fair_privatized_via_fairlets(underlying.partition_factor(inst), underlying.supplier)
            return fair_privatized(alpha)
        if variant == "private-fair-capacitated":
            beta = Fraction(2) if fair_structure(inst).unit_quota else Fraction(12)
            return contracted(alpha, beta)
        return plus_two(alpha)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"variant": g.variant, "setting": g.setting, "factor": format_rational(g.factor), "basis": g.basis}
             for g in self.entries]
        )

    def underlying_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"problem": problem, "setting": setting, "factor": format_rational(f)}
             for (problem, setting), f in UNDERLYING_FACTORS.items()]
        )
