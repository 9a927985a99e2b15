"""
Guarantee ledger: published factors and declared factors per underlying solver
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent / "src"))

import pytest

from conftest import line_instance
from core.errors import UnknownNameError
from evaluation.ledger import GuaranteeLedger
from fairness.fairlet_center import FairletSolver
from solvers.exact import ExactSolver
from solvers.gonzalez import GonzalezSolver
from solvers.outliers import OutliersSolver
from solvers.registry import get_solver

ledger = GuaranteeLedger()


@pytest.mark.parametrize("variant, setting, factor", [
    ("private-kcenter", "center", 4),
    ("private-kcenter", "supplier", 5),
    ("private-outliers", "center", 4),
    ("private-capacitated", "center/uniform", 8),
    ("private-capacitated", "center", 11),
    ("private-capacitated", "supplier", 13),
    ("fair", "center", 14),
    ("fair", "supplier/unit-quota", 5),
    ("private-fair", "center", 40),
    ("private-fair", "supplier", 41),
    ("private-fair", "center/unit-quota", 10),
    ("private-fair-capacitated", "center", 225),
    ("private-fair-capacitated", "center/uniform", 150),
    ("private-fair-capacitated", "supplier", 325),
    ("private-fair-capacitated", "center/unit-quota", 45),
    ("strongly-private", "center", 4),
    ("private-capacitated-fl", "uniform", 3),
])
def test_published(variant, setting, factor):
    assert ledger.published(variant, setting) == factor


def test_unknown_setting():
    with pytest.raises(UnknownNameError):
        ledger.published("private-kcenter", "hyperbolic")


def test_declared(i2):
    assert ledger.declared("private-kcenter", GonzalezSolver(), i2) == 4
    assert ledger.declared("private-outliers", OutliersSolver(), i2) == 5
    assert ledger.declared("kcenter", GonzalezSolver(), i2) == 2
    assert ledger.declared("private-fair", FairletSolver(), i2) == 10
    assert ledger.declared("private-fair", ExactSolver(), i2) == 5
    assert ledger.declared("private-fair-capacitated", ExactSolver(), i2) == 5
    assert ledger.declared("private-capacitated-fl", None, i2) == 3
    assert ledger.declared("private-capacitated", get_solver("private-capacitated"), i2) == 5


def test_declared_general_quota():
    inst = line_instance(list(range(5)), k=1,
                         colors={f"p{i}": c for i, c in enumerate(["red"] * 3 + ["blue"] * 2)})
    assert ledger.declared("private-fair", FairletSolver(), inst) == 40
    assert ledger.declared("private-fair-capacitated", ExactSolver(), inst) == 25


def test_frames():
    frame = ledger.to_frame()
    assert list(frame.columns) == ["variant", "setting", "factor", "basis"]
    assert len(frame) == len(ledger.entries)
    assert "fair-partition" in set(ledger.underlying_frame()["problem"])
