"""
Instances, radius evaluation, feasibility checks and instance documents
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from fractions import Fraction

import pytest

from conftest import line_instance
from core.documents import instance_digest, parse_instance, parse_solution, serialize_instance
from core.errors import InstanceError, MalformedSolutionError, UnknownNameError
from core.feasibility import check_feasible
from core.instance import Clustering, ConstraintSet, Instance, candidate_radii, eval_radius, fair_structure


def test_candidate_radii(i1, i3):
    assert candidate_radii(i1) == [0, 1, 9, 10, 11]
    assert candidate_radii(i3) == [0, 1, 2, 98, 99, 100]
    assert candidate_radii(line_instance([5], k=1)) == [0]


def test_eval_radius(i1, i3):
    sol = Clustering.build(i1, ["p1", "p10"], {"p0": 0, "p1": 0, "p10": 1, "p11": 1})
    assert eval_radius(i1, sol) == 1

    with_outlier = Clustering.build(i3, ["p1"], {"p0": 0, "p1": 0, "p2": 0}, outliers=["p100"])
    assert eval_radius(i3, with_outlier) == 1

    colocated = Clustering.build(i1, ["p0", "p1", "p10", "p11"], {"p0": 0, "p1": 1, "p10": 2, "p11": 3})
    assert eval_radius(i1, colocated) == 0


def test_eval_radius_rejects_unassigned_point(i3):
    sol = Clustering.build(i3, ["p1"], {"p0": 0, "p1": 0, "p2": 0})
    with pytest.raises(MalformedSolutionError):
        eval_radius(i3, sol)


def test_check_feasible_privacy(i1):
    sol = Clustering.build(i1, ["p0", "p10"], {"p0": 0, "p1": 0, "p10": 1, "p11": 1})
    assert check_feasible(i1, ConstraintSet(k=2, privacy=True, ell=2), sol).feasible

    verdict = check_feasible(i1, ConstraintSet(k=2, privacy=True, ell=3), sol)
    assert not verdict.feasible
    assert [(v.kind, v.cluster) for v in verdict.violations] == [("privacy", 0), ("privacy", 1)]


def test_check_feasible_fairness(i2):
    cs = ConstraintSet.from_instance(i2, fairness=True)
    paired = Clustering.build(i2, ["p0", "p10"], {"p0": 0, "p1": 0, "p10": 1, "p11": 1})
    assert check_feasible(i2, cs, paired).feasible

    by_color = Clustering.build(i2, ["p0", "p1"], {"p0": 0, "p10": 0, "p1": 1, "p11": 1})
    verdict = check_feasible(i2, cs, by_color)
    assert verdict.kinds() == ["fairness"]
    assert len(verdict.violations) == 2


def test_check_feasible_reports_every_violation(i1):
    sol = Clustering.build(i1, ["p0", "p1", "p11"], {"p0": 0, "p1": 1, "p10": 2, "p11": 2})
    tampered = Clustering(sol.centers, sol.assignment, sol.outliers, Fraction(5))
    verdict = check_feasible(i1, ConstraintSet(k=2, privacy=True, ell=2), tampered)
    assert verdict.kinds() == ["budget", "privacy", "radius"]


@pytest.mark.parametrize("counts, quotas, block", [
    ({"red": 4, "blue": 2}, {"red": 2, "blue": 1}, 3),
    ({"red": 3, "blue": 3}, {"red": 1, "blue": 1}, 2),
    ({"a": 6, "b": 4, "c": 2}, {"a": 3, "b": 2, "c": 1}, 6),
])
def test_fair_structure(counts, quotas, block):
    colors = [c for c, count in counts.items() for _ in range(count)]
    inst = line_instance(list(range(len(colors))), k=1,
                         colors={f"p{i}": c for i, c in enumerate(colors)})
    structure = fair_structure(inst)
    assert dict(structure.quotas) == quotas
    assert structure.block == block


def test_fair_structure_rejects_empty_class():
    inst = line_instance([0, 1], k=1, colors={"p0": "red", "p1": "red"}, color_ell={"blue": 1})
    with pytest.raises(InstanceError):
        fair_structure(inst)


def test_validate_rejects_triangle_violation():
    with pytest.raises(InstanceError):
        Instance.create(["a", "b", "c"], ["a", "b", "c"], [[0, 1, 5], [1, 0, 1], [5, 1, 0]], k=1).validate()


def test_validate_rejects_lower_bound_above_capacity():
    with pytest.raises(InstanceError):
        line_instance([0, 1, 2], k=1, ell=3, uniform_capacity=2)


def test_unknown_variant(i1):
    with pytest.raises(UnknownNameError):
        ConstraintSet.for_variant(i1, "private-everything")


def test_instance_document_is_canonical(i2):
    text = serialize_instance(i2)
    assert serialize_instance(parse_instance(text)) == text
    assert instance_digest(parse_instance(text)) == instance_digest(i2)


def test_euclidean_front_end():
    text = """
    {"points": ["a", "b", "c"],
     "metric": {"kind": "euclidean", "coords": {"a": [0, 0], "b": [3, 4], "c": [6, 8]}, "denominator": 1},
     "k": 1}
    """
    inst = parse_instance(text)
    assert inst.d("a", "b") == 5
    assert inst.d("a", "c") == 10


def test_malformed_documents():
    with pytest.raises(InstanceError):
        parse_instance('{"points": ["a"], "k": 1}')
    with pytest.raises(InstanceError):
        parse_instance("not json")
    with pytest.raises(MalformedSolutionError):
        parse_solution('{"variant": "kcenter"}')
