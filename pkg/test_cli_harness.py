"""
Command-line harness: solve, verify, oracle, bench and factors through main()
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent / "src"))

import json

import pytest

from cli.commands import (
    EXIT_CONTRACT,
    EXIT_FAILED,
    EXIT_INFEASIBLE,
    EXIT_MALFORMED,
    EXIT_OK,
    EXIT_SIZE_CAP,
    EXIT_UNKNOWN,
    exit_code_for,
    main,
)
from core.documents import parse_solution
from core.errors import ContractViolation, InfeasibleInstanceError, InvalidInputError, PreconditionError

INSTANCES = Path(__file__).parent / "data" / "instances"


def instance_path(name):
    return str(INSTANCES / name)


def write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


@pytest.fixture
def solved_i1(tmp_path):
    out = tmp_path / "i1.solution.json"
    code = main(["solve", "--variant", "private-kcenter", "--input", instance_path("i1_line.json"),
                 "--output", str(out)])
    assert code == EXIT_OK
    return out


class TestSolve:
    def test_private_outliers_with_oracle(self, tmp_path):
        out, report = tmp_path / "sol.json", tmp_path / "report.json"
        code = main(["solve", "--variant", "private-outliers", "--underlying", "exact",
                     "--input", instance_path("i3_outliers.json"), "--output", str(out),
                     "--report", str(report), "--oracle"])
        assert code == EXIT_OK
        doc = parse_solution(out.read_text())
        assert doc.outliers == ["p100"]
        assert doc.radius == "1"
        data = json.loads(report.read_text())
        assert data["feasible"] is True
        assert data["oracle"] == "1"
        assert data["declared_factor"] == "3"
        assert data["within_factor"] is True

    def test_tau_trace_file(self, tmp_path):
        trace = tmp_path / "trace.jsonl"
        code = main(["solve", "--variant", "private-outliers", "--underlying", "exact",
                     "--input", instance_path("i3_outliers.json"), "--output", str(tmp_path / "s.json"),
                     "--tau-trace", str(trace)])
        assert code == EXIT_OK
        records = [json.loads(line) for line in trace.read_text().splitlines()]
        assert records[-1]["status"] == "accepted"

    def test_facility_location(self, tmp_path):
        out, report = tmp_path / "fl.json", tmp_path / "fl.report.json"
        code = main(["solve", "--variant", "private-capacitated-fl", "--input", instance_path("fl_line.json"),
                     "--output", str(out), "--report", str(report), "--oracle"])
        assert code == EXIT_OK
        assert parse_solution(out.read_text()).total_cost is not None
        data = json.loads(report.read_text())
        assert "cost" in data and "radius" not in data
        assert data["within_factor"] is True

    def test_infeasible_budget(self, tmp_path):
        payload = json.loads((INSTANCES / "i1_line.json").read_text())
        payload["k"] = 3
        out = tmp_path / "never.json"
        code = main(["solve", "--variant", "private-kcenter", "--input", write_json(tmp_path / "i.json", payload),
                     "--output", str(out)])
        assert code == EXIT_INFEASIBLE
        assert not out.exists()

    def test_size_cap(self, tmp_path):
        points = [f"q{i}" for i in range(13)]
        payload = {"points": points, "k": 1, "ell": 1,
                   "metric": {"kind": "euclidean", "coords": {p: [i, 0] for i, p in enumerate(points)},
                              "denominator": 1}}
        code = main(["solve", "--variant", "private-kcenter", "--underlying", "exact",
                     "--input", write_json(tmp_path / "big.json", payload)])
        assert code == EXIT_SIZE_CAP

    def test_unknown_names(self):
        assert main(["solve", "--variant", "private-everything", "--input", instance_path("i1_line.json")]) \
            == EXIT_UNKNOWN
        assert main(["solve", "--variant", "private-kcenter", "--underlying", "annealing",
                     "--input", instance_path("i1_line.json")]) == EXIT_UNKNOWN

    def test_malformed_instance(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"points": ["a"]}', encoding="utf-8")
        assert main(["solve", "--variant", "kcenter", "--input", str(bad)]) == EXIT_MALFORMED
        assert main(["solve", "--variant", "kcenter", "--input", str(tmp_path / "missing.json")]) == EXIT_MALFORMED


class TestVerify:
    def test_feasible_pair(self, solved_i1, tmp_path):
        report = tmp_path / "verify.json"
        code = main(["verify", "--input", instance_path("i1_line.json"), "--solution", str(solved_i1),
                     "--report", str(report)])
        assert code == EXIT_OK
        assert json.loads(report.read_text())["feasible"] is True

    def test_radius_mismatch(self, solved_i1, tmp_path):
        doc = json.loads(solved_i1.read_text())
        doc["radius"] = "5"
        report = tmp_path / "verify.json"
        code = main(["verify", "--input", instance_path("i1_line.json"),
                     "--solution", write_json(tmp_path / "bad.json", doc), "--report", str(report)])
        assert code == EXIT_FAILED
        kinds = [v["kind"] for v in json.loads(report.read_text())["violations"]]
        assert "radius" in kinds

    def test_cluster_below_lower_bound(self, solved_i1, tmp_path):
        doc = json.loads(solved_i1.read_text())
        moved = next(p for p, slot in doc["assignment"].items() if slot == 0)
        doc["assignment"][moved] = 1
        report = tmp_path / "verify.json"
        code = main(["verify", "--input", instance_path("i1_line.json"),
                     "--solution", write_json(tmp_path / "bad.json", doc), "--report", str(report)])
        assert code == EXIT_FAILED
        kinds = [v["kind"] for v in json.loads(report.read_text())["violations"]]
        assert "privacy" in kinds

    def test_foreign_point(self, solved_i1, tmp_path):
        doc = json.loads(solved_i1.read_text())
        doc["assignment"]["stranger"] = 0
        code = main(["verify", "--input", instance_path("i1_line.json"),
                     "--solution", write_json(tmp_path / "bad.json", doc)])
        assert code == EXIT_MALFORMED

    def test_facility_cost_recomputed(self, tmp_path):
        out = tmp_path / "fl.json"
        assert main(["solve", "--variant", "private-capacitated-fl", "--input", instance_path("fl_line.json"),
                     "--output", str(out)]) == EXIT_OK
        assert main(["verify", "--input", instance_path("fl_line.json"), "--solution", str(out),
                     "--report", str(tmp_path / "ok.json")]) == EXIT_OK
        doc = json.loads(out.read_text())
        doc["total_cost"] = "1/2"
        assert main(["verify", "--input", instance_path("fl_line.json"),
                     "--solution", write_json(tmp_path / "bad.json", doc),
                     "--report", str(tmp_path / "bad.report.json")]) == EXIT_FAILED


class TestOracle:
    def test_optimum(self, tmp_path):
        out = tmp_path / "oracle.json"
        code = main(["oracle", "--variant", "private-outliers", "--input", instance_path("i3_outliers.json"),
                     "--output", str(out)])
        assert code == EXIT_OK
        assert json.loads(out.read_text())["optimum"] == "1"

    def test_infeasible(self, tmp_path):
        payload = json.loads((INSTANCES / "i1_line.json").read_text())
        payload["ell"] = 3
        code = main(["oracle", "--variant", "private-kcenter",
                     "--input", write_json(tmp_path / "i.json", payload)])
        assert code == EXIT_INFEASIBLE

    def test_color_class_below_its_bound(self, tmp_path):
        points = ["p0", "p1", "p2"]
        payload = {"points": points, "k": 1,
                   "metric": {"kind": "matrix", "sites": points,
                              "matrix": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]]},
                   "colors": {"p0": "red", "p1": "red", "p2": "blue"},
                   "color_ell": {"red": 1, "blue": 2}}
        path = write_json(tmp_path / "short.json", payload)
        assert main(["oracle", "--variant", "strongly-private", "--input", path]) == EXIT_INFEASIBLE
        assert main(["solve", "--variant", "strongly-private", "--input", path]) == EXIT_INFEASIBLE


class TestBench:
    def run(self, tmp_path, name, *extra):
        report = tmp_path / name
        code = main(["bench", "--variant", "private-outliers", "--underlying", "exact", "--trials", "4",
                     "--max-n", "6", "--seed", "3", "--report", str(report), *extra])
        return code, report.read_text()

    def test_deterministic(self, tmp_path):
        first = self.run(tmp_path, "a.json")
        second = self.run(tmp_path, "b.json")
        assert first[0] == EXIT_OK
        assert first == second
        summary = json.loads(first[1])["variants"][0]
        assert summary["breaches"] == 0
        assert summary["trials"] == 4

    def test_without_oracle(self, tmp_path):
        code, text = self.run(tmp_path, "c.json", "--no-oracle")
        assert code == EXIT_OK
        data = json.loads(text)
        assert data["with_oracle"] is False
        assert "worst_ratio" not in data["variants"][0]


def test_factors(capsys):
    assert main(["factors"]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "private-fair-capacitated" in printed
    assert "225" in printed


def test_log_level_override(capsys):
    from utils import console
    try:
        assert main(["--log-level", "ERROR", "oracle", "--variant", "private-outliers",
                     "--input", instance_path("i3_outliers.json")]) == EXIT_OK
        assert not console.enabled("INFO")
    finally:
        console.set_level("INFO")
    assert json.loads(capsys.readouterr().out)["optimum"] == "1"


@pytest.mark.parametrize("error, code", [
    (ContractViolation("x"), EXIT_CONTRACT),
    (InvalidInputError("x"), EXIT_CONTRACT),
    (InfeasibleInstanceError("x"), EXIT_INFEASIBLE),
    (PreconditionError("x"), EXIT_MALFORMED),
])
def test_exit_codes(error, code):
    assert exit_code_for(error) == code
