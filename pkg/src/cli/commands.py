"""
Command-line front end: solve, verify, oracle, bench, factors.

Exit codes:
    0   ok
    1   verification failure or ratio breach
    2   malformed instance / solution document
    3   infeasible instance
    4   size cap exceeded
    5   unknown variant or underlying solver
    70  internal contract violation
"""
import argparse
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel

from config import BenchConfig
from core.documents import (
    clustering_from_document,
    instance_digest,
    parse_instance,
    parse_solution,
    serialize_solution,
)
from core.errors import (
    ClusteringError,
    ContractViolation,
    InfeasibleInstanceError,
    InstanceError,
    InvalidInputError,
    MalformedSolutionError,
    SizeCapError,
    UnknownNameError,
)
from core.feasibility import Verdict, Violation
from core.instance import VARIANT_FLAGS, eval_radius
from evaluation.bench import VARIANTS, BenchSettings, run_bench
from evaluation.ledger import GuaranteeLedger
from evaluation.oracles import oracle_value
from evaluation.report import build_report
from facility.facility_location import FLSolution
from orchestration.dispatch import FACILITY_VARIANT, constraints_for, verify
from orchestration.graph import run_pipeline
from solvers.registry import available
from utils import console
from utils.helpers import format_rational, write_text

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_MALFORMED = 2
EXIT_INFEASIBLE = 3
EXIT_SIZE_CAP = 4
EXIT_UNKNOWN = 5
EXIT_CONTRACT = 70


class OracleReport(BaseModel):
    digest: str
    variant: str
    optimum: str


def exit_code_for(error: ClusteringError) -> int:
    if isinstance(error, UnknownNameError):
        return EXIT_UNKNOWN
    if isinstance(error, InfeasibleInstanceError):
        return EXIT_INFEASIBLE
    if isinstance(error, SizeCapError):
        return EXIT_SIZE_CAP
    # kernels only ever see networks the solvers built
    if isinstance(error, (ContractViolation, InvalidInputError)):
        return EXIT_CONTRACT
    return EXIT_MALFORMED


def _read(path: Optional[str], what: str) -> str:
    if not path:
        raise InstanceError(f"--{what} is required")
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceError(f"Cannot read {what} {path}: {e}") from e


def _emit(text: str, path: Optional[str]) -> None:
    """Write to path, or to stdout when no path is given"""
    if path:
        write_text(path, text)
    else:
        print(text)


def _check_variant(variant: str) -> None:
    if variant not in VARIANT_FLAGS:
        raise UnknownNameError(f"Unknown variant: {variant} (known: {', '.join(VARIANT_FLAGS)})")


# ---------------------------------------------------------------- commands

def cmd_solve(args: argparse.Namespace) -> int:
    _check_variant(args.variant)
    state = run_pipeline(_read(args.input, "input"), args.variant, args.underlying,
                         with_oracle=args.oracle, seed=args.seed)
    outcome, report = state["outcome"], state["report"]
    solution = serialize_solution(outcome.clustering, args.variant, outcome.underlying, outcome.costs())
    _emit(solution, args.output)
    if args.report:
        write_text(args.report, report.to_json())
    if args.tau_trace:
        state["trace"].write(args.tau_trace)
    if not report.feasible or report.within_factor is False:
        console.error(f"{args.variant}: feasible={report.feasible}, within factor={report.within_factor}")
        return EXIT_FAILED
    console.ok(f"{args.variant}: {'cost' if report.cost else 'radius'} {report.cost or report.radius}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    inst = parse_instance(_read(args.input, "input"))
    doc = parse_solution(_read(args.solution, "solution"))
    variant = args.variant or doc.variant
    _check_variant(variant)
    sol = clustering_from_document(doc)

    known = set(inst.points)
    foreign = sorted((set(sol.assignment) | set(sol.outliers)) - known)
    if foreign:
        raise MalformedSolutionError(f"Solution names points outside the instance: {foreign[:5]}")
    unknown = sorted(set(sol.centers) - set(inst.sites))
    if unknown:
        raise MalformedSolutionError(f"Solution opens unknown sites: {unknown[:5]}")
    bad_slots = sorted({s for s in sol.assignment.values() if not 0 <= s < len(sol.centers)})
    if bad_slots:
        raise MalformedSolutionError(f"Assignment uses unknown center slots: {bad_slots[:5]}")

    verdict = verify(inst, variant, sol)
    try:
        value = eval_radius(inst, sol)
    except MalformedSolutionError:
        value = None
    facility = variant == FACILITY_VARIANT
    if facility and value is not None:
        fl = FLSolution.build(inst, sol.centers, sol.assignment)
        value = fl.total
        if doc.total_cost is not None and doc.total_cost != format_rational(fl.total):
            extra = Violation("cost", None, f"stored {doc.total_cost} != recomputed {format_rational(fl.total)}")
            verdict = Verdict(False, verdict.violations + (extra,))

    report = build_report(instance_digest(inst), variant, verdict, underlying=doc.underlying,
                          value=value, facility=facility, seed=args.seed)
    _emit(report.to_json(), args.report)
    if not verdict.feasible:
        console.warn(f"verify: {verdict.describe()}")
        return EXIT_FAILED
    console.ok("verify: feasible")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    _check_variant(args.variant)
    inst = parse_instance(_read(args.input, "input"))
    value = oracle_value(inst, args.variant, constraints_for(inst, args.variant))
    if value is None:
        raise InfeasibleInstanceError(f"{args.variant}: the instance has no feasible solution")
    report = OracleReport(digest=instance_digest(inst), variant=args.variant, optimum=format_rational(value))
    _emit(report.model_dump_json(indent=2), args.output)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    variants = [args.variant] if args.variant else list(VARIANTS)
    for v in variants:
        _check_variant(v)
    if args.underlying and args.underlying not in available():
        raise UnknownNameError(f"Unknown underlying solver: {args.underlying}")
    settings = BenchSettings(
        variants=variants,
        trials=args.trials,
        seed=args.seed if args.seed is not None else BenchConfig.DEFAULT_SEED,
        max_n=args.max_n,
        with_oracle=not args.no_oracle,
        underlying=args.underlying,
    )
    report = run_bench(settings)
    _emit(report.to_json(), args.report)
    return EXIT_FAILED if report.failed else EXIT_OK


def cmd_factors(args: argparse.Namespace) -> int:
    ledger = GuaranteeLedger()
    print(ledger.to_frame().to_string(index=False))
    print()
    print(ledger.underlying_frame().to_string(index=False))
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="privcluster", description="Private constrained k-center toolkit")
    parser.add_argument("--log-level", dest="log_level", choices=sorted(console.LEVELS),
                        help="Override PRIVCLUSTER_LOG_LEVEL for this run")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Solve an instance")
    solve.add_argument("--variant", required=True)
    solve.add_argument("--underlying")
    solve.add_argument("--input", required=True)
    solve.add_argument("--output")
    solve.add_argument("--report")
    solve.add_argument("--tau-trace", dest="tau_trace")
    solve.add_argument("--oracle", action="store_true", help="Compare against the exact optimum")
    solve.add_argument("--seed", type=int)
    solve.set_defaults(handler=cmd_solve)

    check = sub.add_parser("verify", help="Recheck a solution against an instance")
    check.add_argument("--input", required=True)
    check.add_argument("--solution", required=True)
    check.add_argument("--variant")
    check.add_argument("--report")
    check.add_argument("--seed", type=int)
    check.set_defaults(handler=cmd_verify)

    oracle = sub.add_parser("oracle", help="Exact optimum on oracle-sized instances")
    oracle.add_argument("--variant", required=True)
    oracle.add_argument("--input", required=True)
    oracle.add_argument("--output")
    oracle.set_defaults(handler=cmd_oracle)

    bench = sub.add_parser("bench", help="Random factor-certification sweep")
    bench.add_argument("--variant")
    bench.add_argument("--underlying")
    bench.add_argument("--trials", type=int, default=BenchConfig.DEFAULT_TRIALS)
    bench.add_argument("--seed", type=int)
    bench.add_argument("--max-n", dest="max_n", type=int, default=BenchConfig.DEFAULT_MAX_N)
    bench.add_argument("--no-oracle", dest="no_oracle", action="store_true")
    bench.add_argument("--report")
    bench.set_defaults(handler=cmd_bench)

    factors = sub.add_parser("factors", help="Print the guarantee ledger")
    factors.set_defaults(handler=cmd_factors)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        console.set_level(args.log_level)
    try:
        return args.handler(args)
    except ClusteringError as e:
        code = exit_code_for(e)
        console.error(f"{type(e).__name__}: {e}")
        return code
