"""
LangGraph workflow for one solve run.
parse -> solve -> verify -> (oracle) -> report
"""
import time
from typing import Optional

from langgraph.graph import END, StateGraph

from core.documents import instance_digest, parse_instance
from evaluation.oracles import oracle_value
from evaluation.report import build_report
from orchestration.dispatch import FACILITY_VARIANT, constraints_for, run_variant, verify
from orchestration.state import RunState
from privacy.framework import TauTrace
from utils import console


def parse_node(state: RunState) -> RunState:
    """Parse node: canonical instance and its digest"""
    inst = parse_instance(state["instance_text"])
    return {
        "instance": inst,
        "digest": instance_digest(inst),
        "stage_sequence": ["parse"],
    }


def solve_node(state: RunState) -> RunState:
    """Solve node: dispatch per variant / underlying"""
    trace = TauTrace()
    start = time.perf_counter()
    outcome = run_variant(state["instance"], state["variant"], state.get("underlying"), trace)
    elapsed = time.perf_counter() - start
    console.info(f"{state['variant']}[{outcome.underlying or 'brute-force base'}]: "
                 f"value {outcome.value} in {elapsed:.3f}s")
    return {
        "outcome": outcome,
        "trace": trace,
        "wall_time": elapsed,
        "stage_sequence": state["stage_sequence"] + ["solve"],
    }


def verify_node(state: RunState) -> RunState:
    """Verify node: recheck the result from scratch"""
    verdict = verify(state["instance"], state["variant"], state["outcome"].clustering)
    return {"verdict": verdict, "stage_sequence": state["stage_sequence"] + ["verify"]}


def oracle_node(state: RunState) -> RunState:
    """Oracle node: exact optimum for the ratio"""
    inst = state["instance"]
    value = oracle_value(inst, state["variant"], constraints_for(inst, state["variant"]))
    return {"oracle_value": value, "stage_sequence": state["stage_sequence"] + ["oracle"]}


def report_node(state: RunState) -> RunState:
    """Report node: assemble the RunReport"""
    outcome = state["outcome"]
    report = build_report(
        digest=state["digest"],
        variant=state["variant"],
        verdict=state["verdict"],
        underlying=outcome.underlying,
        value=outcome.value,
        facility=state["variant"] == FACILITY_VARIANT,
        oracle=state.get("oracle_value"),
        factor=outcome.factor,
        trace=state["trace"].records,
        wall_time=state.get("wall_time"),
        seed=state.get("seed"),
    )
    return {"report": report, "stage_sequence": state["stage_sequence"] + ["report"]}


# Routing functions
def route_after_verify(state: RunState) -> str:
    """Oracle only on request and only for a feasible result"""
    if state.get("with_oracle") and state["verdict"].feasible:
        return "oracle"
    return "report"


# Build workflow graph
def create_workflow():
    """Create the LangGraph workflow"""
    workflow = StateGraph(RunState)

    workflow.add_node("parse", parse_node)
    workflow.add_node("solve", solve_node)
    workflow.add_node("verify", verify_node)
    workflow.add_node("oracle", oracle_node)
    workflow.add_node("report", report_node)

    workflow.set_entry_point("parse")
    workflow.add_edge("parse", "solve")
    workflow.add_edge("solve", "verify")
    workflow.add_conditional_edges(
        "verify",
        route_after_verify,
        {
            "oracle": "oracle",
            "report": "report",
        }
    )
    workflow.add_edge("oracle", "report")
    workflow.add_edge("report", END)

    return workflow.compile()


run_workflow = create_workflow()


def run_pipeline(instance_text: str, variant: str, underlying: Optional[str] = None,
                 with_oracle: bool = False, seed: Optional[int] = None) -> RunState:
    """
    Run the workflow on one instance document.

    Returns:
        Final state with instance, outcome, verdict and report
    """
    return run_workflow.invoke({
        "instance_text": instance_text,
        "variant": variant,
        "underlying": underlying,
        "with_oracle": with_oracle,
        "seed": seed,
    })
