"""
Complete certification pipeline: every variant against the exact oracle,
then a feasibility-only pass on larger instances.
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent / "src"))

import time

from config import DATA_DIR, BenchConfig, describe
from evaluation.bench import BenchSettings, run_bench
from utils import console
from utils.helpers import write_text


def main() -> int:
    """Run the oracle sweep and the feasibility sweep, save both reports"""
    console.banner("PRIVATE CLUSTERING - CERTIFICATION PIPELINE")
    console.info(f"Started at: {time.strftime('%Y-%m-%d %H:%M:%S')}")
    for line in describe().splitlines():
        console.info(line.strip())

    # Part 1: factor certification
    console.banner("[PART 1] FACTOR CERTIFICATION AGAINST THE EXACT ORACLE")
    certified = run_bench(BenchSettings(
        trials=BenchConfig.DEFAULT_TRIALS,
        seed=BenchConfig.DEFAULT_SEED,
        max_n=BenchConfig.DEFAULT_MAX_N,
    ))
    oracle_file = write_text(DATA_DIR / "certification_report.json", certified.to_json())
    console.ok(f"Certification report saved to {oracle_file}")

    # Part 2: feasibility only, instances beyond the oracle caps
    console.banner("[PART 2] FEASIBILITY SWEEP")
    feasibility = run_bench(BenchSettings(
        trials=max(1, BenchConfig.DEFAULT_TRIALS // 4),
        seed=BenchConfig.DEFAULT_SEED,
        max_n=2 * BenchConfig.DEFAULT_MAX_N,
        with_oracle=False,
    ))
    feasibility_file = write_text(DATA_DIR / "feasibility_report.json", feasibility.to_json())
    console.ok(f"Feasibility report saved to {feasibility_file}")

    failed = certified.failed or feasibility.failed
    console.banner("CERTIFICATION " + ("FAILED" if failed else "COMPLETE"))
    for path in certified.replays + feasibility.replays:
        console.warn(f"replay: {path}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
