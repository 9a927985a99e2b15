"""
Write sample instance documents to data/instances/.

The three line instances used throughout the tests plus a handful of random
ones per variant (fixed seed).
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import numpy as np

from config import INSTANCES_DIR
from core.documents import serialize_instance
from core.instance import Instance
from evaluation.generators import GeneratorSettings, random_instance
from evaluation.bench import VARIANTS
from utils import console
from utils.helpers import write_text


def line_instance(coords, k, **params) -> Instance:
    points = [f"p{c}" for c in coords]
    matrix = [[abs(a - b) for b in coords] for a in coords]
    return Instance.create(points, points, matrix, k, **params).validate()


def main(per_variant: int = 2, seed: int = 7):
    fixed = {
        "i1_line.json": line_instance([0, 1, 10, 11], 2, ell=2),
        "i2_colored.json": line_instance([0, 1, 10, 11], 2, ell=2,
                                         colors={"p0": "red", "p1": "blue", "p10": "red", "p11": "blue"}),
        "i3_outliers.json": line_instance([0, 1, 2, 100], 1, ell=3, outliers=1),
    }
    for name, inst in fixed.items():
        write_text(INSTANCES_DIR / name, serialize_instance(inst))

    rng = np.random.default_rng(seed)
    written = len(fixed)
    for variant in VARIANTS:
        for i in range(per_variant):
            inst = random_instance(rng, variant, GeneratorSettings())
            write_text(INSTANCES_DIR / f"random_{variant}_{i}.json", serialize_instance(inst))
            written += 1
    console.ok(f"Wrote {written} instances to {INSTANCES_DIR}")


if __name__ == "__main__":
    main()
