"""
Command-line entry point.

    python main.py solve --variant private-outliers --input data/instances/i3_outliers.json
    python main.py verify --input ... --solution ...
    python main.py factors
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from cli.commands import main


if __name__ == "__main__":
    sys.exit(main())
