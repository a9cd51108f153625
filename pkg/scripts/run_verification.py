"""Run the randomized suites from a VerificationConfig and write a JSON-lines report.

    python scripts/run_verification.py --out reports/verify.jsonl --dims 2x2,3x3,4x4,8x8
"""

import argparse
import json
import sys
import time
from pathlib import Path

from measurecond.cli import parse_dims
from measurecond.verify import VerificationConfig, run_verification


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--dims", default="2x2,3x3,4x4,8x8")
    ap.add_argument("--tolerance", type=float, default=1e-11)
    ap.add_argument("--out", type=Path, default=Path("reports/verify.jsonl"))
    args = ap.parse_args()

    config = VerificationConfig(args.seed, args.trials, parse_dims(args.dims), args.tolerance)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    with args.out.open("w") as fh:
        summary = run_verification(config, sink=lambda r: fh.write(json.dumps(r.to_json()) + "\n"))
        fh.write(json.dumps(summary.to_json()) + "\n")
    elapsed = time.perf_counter() - start

    print(f"{summary.trials} trials in {elapsed:.1f} s, {summary.failures} failed -> {args.out}")
    for name, value in summary.max_residuals.items():
        print(f"  {name:<26} {value:.3e}")
    return 0 if summary.passed else 1


if __name__ == "__main__":
    sys.exit(main())
