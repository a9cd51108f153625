"""Run the acceptance suite and print only the per-criterion PASS/FAIL lines."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

proc = subprocess.run(
    [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider"],
    capture_output=True,
    text=True,
    cwd=ROOT,
)
for line in proc.stdout.splitlines():
    if line.startswith("[criterion"):
        print(line)
print(proc.stdout.strip().splitlines()[-1])
sys.exit(proc.returncode)
