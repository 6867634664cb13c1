"""
Command line and JSON reports
=============================

The same pipeline through the command line entry point, writing a JSON
report to a file.
"""

import json
import os
import tempfile

from isoprimes.cli import main

with tempfile.TemporaryDirectory() as tmp:
    out = os.path.join(tmp, "report.json")
    code = main(["quadratic", "-5", "--format", "json", "--out", out, "--type2-cap", "100000"])
    report = json.load(open(out))
    print("exit code", code)
    print("S_k:", report["superset"])
    print("bounds:", sorted(report["bounds"]))

# an imaginary quadratic field of class number one has infinitely many isogeny primes
print("exit code for D=-7:", main(["quadratic", "-7"]))
