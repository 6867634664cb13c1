"""
Isogeny primes of Q(sqrt 5)
===========================

Run the full pipeline on a real quadratic field and look at where each
candidate prime came from.
"""

from isoprimes.orchestrator import RunConfig, run_combined

report = run_combined(RunConfig(D=5))
print(report.to_text())

# every prime beyond Mazur's list has a route that explains it
for p in report.beyond_mazur:
    pr = report.provenance[p]
    print(p, pr.reason, [r.route for r in pr.routes if r.passes])

# primes that were candidates but got removed
removed = sorted(p for p, pr in report.provenance.items() if not pr.kept)
print("removed:", removed)
