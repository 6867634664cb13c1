"""
Frobenius traces and isogeny signatures
=======================================

Which integers occur as traces of Frobenius over F_q, and how the
signatures of a cubic field fall into orbits.
"""

from importlib import resources

from isoprimes.frobenius import enumerate_frobenius_traces, power_trace
from isoprimes.galois import load_field_data
from isoprimes.signatures import enumerate_all_orbits, orbit

for q, f in [(2, 1), (3, 2), (5, 1)]:
    polys = enumerate_frobenius_traces(q, f)
    print(f"q={q}^{f}:", [(fp.t, fp.kind) for fp in polys])

# the trace of beta^12 feeds the C integers
print("s_12 for t=1, q=2:", power_trace(1, 2, 1, 12).s)

K = load_field_data(str(resources.files("isoprimes.data").joinpath("3.3.49.1.json")))
comp = K.field.composition
for rep, stype in enumerate_all_orbits(comp):
    print(rep, stype.value, len(orbit(rep, comp)))
