"""
Scanning for Type 2 primes
==========================

The GRH bound grows quickly with the degree.  A scan up to a cap keeps
the primes that satisfy Condition CC, and can resume from a checkpoint.
"""

import os
import tempfile

from isoprimes.quadratic import QuadraticField
from isoprimes.type_two import type2_grh_bound, type2_scan

for d, disc in [(2, 5), (3, 49), (4, 125)]:
    print(d, disc, f"{type2_grh_bound(d, disc):.3e}")

K = QuadraticField(5)
with tempfile.TemporaryDirectory() as tmp:
    ck = os.path.join(tmp, "scan.json")
    part = type2_scan(K, cap=600000, resume=ck, max_blocks=1)
    print("after one block:", part.complete, part.caveats)
    full = type2_scan(K, cap=600000, resume=ck, shards=2)
    print("survivors:", full.survivors)
