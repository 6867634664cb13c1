"""
Weeding with isogeny characters
===============================

For Q(sqrt 47) the prime 59 divides the generic bound, but no isogeny
character of any allowed signature is consistent with Frobenius at 19.
"""

from isoprimes import ice
from isoprimes.quadratic import QuadraticField

K = QuadraticField(47)
sigs = [(0, 12), (0, 4), (4, 4), (0, 6), (4, 6), (4, 12), (0, 8), (6, 6)]
print("59 kept:", ice.ice_filter(K, 59, sigs))

# the value forced at the prime above 19 has 12th roots 14 and 45 mod 59
roots = [r for r in range(1, 59) if pow(r, 12, 59) == 48]
print("roots:", roots, "traces mod 59:", [(r + 19 * pow(r, -1, 59)) % 59 for r in roots])
print("consistent:", ice.frobenius_value_consistent(48, 19, 19, 1, 59))
