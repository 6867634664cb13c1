"""
The Type 1 bound
================

Find the auxiliary modulus M for small degrees, then bound Type 1
isogeny primes of Q(sqrt 5).
"""

from isoprimes.factoring import factor_with_ledger
from isoprimes.quadratic import QuadraticField
from isoprimes.type_one import R_matrix, construct_M, rank, type_one_bound

for d in range(1, 7):
    M = construct_M(d)
    print(f"d={d}: M={M}")

# for d = 1 the modulus 3 fails because the only row is zero
print(R_matrix(1, 1, 3), rank(R_matrix(1, 1, 3)))

res = type_one_bound(QuadraticField(5))
print("bad formal immersion product:", res.bad_formal_immersion)
print("D(Aux) factors:", factor_with_ledger(res.d_aux).factors)
