"""Residue fields F_p[x]/(g) and small polynomial helpers mod p."""
from __future__ import annotations

from typing import Sequence

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

from .errors import IsoprimesError
from .nf import NFElement


def poly_factor_mod(f: Sequence[int], p: int) -> list[tuple[tuple[int, ...], int]]:
    """Monic irreducible factors (low -> high) of f mod p with multiplicities, sorted."""
    hi = [int(c) % p for c in reversed(f)]
    _, facs = gf_factor(hi, p, ZZ)
    out = [(tuple(int(c) for c in reversed(g)), m) for g, m in facs]
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def poly_roots_mod(f: Sequence[int], p: int) -> list[int]:
    return sorted((-g[0]) % p for g, _ in poly_factor_mod(f, p) if len(g) == 2)


def _polymulmod(a, b, g, p):
    n = len(g) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    for top in range(len(out) - 1, n - 1, -1):
        t = out[top] % p
        if t:
            for i in range(n):
                out[top - n + i] -= t * g[i]
        out[top] = 0
    res = [c % p for c in out[:n]]
    return res + [0] * (n - len(res))


class ResidueField:
    """F_p[x]/(g) for a monic irreducible g mod p; elements are tuples of length deg g."""

    def __init__(self, p: int, g: Sequence[int]):
        self.p = p
        self.g = tuple(int(c) % p for c in g)
        self.f = len(self.g) - 1
        self.order = p ** self.f

    def one(self):
        return (1,) + (0,) * (self.f - 1)

    def const(self, c: int):
        return (c % self.p,) + (0,) * (self.f - 1)

    def mul(self, a, b):
        if self.f == 1:
            return ((a[0] * b[0]) % self.p,)
        return tuple(_polymulmod(a, b, self.g, self.p))

    def pow(self, a, n: int):
        if self.f == 1:
            return (pow(a[0], n, self.p),)
        if n < 0:
            a, n = self.inv(a), -n
        result, base = self.one(), a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero in residue field")
        if self.f == 1:
            return (pow(a[0], -1, self.p),)
        return self.pow(a, self.order - 2)

    def is_zero(self, a) -> bool:
        return not any(a)

    def in_prime_field(self, a) -> bool:
        return not any(a[1:])

    def reduce_poly(self, num: Sequence[int]):
        """Image of the polynomial num(x) mod (p, g)."""
        p = self.p
        if self.f == 1:
            r = (-self.g[0]) % p
            acc = 0
            for c in reversed(num):
                acc = (acc * r + c) % p
            return (acc,)
        acc = [0] * self.f
        x = [0, 1] + [0] * (self.f - 2) if self.f > 1 else [0]
        for c in reversed(num):
            acc = _polymulmod(acc, x, self.g, p)
            acc[0] = (acc[0] + c) % p
        return tuple(acc)

    def reduce(self, elem: NFElement):
        if elem.den % self.p == 0:
            raise IsoprimesError("ALPHA_NOT_COPRIME", f"denominator of {elem} divisible by {self.p}")
        v = self.reduce_poly(elem.num)
        if elem.den != 1:
            v = self.mul(v, self.const(pow(elem.den, -1, self.p)))
        return v

    def __repr__(self) -> str:
        return f"ResidueField(p={self.p}, g={self.g})"


def _vec_mulmod(a, b, f_low, q):
    """Rowwise product of polynomials a, b (arrays n x d) mod (f, q_row), f monic."""
    import numpy as np
    n, d = a.shape
    prod = np.zeros((n, 2 * d - 1), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            prod[:, i + j] = (prod[:, i + j] + a[:, i] * b[:, j]) % q
    for k in range(2 * d - 2, d - 1, -1):
        c = prod[:, k]
        for i in range(d):
            prod[:, k - d + i] = (prod[:, k - d + i] - c * f_low[i]) % q
    return prod[:, :d]


def splits_completely_mask(f: Sequence[int], qs: Sequence[int]):
    """For each q, whether x^q = x mod (f, q); for a Galois f and q unramified this is
    exactly the condition that q splits completely.  Needs q < 2^24."""
    import numpy as np
    d = len(f) - 1
    qv = np.array(qs, dtype=np.int64)
    n = len(qv)
    if d == 1:
        return np.ones(n, dtype=bool)
    f_low = [int(c) for c in f[:d]]
    x = np.zeros((n, d), dtype=np.int64)
    x[:, 1] = 1
    result = np.zeros((n, d), dtype=np.int64)
    result[:, 0] = 1
    base = x.copy()
    e = qv.copy()
    while np.any(e > 0):
        odd = (e & 1).astype(bool)
        if odd.any():
            result[odd] = _vec_mulmod(result[odd], base[odd], f_low, qv[odd])
        e >>= 1
        live = e > 0
        if live.any():
            base[live] = _vec_mulmod(base[live], base[live], f_low, qv[live])
    return np.all(result == x % qv[:, None], axis=1)
