"""Integer factorisation with a record of anything left unresolved."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable

from sympy import factorint, isprime

from .errors import IsoprimesError

log = logging.getLogger(__name__)

_TRIAL_LIMIT = 10 ** 5
_DIRECT_DIGITS = 60


@dataclass
class Factored:
    n: int
    factors: dict[int, int] = field(default_factory=dict)
    unresolved: list[int] = field(default_factory=list)  # composite cofactors we could not split

    @property
    def primes(self) -> list[int]:
        return sorted(self.factors)

    def as_dict(self) -> dict:
        return {"n": str(self.n), "factors": {str(p): e for p, e in sorted(self.factors.items())},
                "unresolved": [str(u) for u in self.unresolved]}


_cache: dict[int, dict[int, int]] = {}


def _factor(n: int) -> dict[int, int]:
    hit = _cache.get(n)
    if hit is None:
        hit = {int(p): int(e) for p, e in factorint(n).items()}
        if len(_cache) < 100000:
            _cache[n] = hit
    return hit


def factor_with_ledger(n: int, max_digits: int = 120) -> Factored:
    """Full factorisation of a nonzero integer (sign dropped)."""
    if n == 0:
        raise IsoprimesError("ZERO", "cannot factor 0")
    n = abs(n)
    out = Factored(n)
    if n == 1:
        return out
    small = factorint(n, limit=_TRIAL_LIMIT)
    rest = 1
    for p, e in small.items():
        if p < _TRIAL_LIMIT ** 2 and isprime(p):
            out.factors[int(p)] = int(e)
        else:
            rest *= int(p) ** int(e)
    if rest > 1:
        if len(str(rest)) > max_digits and not isprime(rest):
            out.unresolved.append(rest)
            log.warning("FACTORING_TIMEOUT: %d-digit cofactor left unfactored", len(str(rest)))
        else:
            for p, e in _factor(rest).items():
                out.factors[p] = out.factors.get(p, 0) + e
    return out


def prime_support(n: int, components: Iterable[int] = ()) -> tuple[set[int], list[int]]:
    """Primes dividing n.  If n is large and ``components`` are integers whose lcm is a
    multiple of n, only gcd(n, c) for each component is factored."""
    n = abs(n)
    if n == 0:
        raise IsoprimesError("ZERO", "prime support of 0 requested")
    comps = [abs(c) for c in components if c]
    if len(str(n)) <= _DIRECT_DIGITS or not comps:
        f = factor_with_ledger(n)
        return set(f.factors), f.unresolved
    primes: set[int] = set()
    unresolved: list[int] = []
    for c in comps:
        g = gcd(n, c)
        if g > 1:
            f = factor_with_ledger(g)
            primes |= set(f.factors)
            unresolved += f.unresolved
    return primes, unresolved
