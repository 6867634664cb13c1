"""Small integer utilities: Kronecker symbol, squarefreeness, prime iteration, lcm/gcd with zero."""
from __future__ import annotations

from functools import reduce
from math import gcd
from typing import Iterable, Iterator

from sympy import factorint, isprime, nextprime


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n) for n >= 1."""
    if n <= 0:
        raise ValueError("n must be positive")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(a, n)


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    return all(e == 1 for e in factorint(n).values())


def primes_from(start: int = 2) -> Iterator[int]:
    p = start if start >= 2 and isprime(start) else nextprime(max(start - 1, 1))
    while True:
        yield p
        p = nextprime(p)


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


def lcm0(*xs: int) -> int:
    """lcm with 0 absorbing; lcm() = 1."""
    out = 1
    for x in xs:
        if x == 0:
            return 0
        out = abs(out * x) // gcd(out, x)
    return out


def lcm_iter(xs: Iterable[int]) -> int:
    return lcm0(*list(xs))


def gcd_iter(xs: Iterable[int]) -> int:
    """gcd with gcd(0, x) = x; empty gcd = 0."""
    return reduce(gcd, (abs(x) for x in xs), 0)


MAZUR_PRIMES = frozenset({2, 3, 5, 7, 11, 13, 17, 19, 37, 43, 67, 163})
