"""Characteristic polynomials of Frobenius x^2 + t x + q^f (Waterhouse) and power traces."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt


@dataclass(frozen=True)
class FrobeniusPolynomial:
    t: int
    q: int
    f: int
    case: str

    @property
    def kind(self) -> str:
        return "ordinary" if self.case == "1" else "supersingular"

    @property
    def norm(self) -> int:
        return self.q ** self.f


def waterhouse_case(t: int, q: int, f: int) -> str | None:
    """The Waterhouse case tag for x^2 + t x + q^f, or None if it is not a Frobenius polynomial."""
    N = q ** f
    if t * t > 4 * N:
        return None
    if gcd(t, q) == 1:
        return "1"
    if f % 2 == 0:
        half = q ** (f // 2)
        if abs(t) == 2 * half:
            return "2"
        if abs(t) == half and q % 3 != 1:
            return "3"
        if t == 0 and q % 4 != 1:
            return "5ii"
        return None
    if q in (2, 3) and abs(t) == q ** ((f + 1) // 2):
        return "4"
    if t == 0:
        return "5i"
    return None


def is_frobenius_polynomial(t: int, q: int, f: int) -> tuple[bool, str | None]:
    case = waterhouse_case(t, q, f)
    return case is not None, case


@lru_cache(maxsize=4096)
def _traces(q: int, f: int) -> tuple[FrobeniusPolynomial, ...]:
    N = q ** f
    bound = isqrt(4 * N)
    out = []
    for t in range(-bound, bound + 1):
        case = waterhouse_case(t, q, f)
        if case is not None:
            out.append(FrobeniusPolynomial(t, q, f, case))
    return tuple(out)


def enumerate_frobenius_traces(q: int, f: int) -> list[FrobeniusPolynomial]:
    return list(_traces(q, f))


def ordinary_traces(q: int, f: int) -> list[int]:
    return [fp.t for fp in _traces(q, f) if fp.case == "1"]


def supersingular_traces(q: int, f: int) -> list[FrobeniusPolynomial]:
    return [fp for fp in _traces(q, f) if fp.case != "1"]


@dataclass(frozen=True)
class PowerTrace:
    n: int
    s: int
    norm: int


def power_trace(t: int, q: int, f: int, n: int) -> PowerTrace:
    """s_n = beta^n + conj(beta)^n for beta a root of x^2 + t x + q^f."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    N = q ** f
    return PowerTrace(n, _lucas(t, N, n), N ** n)


def _lucas(t: int, N: int, n: int) -> int:
    # fast doubling on (s_m, s_{m+1}) using s_{2m} = s_m^2 - 2N^m, s_{2m+1} = s_m s_{m+1} + t N^m
    if n == 0:
        return 2
    s_m, s_m1, Nm = 2, -t, 1  # m = 0
    for bit in bin(n)[2:]:
        s2m = s_m * s_m - 2 * Nm
        s2m1 = s_m * s_m1 + t * Nm
        Nm2 = Nm * Nm
        if bit == "1":
            # m -> 2m+1
            s2m2 = s_m1 * s_m1 - 2 * Nm * N
            s_m, s_m1, Nm = s2m1, s2m2, Nm2 * N
        else:
            s_m, s_m1, Nm = s2m, s2m1, Nm2
    return s_m


def power_trace_recurrence(t: int, q: int, f: int, n: int) -> int:
    """Plain linear recurrence; used as a cross-check of the doubling formulas."""
    N = q ** f
    a, b = 2, -t
    if n == 0:
        return a
    for _ in range(n - 1):
        a, b = b, -t * b - N * a
    return b
