"""Isogeny character enumeration: extend chi_{eps,p0} over the class group and test
the extensions against Frobenius data at small primes.

Every uncertain situation resolves to keeping the prime.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from math import gcd, isqrt
from typing import Sequence

from sympy import factorint, primitive_root
from sympy.ntheory import nthroot_mod
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcdex, gf_mul, gf_quo, gf_rem

from .arith import MAZUR_PRIMES, primes_from
from .errors import IsoprimesError
from .ff import ResidueField, poly_factor_mod
from .frobenius import is_frobenius_polynomial
from .nf import NFElement
from .primes import PrimeIdealData
from .signatures import SignatureType, classify_signature, orbit

log = logging.getLogger(__name__)

DEFAULT_TEST_Q = 10


@dataclass
class PrimeAboveP:
    p: int
    poly: tuple[int, ...]  # defining polynomial of k
    factors: list[tuple[tuple[int, ...], int]]  # f mod p, low -> high, with multiplicities
    p0: ResidueField
    unramified: bool

    @property
    def f(self) -> int:
        return self.p0.f


def prime_above_p(backend, p: int) -> PrimeAboveP:
    facs = poly_factor_mod(backend.field.poly, p)
    unram = all(m == 1 for _, m in facs)
    return PrimeAboveP(p, tuple(backend.field.poly), facs, ResidueField(p, facs[0][0]), unram)


def _to_int(rf: ResidueField, v) -> int | None:
    return v[0] if rf.in_prime_field(v) else None


def chi_eps(alpha: NFElement, eps: Sequence[int], pdata: PrimeAboveP):
    """alpha^eps reduced mod p0, as a residue field element."""
    rf = pdata.p0
    out = rf.one()
    for i, a in enumerate(eps):
        if a == 0:
            continue
        v = rf.reduce(alpha.apply_aut(i))
        if rf.is_zero(v):
            raise IsoprimesError("ALPHA_NOT_COPRIME", f"{alpha} is not coprime to {pdata.p}")
        out = rf.mul(out, rf.pow(v, a))
    return out


def is_twelfth_power(c: int, p: int) -> bool:
    c %= p
    return c != 0 and pow(c, (p - 1) // gcd(12, p - 1), p) == 1


def _in_twelfth_powers(rf: ResidueField, v) -> bool:
    c = _to_int(rf, v)
    return c is not None and is_twelfth_power(c, rf.p)


def _primitive_element(rf: ResidueField):
    if rf.f == 1:
        return (primitive_root(rf.p),)
    n = rf.order - 1
    ells = list(factorint(n))
    for x in product(range(rf.p), repeat=rf.f):
        x = x[::-1]
        if any(x) and all(rf.pow(x, n // l) != rf.one() for l in ells):
            return x
    raise RuntimeError("no primitive element found")


def _crt_lifts(pdata: PrimeAboveP) -> list[list[int]]:
    """Integer polynomials congruent to a primitive element mod one prime above p and to 1 mod the others."""
    p = pdata.p
    f_hi = [c % p for c in reversed(pdata.poly)]
    lifts = []
    for g, _ in pdata.factors:
        rf = ResidueField(p, g)
        gen = _primitive_element(rf)
        g_hi = [c % p for c in reversed(g)]
        cof = gf_quo(f_hi, g_hi, p, ZZ)  # f / g
        s, _, _ = gf_gcdex(gf_rem(cof, g_hi, p, ZZ), g_hi, p, ZZ)
        # e = cof * s is 1 mod g and 0 mod the other factors
        e = gf_mul(cof, s, p, ZZ)
        diff = [(c - (1 if k == 0 else 0)) % p for k, c in enumerate(gen)]
        x = gf_rem(gf_mul(e, list(reversed(diff)), p, ZZ), f_hi, p, ZZ)
        low = [int(c) for c in reversed(x)] or [0]
        low[0] += 1
        lifts.append(low)
    return lifts


def check_character_prerequisites(eps: Sequence[int], pdata: PrimeAboveP, backend) -> bool:
    rf = pdata.p0
    for u in backend.unit_generators():
        if chi_eps(u, eps, pdata) != rf.one():
            return False
    field = backend.field
    for low in _crt_lifts(pdata):
        x = field.element(low + [0] * (field.degree - len(low)))
        if not _in_twelfth_powers(rf, chi_eps(x, eps, pdata)):
            return False
    return True


# --- class group data ---------------------------------------------------------

class _PrincipalChain:
    gens: list = []

    @staticmethod
    def dlog_prime(P: PrimeIdealData):
        if P.h != 1 or P.gamma is None:
            raise IsoprimesError("NO_GENERATOR", f"prime {P.label()} is not principal")
        return (), P.gamma


def class_data(backend, p: int):
    if backend.class_number == 1:
        return _PrincipalChain()
    if getattr(backend, "supports_class_dlog", False):
        return backend.class_chain(avoid=(p,))
    return None


@dataclass
class CharacterExtension:
    values: tuple[int, ...]


def _roots_in_twelfth_powers(c: int, n: int, p: int) -> list[int]:
    c %= p
    if n == 1:
        return [c] if is_twelfth_power(c, p) else []
    roots = nthroot_mod(c, n, p, all_roots=True) or []
    return sorted(int(r) for r in roots if is_twelfth_power(int(r), p))


def enumerate_extensions(eps: Sequence[int], pdata: PrimeAboveP, chain) -> list[CharacterExtension]:
    rf, p = pdata.p0, pdata.p
    ext = [()]
    for g in chain.gens:
        chi = _to_int(rf, chi_eps(g.alpha, eps, pdata))
        nxt = []
        for vals in ext:
            if chi is None:
                continue
            c = chi
            for cj, e in zip(vals, g.e):
                c = c * pow(cj, e, p) % p
            for r in _roots_in_twelfth_powers(c, g.h, p):
                nxt.append(vals + (r,))
        ext = nxt
    return [CharacterExtension(v) for v in ext]


def mu_value(ext: CharacterExtension, P: PrimeIdealData, eps, pdata: PrimeAboveP, chain) -> int | None:
    x, alpha = chain.dlog_prime(P)
    v = _to_int(pdata.p0, chi_eps(alpha, eps, pdata))
    if v is None:
        return None
    for c, e in zip(ext.values, x):
        v = v * pow(c, e, pdata.p) % pdata.p
    return v


def frobenius_value_consistent(c: int, N: int, q: int, f: int, p: int) -> bool:
    """Some 12th root r of c gives r + N/r congruent to a Frobenius trace in the Weil window."""
    roots = nthroot_mod(c % p, 12, p, all_roots=True) or []
    bound = isqrt(4 * N)
    for r in roots:
        r = int(r)
        abar = (r + N * pow(r, -1, p)) % p
        a = abar - ((abar + bound) // p) * p  # smallest lift >= -bound
        while a <= bound:
            if is_frobenius_polynomial(-a, q, f)[0]:
                return True
            a += p
    return False


def frobenius_consistency(c: int, P: PrimeIdealData, p: int) -> bool:
    """Good reduction needs a Frobenius root; potentially multiplicative reduction gives 1 or N^12."""
    N = P.norm
    if c in (1, pow(N, 12, p)):
        return True
    return frobenius_value_consistent(c, N, P.q, P.f, p)


def type1_consistency(values: Sequence[int], primes: Sequence[PrimeIdealData], p: int) -> bool:
    """Values of mu at all primes above one rational q; each must be explainable."""
    # the all-ones and all-norms patterns are the global characters; they pass below too
    return all(frobenius_consistency(v, P, p) for v, P in zip(values, primes))


def test_primes(backend, p: int, max_q: int = DEFAULT_TEST_Q) -> list[list[PrimeIdealData]]:
    """Primes above small rational q != p with 4 sqrt(N) < p, grouped by q."""
    out = []
    for q in primes_from(2):
        if 16 * q >= p * p or len(out) >= max_q:
            break
        if q == p:
            continue
        group = [P for P in backend.primes_above(q) if 16 * P.norm < p * p]
        if group and all(P.gamma is not None or backend.class_number > 1 for P in group):
            out.append(group)
    return out


def ice_signature(backend, p: int, eps: Sequence[int], max_q: int = DEFAULT_TEST_Q) -> bool:
    """True (keep) unless every character with signature eps is ruled out at some test prime."""
    pdata = prime_above_p(backend, p)
    if not pdata.unramified or p in getattr(backend, "index_primes", ()):
        return True
    try:
        if not check_character_prerequisites(eps, pdata, backend):
            return False
        chain = class_data(backend, p)
        if chain is None:
            return True
        exts = enumerate_extensions(eps, pdata, chain)
        groups = test_primes(backend, p, max_q)
        type1 = classify_signature(eps) is SignatureType.TYPE1
        for ext in exts:
            ok = True
            for group in groups:
                vals = [mu_value(ext, P, eps, pdata, chain) for P in group]
                if any(v is None for v in vals):
                    continue
                passed = type1_consistency(vals, group, p) if type1 else \
                    all(frobenius_consistency(v, P, p) for v, P in zip(vals, group))
                if not passed:
                    ok = False
                    break
            if ok:
                return True
        return False
    except IsoprimesError as exc:
        log.info("ICE at p=%d, eps=%s inconclusive (%s); keeping", p, tuple(eps), exc.code)
        return True


def ice_filter(backend, p: int, signatures: Sequence[Sequence[int]], max_q: int = DEFAULT_TEST_Q) -> bool:
    """Keep p unless ICE rules out every signature in the orbits of ``signatures``."""
    if p < 17 or p in MAZUR_PRIMES:
        return True
    comp = backend.field.composition
    seen = set()
    for eps in signatures:
        for e in sorted(orbit(eps, comp, include_left=True)):
            if e in seen:
                continue
            seen.add(e)
            if ice_signature(backend, p, e, max_q):
                return True
    return False
