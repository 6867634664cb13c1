"""Native arithmetic for quadratic fields Q(sqrt(D)).

Ideals of O_k = Z[w] are handled in two guises: Hermite normal forms
(a, b, c) meaning Z*a + Z*(b + c*w), and primitive ideals [a, (-B + sqrt(disc))/2]
which are the binary quadratic forms (a, B, C) of discriminant disc.  Reduction
steps carry an explicit multiplier so that principal generators fall out.
"""
from __future__ import annotations

from functools import cached_property
from math import gcd, isqrt
from typing import Iterator

from .arith import is_squarefree, kronecker, primes_from
from .errors import IsoprimesError
from .nf import NFElement, NumberField, nf_norm
from .primes import ImaginaryQuadraticSubfield, PrimeIdealData

Form = tuple[int, int]  # (a, B), primitive ideal [a, (-B + sqrt(disc))/2]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf2(vectors: list[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF (a, b, c) of the rank-2 lattice spanned by (x, y) pairs: basis (a, 0), (b, c)."""
    # combine to get gcd of second coordinates
    wx, wy = 0, 0
    for x, y in vectors:
        g, s, t = _xgcd(wy, y)
        if g == 0:
            continue
        wx, wy = s * wx + t * x, g
    if wy < 0:
        wx, wy = -wx, -wy
    a = 0
    for x, y in vectors:
        a = gcd(a, x - (y // wy) * wx)
    if a == 0 or wy == 0:
        raise ValueError("lattice is not of full rank")
    return a, wx % a, wy


class QuadraticField:
    """Q(sqrt(D)) with class group, units and prime ideals."""

    def __init__(self, D: int):
        if D in (0, 1) or not is_squarefree(D):
            raise IsoprimesError("INVALID_FIELD", f"D={D} is not a squarefree integer other than 0, 1")
        self.D = D
        self.disc = D if D % 4 == 1 else 4 * D
        self.delta = self.disc % 2
        self.nconst = (self.disc - self.delta) // 4  # w^2 = delta*w + nconst
        self.degree = 2
        self.field = NumberField([-self.nconst, -self.delta, 1], automorphisms=[[0, 1], [self.delta, -1]],
                                 discriminant=self.disc, name=f"Q(sqrt({D}))")
        self.real = D > 0
        self._s = isqrt(self.disc) if self.real else 0
        self._canon_cache: dict[Form, Form] = {}
        self._prime_cache: dict[int, list[PrimeIdealData]] = {}

    def __repr__(self) -> str:
        return f"QuadraticField({self.D})"

    @property
    def label(self) -> str:
        return f"Q(sqrt({self.D}))"

    @property
    def discriminant(self) -> int:
        return self.disc

    @property
    def w(self) -> NFElement:
        return self.field.gen()

    def sqrt_disc(self) -> NFElement:
        return 2 * self.w - self.delta

    @property
    def rejects_infinite(self) -> bool:
        return self.D < 0 and self.class_number == 1

    def check_finite(self) -> None:
        if self.rejects_infinite:
            raise IsoprimesError(
                "REJECT_INFINITE",
                f"Q(sqrt({self.D})) is imaginary with class number 1: it contains its own Hilbert class "
                "field, so it has infinitely many isogeny primes")

    # forms / primitive ideals --------------------------------------------
    def theta(self, a: int, B: int) -> NFElement:
        return self.field.element([(-B - self.delta) // 2, 1])

    def _normalize(self, a: int, B: int) -> int:
        if not self.real or a > self._s:
            # B into (-a, a]
            r = (B + a - 1) % (2 * a) - (a - 1)
            return r
        # largest value <= s congruent to B mod 2a
        s = self._s
        return s - ((s - B) % (2 * a))

    def is_reduced(self, a: int, B: int) -> bool:
        if not self.real:
            C = (B * B - self.disc) // (4 * a)
            return abs(B) <= a <= C and not (B < 0 and (a == C or -B == a))
        s = self._s
        return 0 < B <= s and B + 2 * a > s and 2 * a - B <= s

    def rho(self, a: int, B: int) -> tuple[int, int, NFElement]:
        """One reduction step: [a, B] = m * [a', B'] with the returned multiplier m."""
        C = (B * B - self.disc) // (4 * a)
        m = self.theta(a, B) / C
        a2 = abs(C)
        return a2, self._normalize(a2, -B), m

    def reduce(self, a: int, B: int) -> tuple[int, int, NFElement]:
        m = self.field.one()
        B = self._normalize(a, B)
        for _ in range(100000):
            if self.is_reduced(a, B):
                return a, B, m
            a, B, step = self.rho(a, B)
            m = m * step
        raise RuntimeError("reduction did not terminate")

    def principal_form(self) -> Form:
        a, B, _ = self.reduce(1, self.delta)
        return a, B

    def cycle(self, a: int, B: int) -> list[Form]:
        """The rho-cycle of a reduced form (length 1 for imaginary fields)."""
        if not self.real:
            return [(a, B)]
        out = [(a, B)]
        cur = self.rho(a, B)[:2]
        while cur != (a, B):
            out.append(cur)
            cur = self.rho(*cur)[:2]
        return out

    def canonical(self, a: int, B: int) -> Form:
        a, B, _ = self.reduce(a, B)
        if not self.real:
            return a, B
        key = (a, B)
        hit = self._canon_cache.get(key)
        if hit is None:
            cyc = self.cycle(a, B)
            hit = min(cyc)
            for c in cyc:
                self._canon_cache[c] = hit
        return hit

    def principal_generator_form(self, a: int, B: int) -> NFElement | None:
        """A generator of the primitive ideal [a, B] if it is principal, else None."""
        a1, B1, m = self.reduce(a, B)
        if a1 == 1:
            return m
        if not self.real:
            return None
        cur, acc = (a1, B1), m
        while True:
            a2, B2, step = self.rho(*cur)
            acc = acc * step
            if a2 == 1:
                return acc
            if (a2, B2) == (a1, B1):
                return None
            cur = (a2, B2)

    # ideals in HNF ---------------------------------------------------------
    def form_to_hnf(self, a: int, B: int) -> tuple[int, int, int]:
        return a, ((-B - self.delta) // 2) % a, 1

    def hnf_to_form(self, I: tuple[int, int, int]) -> tuple[int, Form]:
        """(content c, primitive form) with I = c * [a, B]."""
        a, b, c = I
        a1, b1 = a // c, b // c
        return c, (a1, -(2 * b1 + self.delta))

    def _elem_mul(self, x1: int, y1: int, x2: int, y2: int) -> tuple[int, int]:
        return (x1 * x2 + y1 * y2 * self.nconst, x1 * y2 + x2 * y1 + y1 * y2 * self.delta)

    def hnf_mul(self, I, J) -> tuple[int, int, int]:
        gi = [(I[0], 0), (I[1], I[2])]
        gj = [(J[0], 0), (J[1], J[2])]
        return hnf2([self._elem_mul(*u, *v) for u in gi for v in gj])

    def hnf_conj(self, I) -> tuple[int, int, int]:
        a, b, c = I
        # b + c w  ->  b + c(delta - w)
        return hnf2([(a, 0), (b + c * self.delta, -c)])

    def hnf_of_element(self, x: NFElement) -> tuple[int, int, int]:
        if x.den != 1:
            raise ValueError("element is not integral")
        u, v = x.num
        return hnf2([(u, v), self._elem_mul(u, v, 0, 1)])

    def hnf_contains(self, I, x: NFElement) -> bool:
        if x.den != 1:
            return False
        a, b, c = I
        u, v = x.num
        if v % c:
            return False
        return (u - (v // c) * b) % a == 0

    def ideal_product_generator(self, factors: list[tuple[tuple[int, int, int], int]]) -> NFElement | None:
        """Generator of prod I^e (e >= 0) if principal, else None; reduction keeps sizes small."""
        mult = self.field.one()
        cur = (1, 0, 1)
        for I, e in factors:
            for _ in range(e):
                P = self.hnf_mul(cur, I)
                c, (a, B) = self.hnf_to_form(P)
                a, B, m = self.reduce(a, B)
                mult = mult * m * c
                cur = self.form_to_hnf(a, B)
        c, (a, B) = self.hnf_to_form(cur)
        g = self.principal_generator_form(a, B)
        if g is None:
            return None
        return mult * g * c

    # class group ---------------------------------------------------------
    def reduced_forms(self) -> list[Form]:
        disc = self.disc
        out = []
        if not self.real:
            a = 1
            while 3 * a * a <= -disc:
                for B in range(-a + 1, a + 1):
                    if (B - disc) % 2 or (B * B - disc) % (4 * a):
                        continue
                    if self.is_reduced(a, B):
                        out.append((a, B))
                a += 1
            return out
        s = self._s
        for B in range(1, s + 1):
            if (B - disc) % 2:
                continue
            n = (disc - B * B) // 4
            for a in _divisors(n):
                if self.is_reduced(a, B):
                    out.append((a, B))
        return sorted(out)

    @cached_property
    def class_group_reps(self) -> list[Form]:
        """Canonical representatives of the ideal classes."""
        reps = set()
        for f in self.reduced_forms():
            reps.add(self.canonical(*f))
        return sorted(reps)

    @cached_property
    def class_number(self) -> int:
        return len(self.class_group_reps)

    def class_mul(self, c1: Form, c2: Form) -> Form:
        P = self.hnf_mul(self.form_to_hnf(*c1), self.form_to_hnf(*c2))
        _, (a, B) = self.hnf_to_form(P)
        return self.canonical(a, B)

    def class_of(self, I) -> Form:
        _, (a, B) = self.hnf_to_form(I)
        return self.canonical(a, B)

    @cached_property
    def identity_class(self) -> Form:
        return self.canonical(*self.principal_form())

    def class_order(self, cls: Form) -> int:
        m, cur = 1, cls
        while cur != self.identity_class:
            cur = self.class_mul(cur, cls)
            m += 1
        return m

    def class_group(self) -> tuple[int, list[tuple[PrimeIdealData, int]]]:
        """(h_k, generators) with generators prime ideals of small norm and their orders."""
        chain = self.class_chain(avoid=())
        return self.class_number, [(g.prime, self.class_order(self.class_of(g.prime.extra["hnf"])))
                                   for g in chain.gens]

    def class_chain(self, avoid=(), odd_only: bool = False) -> "ClassChain":
        return ClassChain(self, avoid, odd_only)

    # units --------------------------------------------------------------
    def _sign(self, x: NFElement) -> int:
        """Sign of x under the embedding with sqrt(disc) > 0."""
        u, v = x.num
        # x = (2u + v*delta + v*sqrt(disc)) / (2 den)
        P, Q = 2 * u + v * self.delta, v
        if not self.real:
            raise ValueError("no real embedding")
        if P >= 0 and Q >= 0:
            return 0 if P == Q == 0 else 1
        if P <= 0 and Q <= 0:
            return -1
        lhs, rhs = P * P, Q * Q * self.disc
        if P > 0:
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1

    def greater_than_one(self, x: NFElement) -> bool:
        return self._sign(x - 1) > 0

    @cached_property
    def fundamental_unit(self) -> NFElement:
        if not self.real:
            raise IsoprimesError("NO_FUNDAMENTAL_UNIT", "imaginary quadratic fields have finite unit groups")
        # one period of the principal rho-cycle (the continued fraction of w)
        a0, B0 = self.principal_form()
        cur, acc = (a0, B0), self.field.one()
        while True:
            a, B, m = self.rho(*cur)
            acc = acc * m
            if (a, B) == (a0, B0):
                break
            cur = (a, B)
        u = acc
        conj = self.conj(u)
        nu = nf_norm(u)
        for cand in (u, -u, conj * nu, -conj * nu):
            if self.greater_than_one(cand):
                return cand
        raise RuntimeError("could not normalise the fundamental unit")

    def conj(self, x: NFElement) -> NFElement:
        u, v = x.num
        return NFElement(self.field, [u + v * self.delta, -v], x.den)

    def roots_of_unity_generator(self) -> NFElement:
        if self.D == -1:
            return self.w
        if self.D == -3:
            return self.w  # (1 + sqrt(-3))/2 is a primitive 6th root of unity
        return self.field(-1)

    def unit_generators(self) -> list[NFElement]:
        gens = [self.roots_of_unity_generator()]
        if self.real:
            gens.append(self.fundamental_unit)
        return gens

    def normalize_generator(self, g: NFElement) -> NFElement:
        def height(x):
            return (max(abs(c) for c in x.num), x.den)

        if self.real:
            eps = self.fundamental_unit
            inv = self.conj(eps) * nf_norm(eps)
            for step in (eps, inv):
                while True:
                    cand = g * step
                    if height(cand) < height(g):
                        g = cand
                    else:
                        break
        lead = g.num[1] if g.num[1] else g.num[0]
        return -g if lead < 0 else g

    # primes -------------------------------------------------------------
    def splitting_type(self, q: int) -> tuple[str, int]:
        k = kronecker(self.disc, q)
        if k == 1:
            return "split", 1
        if k == -1:
            return "inert", 2
        return "ramified", 1

    def residue_degrees(self, q: int) -> list[int]:
        kind, f = self.splitting_type(q)
        return [f] if kind != "split" else [1, 1]

    def _roots_mod(self, q: int) -> list[int]:
        # roots of x^2 - delta x - nconst mod q
        return [r for r in range(q) if (r * r - self.delta * r - self.nconst) % q == 0] if q < 50 else \
            self._roots_mod_large(q)

    def _roots_mod_large(self, q: int) -> list[int]:
        from sympy.ntheory import sqrt_mod
        # r = (delta + sqrt(disc)) / 2 mod q, q odd
        inv2 = pow(2, -1, q)
        roots = sqrt_mod(self.disc % q, q, all_roots=True)
        return sorted({((self.delta + s) * inv2) % q for s in roots})

    def primes_above(self, q: int) -> list[PrimeIdealData]:
        hit = self._prime_cache.get(q)
        if hit is not None:
            return hit
        kind, f = self.splitting_type(q)
        out = []
        if kind == "inert":
            I = (q, 0, q)
            out.append(PrimeIdealData(q, 2, 1, "inert", (-self.nconst % q, -self.delta % q, 1), 1,
                                      self.field(q), {"hnf": I}))
        else:
            roots = self._roots_mod(q)
            for r in roots:
                I = (q, (-r) % q, 1)
                h, gamma = self._order_and_generator(I)
                out.append(PrimeIdealData(q, 1, 2 if kind == "ramified" else 1, kind, ((-r) % q, 1),
                                          h, gamma, {"hnf": I}))
        self._prime_cache[q] = out
        return out

    def prime_ideal_data(self, q: int) -> list[PrimeIdealData]:
        return self.primes_above(q)

    def _order_and_generator(self, I) -> tuple[int, NFElement]:
        cls = self.class_of(I)
        h = self.class_order(cls)
        g = self.ideal_product_generator([(I, h)])
        if g is None:
            raise RuntimeError("power of an ideal at its class order is not principal")
        return h, self.normalize_generator(g)

    def split_prime_iterator(self) -> Iterator[PrimeIdealData]:
        for q in primes_from(2):
            if self.splitting_type(q)[0] == "split":
                yield self.primes_above(q)[0]

    def split_primes(self) -> Iterator[int]:
        for q in primes_from(2):
            if self.splitting_type(q)[0] == "split":
                yield q

    def imaginary_quadratic_subfields(self) -> list[ImaginaryQuadraticSubfield]:
        if self.real:
            return []
        return [ImaginaryQuadraticSubfield(self.disc, self.sqrt_disc(), self.class_number == 1, (0,))]

    def gen_set(self) -> list[PrimeIdealData]:
        """Class group generators of odd residue characteristic."""
        if self.class_number == 1:
            return []
        return [g.prime for g in self.class_chain(odd_only=True).gens]

    def gen_sets(self) -> list[list[PrimeIdealData]]:
        return [self.gen_set()]

    def generates_class_group(self, gen) -> bool:
        seen = {self.identity_class}
        frontier = list(seen)
        classes = [self.class_of(P.extra["hnf"]) for P in gen]
        while frontier:
            c = frontier.pop()
            for g in classes:
                n = self.class_mul(c, g)
                if n not in seen:
                    seen.add(n)
                    frontier.append(n)
        return len(seen) == self.class_number

    def nonprincipal_primes(self, count: int = 1) -> list[PrimeIdealData]:
        out = []
        for q in primes_from(3):
            for P in self.primes_above(q):
                if P.h and P.h > 1:
                    out.append(P)
                    break
            if len(out) >= count:
                return out

    @property
    def supports_class_dlog(self) -> bool:
        return True

    def is_inert(self, p: int) -> bool:
        return self.splitting_type(p)[0] == "inert"


def _divisors(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i * i != n:
                out.append(n // i)
        i += 1
    return out


class _Gen:
    __slots__ = ("prime", "h", "e", "alpha")

    def __init__(self, prime, h, e, alpha):
        self.prime, self.h, self.e, self.alpha = prime, h, e, alpha


class ClassChain:
    """Generators I_1..I_j of Cl_k with I_i^{h_i} = (alpha_i) prod_{j<i} I_j^{e_ij}.

    Every class is prod I_i^{x_i} with 0 <= x_i < h_i in exactly one way; ``dlog``
    recovers the exponents and a generator of the quotient ideal.
    """

    def __init__(self, K: QuadraticField, avoid=(), odd_only: bool = False):
        self.K = K
        self.gens: list[_Gen] = []
        table = {K.identity_class: ()}
        h = K.class_number
        for q in primes_from(3 if odd_only else 2):
            if len(table) == h:
                break
            if q in avoid or K.splitting_type(q)[0] == "inert":
                continue
            P = K.primes_above(q)[0]
            I = P.extra["hnf"]
            cls = K.class_of(I)
            m, cur = 1, cls
            while cur not in table:
                cur = K.class_mul(cur, cls)
                m += 1
            if m == 1:
                continue
            e = table[cur]
            factors = [(I, m)] + [(K.hnf_conj(g.prime.extra["hnf"]), x) for g, x in zip(self.gens, e)]
            g0 = K.ideal_product_generator(factors)
            denom = 1
            for g, x in zip(self.gens, e):
                denom *= g.prime.norm ** x
            alpha = g0 / denom
            new = {}
            power = K.identity_class
            for k in range(m):
                for c, vec in table.items():
                    new[K.class_mul(c, power)] = vec + (k,)
                power = K.class_mul(power, cls)
            table = {c: v for c, v in new.items()}
            # pad exponents of earlier entries is implicit: vectors have one entry per generator
            self.gens.append(_Gen(P, m, e, alpha))
        self.table = table

    def dlog_prime(self, P: PrimeIdealData) -> tuple[tuple[int, ...], NFElement]:
        return self.dlog(P.extra["hnf"])

    def dlog(self, I) -> tuple[tuple[int, ...], NFElement]:
        """(x, alpha) with I = (alpha) * prod I_i^{x_i}."""
        K = self.K
        x = self.table[K.class_of(I)]
        factors = [(I, 1)] + [(K.hnf_conj(g.prime.extra["hnf"]), xi) for g, xi in zip(self.gens, x)]
        g0 = K.ideal_product_generator(factors)
        denom = 1
        for g, xi in zip(self.gens, x):
            denom *= g.prime.norm ** xi
        return x, g0 / denom
