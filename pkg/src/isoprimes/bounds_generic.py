"""The A/B/C integers and the multiplicative bound MMIB with its three components."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .arith import gcd_iter, lcm0, primes_from
from .errors import IsoprimesError
from .frobenius import enumerate_frobenius_traces, ordinary_traces, power_trace
from .nf import NFElement, nf_norm, nf_pow_signature, norm_minus_rational, norm_quadratic_in
from .primes import PrimeIdealData
from .signatures import enumerate_generic_signatures, type3_signatures

log = logging.getLogger(__name__)


def _int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"expected an integer, got {x}")
    return int(x.numerator)


@dataclass
class ABCRecord:
    A: int
    B: int
    C_s: int
    C_o: int
    C: int
    ABC: int
    components: list[int] = field(default_factory=list)


class _Power:
    """gamma^eps with its characteristic polynomial, cached per (eps, prime)."""

    __slots__ = ("x", "cp")

    def __init__(self, gamma: NFElement, eps: Sequence[int]):
        self.x = nf_pow_signature(gamma, eps)
        self.cp = self.x.charpoly()


_power_cache: dict[tuple, _Power] = {}


def _power(eps: Sequence[int], P: PrimeIdealData) -> _Power:
    key = (tuple(eps), P.gamma.key(), id(P.gamma.field))
    hit = _power_cache.get(key)
    if hit is None:
        hit = _Power(P.gamma, eps)
        if len(_power_cache) > 20000:
            _power_cache.clear()
        _power_cache[key] = hit
    return hit


def _check_prime(P: PrimeIdealData) -> None:
    if P.gamma is None or P.h is None:
        raise IsoprimesError("NO_GENERATOR", f"prime {P.label()} has no class order / generator")


def supersingular_c_shortcut(eps: Sequence[int], P: PrimeIdealData) -> int:
    _check_prime(P)
    N, h = P.norm, P.h
    pw = _power(eps, P)
    if P.q == 2 and P.f % 2 == 1:
        # B(2 eps, q) = Nm(x^2 - N^{12h}) = cp(N^{6h}) cp(-N^{6h})
        r = N ** (6 * h)
        return _int(norm_minus_rational(pw.cp, r) * norm_minus_rational(pw.cp, -r))
    return _int(norm_minus_rational(pw.cp, N ** (6 * h)))


def c_ordinary(eps: Sequence[int], P: PrimeIdealData) -> tuple[int, list[int]]:
    _check_prime(P)
    N, h = P.norm, P.h
    pw = _power(eps, P)
    c = N ** (12 * h)
    svals = sorted({power_trace(t, P.q, P.f, 12 * h).s for t in ordinary_traces(P.q, P.f)})
    terms = [_int(norm_quadratic_in(pw.cp, s, c)) for s in svals]
    return lcm0(*terms), terms


def c_star(eps: Sequence[int], P: PrimeIdealData) -> tuple[int, list[int]]:
    """lcm of the nonzero Nm(gamma^eps - beta^{12h}) over all Frobenius roots beta."""
    _check_prime(P)
    N, h = P.norm, P.h
    pw = _power(eps, P)
    c = N ** (12 * h)
    terms = []
    for s in sorted({power_trace(fp.t, P.q, P.f, 12 * h).s for fp in enumerate_frobenius_traces(P.q, P.f)}):
        if s * s == 4 * c:
            # beta^{12h} rational, equal to s/2
            val = norm_minus_rational(pw.cp, Fraction(s, 2))
        else:
            val = norm_quadratic_in(pw.cp, s, c)
        v = _int(val)
        if v:
            terms.append(v)
    return lcm0(*terms), terms


def abc_record(eps: Sequence[int], P: PrimeIdealData) -> ABCRecord:
    _check_prime(P)
    N, h = P.norm, P.h
    pw = _power(eps, P)
    A = _int(norm_minus_rational(pw.cp, 1))
    B = _int(norm_minus_rational(pw.cp, N ** (12 * h)))
    C_s = supersingular_c_shortcut(eps, P)
    C_o, terms = c_ordinary(eps, P)
    C = lcm0(C_o, C_s)
    ABC = lcm0(A, B, C, N)
    return ABCRecord(A, B, C_s, C_o, C, ABC, [A, B, C_s, N] + terms)


def unit_divisibility(units: Sequence[NFElement], eps: Sequence[int]) -> int:
    vals = []
    for u in units:
        v = nf_norm(nf_pow_signature(u, eps) - 1)
        if v:
            vals.append(_int(v))
    return gcd_iter(vals)


# ---------------------------------------------------------------------------
# auxiliary primes


@dataclass
class AuxStrategy:
    kind: str = "auto-stop"  # or "norm-bound"
    value: int = 4

    @classmethod
    def auto_stop(cls, k: int = 4) -> "AuxStrategy":
        return cls("auto-stop", k)

    @classmethod
    def norm_bound(cls, n: int = 50) -> "AuxStrategy":
        return cls("norm-bound", n)


@dataclass
class SignatureBound:
    eps: tuple[int, ...]
    stype: str
    value: int
    seed: int
    components: list[int] = field(default_factory=list)  # some ABC components; their lcm is a multiple of value


@dataclass
class BoundLedger:
    generic: list[SignatureBound] = field(default_factory=list)
    generic_bound: int = 0
    type2_not_momose: int = 1
    type2_components: list[int] = field(default_factory=list)
    type3: list[SignatureBound] = field(default_factory=list)
    type3_bound: int = 1
    mmib: int = 0
    aux: list[str] = field(default_factory=list)
    caveats: list[str] = field(default_factory=list)


class _Running:
    def __init__(self, eps, stype, seed):
        self.eps, self.stype, self.seed = eps, stype, seed
        self.value = seed
        self.components: list[int] | None = None

    def update(self, rec: ABCRecord) -> None:
        self.value = gcd(self.value, rec.ABC)
        if self.components is None and rec.ABC:
            self.components = rec.components

    def freeze(self) -> SignatureBound:
        return SignatureBound(self.eps, self.stype, self.value, self.seed, self.components or [])


def _lcm_of(values) -> int:
    return lcm0(*values)


def choose_aux(backend, strategy: AuxStrategy, signatures, units) -> tuple[list[PrimeIdealData], list[_Running]]:
    """Run the gcd chains for the given (eps, type) list and return the aux primes used."""
    runs = [_Running(eps, st, unit_divisibility(units, eps)) for eps, st in signatures]
    aux: list[PrimeIdealData] = []

    def add(P):
        aux.append(P)
        for r in runs:
            r.update(abc_record(r.eps, P))

    if strategy.kind == "norm-bound":
        for q in primes_from(2):
            if q > strategy.value:
                break
            for P in backend.primes_above(q):
                if P.norm <= strategy.value and P.gamma is not None:
                    add(P)
        if not any(P.kind == "split" for P in aux):
            q = next(iter(backend.split_primes()))
            log.info("no split prime of norm <= %d; adding emergency split prime above %d", strategy.value, q)
            for P in backend.primes_above(q):
                add(P)
    elif strategy.kind == "auto-stop":
        streak, last = 0, None
        for q in backend.split_primes():
            for P in backend.primes_above(q):
                add(P)
            cur = _lcm_of(r.value for r in runs) if runs else 1
            if cur == last:
                streak += 1
            else:
                streak, last = 1, cur
            if cur != 0 and streak >= strategy.value:
                break
    else:
        raise IsoprimesError("AUX_EMPTY", f"unknown aux strategy {strategy.kind}")
    if not aux:
        raise IsoprimesError("AUX_EMPTY", "no auxiliary primes selected")
    return aux, runs


def generic_bound(backend, strategy: AuxStrategy | None = None, extra_aux: Sequence[PrimeIdealData] = ()):
    strategy = strategy or AuxStrategy.auto_stop()
    field_ = backend.field
    sigs = [(e, st.value) for e, st in
            enumerate_generic_signatures(field_.composition, backend.imaginary_quadratic_subfields())]
    units = backend.unit_generators()
    aux, runs = choose_aux(backend, strategy, sigs, units)
    for P in extra_aux:
        if P not in aux:
            aux.append(P)
            for r in runs:
                r.update(abc_record(r.eps, P))
    bounds = [r.freeze() for r in runs]
    total = _lcm_of(b.value for b in bounds) if bounds else 1
    return total, bounds, aux


def _validate_gen(backend, gen: Sequence[PrimeIdealData]) -> None:
    for P in gen:
        if P.q == 2:
            raise IsoprimesError("GEN_EVEN_CHARACTERISTIC", f"generator {P.label()} has residue characteristic 2")
        _check_prime(P)
    check = getattr(backend, "generates_class_group", None)
    if check is not None and not check(gen):
        raise IsoprimesError("GEN_NOT_GENERATING", "the given primes do not generate the class group")


def type_two_not_momose_bound(backend, gen_sets: Sequence[Sequence[PrimeIdealData]] | None = None) -> tuple[int, list[int]]:
    if backend.class_number == 1:
        return 1, []
    if gen_sets is None:
        gen_sets = backend.gen_sets()
    d = backend.field.degree
    eps6 = (6,) * d
    values, comps = [], []
    for gen in gen_sets:
        _validate_gen(backend, gen)
        parts = []
        for P in gen:
            rec = abc_record(eps6, P)
            parts += [rec.A, rec.B, rec.C_o, P.norm]
            comps += [rec.A, rec.B, P.norm] + rec.components[4:]
        values.append(lcm0(*parts))
    return gcd_iter(values), comps


def abc_star(eps: Sequence[int], gen: Sequence[PrimeIdealData]) -> tuple[int, list[int]]:
    parts, comps = [], []
    for P in gen:
        rec = abc_record(eps, P)
        cs, terms = c_star(eps, P)
        parts += [rec.A, rec.B, cs, P.norm]
        comps += [rec.A, rec.B, P.norm] + terms
    return lcm0(*parts), comps


def type_three_not_momose_bound(backend, aux: Sequence[PrimeIdealData], gen_sets=None) -> tuple[int, list[SignatureBound]]:
    subfields = backend.imaginary_quadratic_subfields()
    if not subfields:
        return 1, []
    comp = backend.field.composition
    units = backend.unit_generators()
    out = []
    for eps, L in type3_signatures(comp, subfields):
        if not L.hcf_contained:
            if backend.class_number > 1 and not any(P.h and P.h > 1 for P in aux):
                raise IsoprimesError("NEED_NONPRINCIPAL_AUX", "aux primes contain no nonprincipal prime")
            run = _Running(eps, "Type3", unit_divisibility(units, eps))
            for P in aux:
                run.update(abc_record(eps, P))
            sb = run.freeze()
        else:
            sets = gen_sets if gen_sets is not None else backend.gen_sets()
            vals, comps = [], []
            for gen in sets:
                v, c = abc_star(eps, gen)
                vals.append(v)
                comps += c
            value = lcm0(gcd_iter(vals), abs(L.disc))
            sb = SignatureBound(eps, "Type3", value, 0, comps + [abs(L.disc)])
        if sb.value == 0:
            raise IsoprimesError("NEED_NONPRINCIPAL_AUX", f"Type 3 bound for {eps} vanished; add a nonprincipal aux prime")
        out.append(sb)
    return lcm0(*(b.value for b in out)), out


def mmib(backend, strategy: AuxStrategy | None = None, gen_sets=None) -> BoundLedger:
    ledger = BoundLedger()
    extra = []
    if backend.class_number > 1 and backend.imaginary_quadratic_subfields():
        extra = backend.nonprincipal_primes(1)
    total, bounds, aux = generic_bound(backend, strategy, extra)
    ledger.generic, ledger.generic_bound = bounds, total
    ledger.aux = [P.label() for P in aux]
    ledger.type2_not_momose, ledger.type2_components = type_two_not_momose_bound(backend, gen_sets)
    ledger.type3_bound, ledger.type3 = type_three_not_momose_bound(backend, aux, gen_sets)
    ledger.mmib = lcm0(ledger.generic_bound, ledger.type2_not_momose, ledger.type3_bound)
    if ledger.mmib == 0:
        raise IsoprimesError("ZERO_BOUND", "MMIB vanished")
    return ledger
