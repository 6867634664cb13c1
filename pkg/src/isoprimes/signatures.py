"""Isogeny signatures: enumeration up to symmetry, the seven types, and the congruence filter."""
from __future__ import annotations

from enum import Enum
from itertools import product
from typing import Sequence

ENTRIES = (0, 4, 6, 8, 12)


class SignatureType(str, Enum):
    TYPE1 = "Type1"
    QUADRATIC_NONCONSTANT = "QuadraticNonconstant"
    SEXTIC_CONSTANT = "SexticConstant"
    SEXTIC_NONCONSTANT = "SexticNonconstant"
    TYPE2 = "Type2"
    QUARTIC_NONCONSTANT = "QuarticNonconstant"
    MIXED = "Mixed"


def classify_signature(eps: Sequence[int]) -> SignatureType:
    s = set(eps)
    if not s <= set(ENTRIES):
        raise ValueError(f"invalid signature {tuple(eps)}")
    if s in ({0}, {12}):
        return SignatureType.TYPE1
    if s == {6}:
        return SignatureType.TYPE2
    if s in ({4}, {8}):
        return SignatureType.SEXTIC_CONSTANT
    has6 = 6 in s
    has48 = bool(s & {4, 8})
    if has6 and has48:
        return SignatureType.MIXED
    if has6:
        return SignatureType.QUARTIC_NONCONSTANT
    if has48:
        return SignatureType.SEXTIC_NONCONSTANT
    return SignatureType.QUADRATIC_NONCONSTANT


def complement(eps: Sequence[int]) -> tuple[int, ...]:
    return tuple(12 - a for a in eps)


def right_act(eps: Sequence[int], comp: Sequence[Sequence[int]], s: int) -> tuple[int, ...]:
    """Signature eps' with gamma'^{eps} for gamma' = sigma_s(gamma) equal to gamma^{eps'}."""
    out = [0] * len(eps)
    for i, a in enumerate(eps):
        out[comp[i][s]] = a
    return tuple(out)


def left_act(eps: Sequence[int], comp: Sequence[Sequence[int]], t: int) -> tuple[int, ...]:
    """Signature of tau_t(gamma^eps); norms are unchanged by this reindexing."""
    out = [0] * len(eps)
    for i, a in enumerate(eps):
        out[comp[t][i]] = a
    return tuple(out)


def orbit(eps: Sequence[int], comp: Sequence[Sequence[int]], include_left: bool = False) -> set[tuple[int, ...]]:
    start = tuple(eps)
    seen = {start}
    todo = [start]
    n = len(comp)
    while todo:
        e = todo.pop()
        nxt = [complement(e)] + [right_act(e, comp, s) for s in range(n)]
        if include_left:
            nxt += [left_act(e, comp, t) for t in range(n)]
        for x in nxt:
            if x not in seen:
                seen.add(x)
                todo.append(x)
    return seen


def type3_indicator(fixing: Sequence[int], d: int) -> tuple[int, ...]:
    return tuple(12 if i in fixing else 0 for i in range(d))


def is_type3(eps: Sequence[int], subfields) -> object | None:
    """The imaginary quadratic subfield L for which eps is 12 * indicator(Sigma_L) or its complement."""
    eps = tuple(eps)
    for L in subfields:
        ind = type3_indicator(L.fixing, len(eps))
        if eps == ind or eps == complement(ind):
            return L
    return None


def enumerate_all_orbits(comp: Sequence[Sequence[int]]) -> list[tuple[tuple[int, ...], SignatureType]]:
    d = len(comp)
    seen: set[tuple[int, ...]] = set()
    reps = []
    for eps in product(ENTRIES, repeat=d):
        if eps in seen:
            continue
        orb = orbit(eps, comp)
        seen |= orb
        rep = min(orb)
        reps.append((rep, classify_signature(rep)))
    reps.sort()
    return reps


def enumerate_generic_signatures(comp: Sequence[Sequence[int]], subfields=()) -> list[tuple[tuple[int, ...], SignatureType]]:
    """Orbit representatives other than Type 1, Type 2 and Type 3."""
    out = []
    for rep, st in enumerate_all_orbits(comp):
        if st in (SignatureType.TYPE1, SignatureType.TYPE2):
            continue
        if is_type3(rep, subfields) is not None:
            continue
        out.append((rep, st))
    return out


def type3_signatures(comp: Sequence[Sequence[int]], subfields) -> list[tuple[tuple[int, ...], object]]:
    out = []
    seen = set()
    d = len(comp)
    for L in subfields:
        ind = type3_indicator(L.fixing, d)
        rep = min(orbit(ind, comp))
        if rep not in seen:
            seen.add(rep)
            out.append((rep, L))
    return out


_MUST_SPLIT = {
    SignatureType.TYPE1: False,
    SignatureType.QUADRATIC_NONCONSTANT: True,
    SignatureType.SEXTIC_CONSTANT: False,
    SignatureType.SEXTIC_NONCONSTANT: True,
    SignatureType.TYPE2: False,
    SignatureType.QUARTIC_NONCONSTANT: True,
    SignatureType.MIXED: True,
}


def congruence_filter(p: int, stype: SignatureType, split_or_ramified: bool) -> bool:
    """Keep (True) or discard (False) p for a signature of the given type.

    A 4 or 8 entry forces p = 2 mod 3 and a 6 entry forces p = 3 mod 4, so mixed
    signatures need p = 11 mod 12.  Primes below 17 are always kept.
    """
    if p < 17:
        return True
    if _MUST_SPLIT[stype] and not split_or_ramified:
        return False
    if stype in (SignatureType.SEXTIC_CONSTANT, SignatureType.SEXTIC_NONCONSTANT):
        return p % 3 == 2
    if stype in (SignatureType.TYPE2, SignatureType.QUARTIC_NONCONSTANT):
        return p % 4 == 3
    if stype is SignatureType.MIXED:
        return p % 12 == 11
    return True
