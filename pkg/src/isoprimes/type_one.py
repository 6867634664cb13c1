"""TypeOneBound: formal immersion data, the R_{d,u} rank search, and the B/C chain at rational aux primes."""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from math import gcd
from typing import Sequence

from .arith import gcd_iter, lcm0, primes_upto
from .bounds_generic import abc_record
from .errors import IsoprimesError

DEFAULT_TYPE1_AUX = tuple(q for q in primes_upto(20) if q > 2)


# --- the matrix search -----------------------------------------------------

def eps_M(M: int, a: int) -> int:
    if gcd(a, M) != 1:
        raise ValueError(f"{a} is not a unit mod {M}")
    r = a % M
    return 0 if 2 * r < M else 1


def _eps_residue(M: int, x: int) -> int:
    # same rule on every residue class; rows with gcd(n, M) > 1 need it
    r = x % M
    return 0 if 1 <= r and 2 * r < M else 1


def units_mod(M: int) -> list[int]:
    return [a for a in range(1, M) if gcd(a, M) == 1]


def R_matrix(d: int, u: int, M: int) -> list[list[int]]:
    cols = units_mod(M)
    inv = {a: pow(a, -1, M) for a in cols}
    return [[_eps_residue(M, n * a) - _eps_residue(M, n * u * inv[a]) for a in cols] for n in range(1, d + 1)]


def rank_fraction_free(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by Bareiss-style elimination on integers."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank, prev = 0, 1
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        for r in range(rank + 1, nrows):
            m[r] = [(p * m[r][j] - m[r][c] * m[rank][j]) // prev for j in range(ncols)]
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_mod(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


_CERT_PRIMES = (1000003, 1000033, 1000037)


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q; the modular rank is a lower bound and usually certifies at once."""
    if not rows:
        return 0
    full = min(len(rows), len(rows[0]))
    best = max(rank_mod(rows, p) for p in _CERT_PRIMES)
    if best == full:
        return full
    return rank_fraction_free(rows)


def parent_bound(d: int) -> int:
    return 65 * (2 * d) ** 6


def construct_M(d: int) -> int:
    M = 3
    while 2 * M * d <= parent_bound(d):
        if all(rank(R_matrix(d, u, M)) == d for u in units_mod(M)):
            return M
        M += 2
    raise IsoprimesError("SEARCH_EXHAUSTED", f"no M found below Parent's bound for d={d}")


# --- formal immersion data ------------------------------------------------

@dataclass
class BFIRecord:
    d: int
    sgfip: int
    sporadic: list[int]
    agfi: dict[int, list[int]] = field(default_factory=dict)

    def bad_primes(self) -> list[int]:
        low = [p for p in primes_upto(self.sgfip - 1) if p >= 11]
        return sorted(set(low) | set(self.sporadic))

    def bad_formal_immersion(self) -> int:
        out = 1
        for p in self.bad_primes():
            out *= p
        return out

    def agfi_product(self, q: int) -> int:
        out = 1
        for p in self.agfi.get(q, []):
            out *= p
        return out


def _default_bfi_text() -> str:
    return resources.files("isoprimes.data").joinpath("bfi_data.json").read_text()


def load_bfi(path: str | None = None) -> dict[int, BFIRecord]:
    text = open(path).read() if path else _default_bfi_text()
    raw = json.loads(text)
    out = {}
    for k, v in raw["degrees"].items():
        rec = BFIRecord(int(k), int(v["sgfip"]), [int(p) for p in v["sporadic"]],
                        {int(q): [int(p) for p in ps] for q, ps in v.get("agfi", {}).items()})
        out[rec.d] = rec
    return out


def save_bfi(records: dict[int, BFIRecord], path: str) -> None:
    """Atomic replace of a BFI cache file."""
    payload = {"source": "formal immersion tables", "degrees": {
        str(d): {"sgfip": r.sgfip, "sporadic": r.sporadic, "agfi": {str(q): ps for q, ps in r.agfi.items()}}
        for d, r in sorted(records.items())}}
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)) or ".")
    with os.fdopen(fd, "w") as fh:
        json.dump(payload, fh, indent=2)
    os.replace(tmp, path)


def bfi_record(d: int, path: str | None = None) -> BFIRecord:
    recs = load_bfi(path)
    if d not in recs:
        raise IsoprimesError("UNSUPPORTED_DEGREE", f"no formal immersion data for degree {d}")
    return recs[d]


def bad_formal_immersion(d: int, path: str | None = None) -> int:
    return bfi_record(d, path).bad_formal_immersion()


# --- the bound ---------------------------------------------------------------

@dataclass
class TypeOneResult:
    value: int
    bad_formal_immersion: int
    d_aux: int
    aux: list[str]
    components: list[int]


def type_one_bound(backend, aux_qs: Sequence[int] = DEFAULT_TYPE1_AUX, bfi: BFIRecord | None = None) -> TypeOneResult:
    d = backend.field.degree
    bfi = bfi or bfi_record(d)
    aux_qs = list(aux_qs)
    if not aux_qs:
        raise IsoprimesError("AUX_EMPTY", "no Type 1 auxiliary primes")
    if any(q % 2 == 0 for q in aux_qs):
        raise IsoprimesError("EVEN_AUX", "Type 1 auxiliary primes must be odd")
    eps0 = (0,) * d
    vals, comps, labels = [], [], []
    for q in aux_qs:
        for P in backend.primes_above(q):
            if P.gamma is None:
                continue  # dropping a prime from the gcd only enlarges D(Aux)
            rec = abc_record(eps0, P)
            ag = bfi.agfi_product(q)
            vals.append(lcm0(rec.B, rec.C, P.norm, ag))
            labels.append(P.label())
            if not comps:
                comps = rec.components + [ag]
    if not vals:
        raise IsoprimesError("AUX_EMPTY", "no Type 1 auxiliary prime has a known generator")
    d_aux = gcd_iter(vals)
    bfi_prod = bfi.bad_formal_immersion()
    value = lcm0(bfi_prod, d_aux)
    if value == 0:
        raise IsoprimesError("ZERO_BOUND", "TypeOneBound vanished")
    return TypeOneResult(value, bfi_prod, d_aux, labels, comps + [bfi_prod])
