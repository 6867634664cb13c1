"""Galois number fields described by a JSON field-data file.

The file supplies what cannot be computed here in degree > 2 (class group, units,
imaginary quadratic subfields); everything it claims is checked on load.
"""
from __future__ import annotations

import json
import logging
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Any, Iterator, Sequence

import numpy as np
from sympy import Poly, discriminant, factorint, symbols
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_pow_mod

from .arith import primes_from, primes_upto
from .errors import IsoprimesError
from .ff import ResidueField, poly_factor_mod, splits_completely_mask
from .nf import NFElement, NumberField, nf_norm
from .primes import ImaginaryQuadraticSubfield, PrimeIdealData

log = logging.getLogger(__name__)

_SEARCH_BUDGET = 250_000  # elements per generator search box


def _rational(x) -> Fraction:
    if isinstance(x, dict):
        return Fraction(int(x["num"]), int(x["den"]))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, bool) or not isinstance(x, int):
        raise IsoprimesError("PARSE", f"expected an integer or {{num, den}}, got {x!r}")
    return Fraction(x)


def _vector(v) -> list[Fraction]:
    if not isinstance(v, list):
        raise IsoprimesError("PARSE", f"expected a coefficient list, got {v!r}")
    return [_rational(c) for c in v]


def _encode(x: Fraction):
    return int(x) if x.denominator == 1 else {"num": x.numerator, "den": x.denominator}


def _encode_elem(e: NFElement) -> list:
    return [_encode(c) for c in e.coeffs()]


def fundamental_discriminant(r: Fraction) -> int:
    """Discriminant of Q(sqrt(r)) for a nonsquare rational r."""
    n = r.numerator * r.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    core = 1
    for p, e in factorint(n).items():
        if e % 2:
            core *= p
    core *= sign
    if core == 1:
        raise IsoprimesError("BAD_SQRT", f"{r} is a rational square")
    return core if core % 4 == 1 else 4 * core


class GaloisField:
    """Backend for a Galois field built from validated field data."""

    supports_class_dlog = False

    def __init__(self, data: dict[str, Any]):
        try:
            self._parse(data)
        except IsoprimesError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise IsoprimesError("PARSE", f"malformed field data: {exc!r}") from exc
        self._validate()
        self._prime_cache: dict[int, list[PrimeIdealData]] = {}
        self._grid: list[tuple[np.ndarray, np.ndarray]] | None = None

    # loading ----------------------------------------------------------------
    def _parse(self, data: dict) -> None:
        self.data = data
        self.label = str(data.get("label", "unnamed"))
        poly = [int(c) for c in data["defining_polynomial"]]
        d = int(data["degree"])
        if len(poly) != d + 1:
            raise IsoprimesError("PARSE", f"degree {d} does not match polynomial {poly}")
        auts = [_vector(s) for s in data["automorphisms"]]
        basis = [_vector(b) for b in data.get("integral_basis") or []] or None
        self.disc = int(data["discriminant"])
        self.field = NumberField(poly, automorphisms=auts, discriminant=self.disc, name=self.label,
                                 integral_basis=basis)
        self.degree = d
        el = self.field.element
        self.units = [el(_vector(u)) for u in data.get("unit_generators", [])]
        self.class_number = int(data.get("class_number", 1))
        self.class_entries = []
        for i, c in enumerate(data.get("class_group", [])):
            self.class_entries.append(self._prime_record(c, f"class_group[{i}]"))
        self.extra_primes = [self._prime_record(c, f"primes[{i}]") for i, c in enumerate(data.get("primes", []))]
        self.declared_split = [(int(s["p"]), [int(x) for x in s.get("g", [])]) for s in data.get("split_primes", [])]
        self.subfields_raw = [(int(s["disc"]), el(_vector(s["sqrt"])), bool(s["hcf_contained"]))
                              for s in data.get("imaginary_quadratic_subfields", [])]
        self.gen_sets_raw = [[int(i) for i in g] for g in data.get("gen_sets", [])]
        self.index_primes = tuple(int(q) for q in data.get("index_primes", []))

    def _prime_record(self, c: dict, where: str) -> dict:
        return {"q": int(c["prime"]), "g": tuple(int(x) for x in c["residue_poly"]), "h": int(c["order"]),
                "gamma": self.field.element(_vector(c["power_generator"])), "where": where}

    def _validate(self) -> None:
        F, d = self.field, self.degree
        self._check_index()
        if len(F.automorphisms) != d:
            raise IsoprimesError("NON_GALOIS", f"{len(F.automorphisms)} automorphisms for degree {d}")
        F.validate_automorphisms()
        if len({a.key() for a in F.automorphisms}) != d:
            raise IsoprimesError("NON_GALOIS", "automorphisms are not distinct")
        F.composition  # raises NON_GALOIS when not closed
        F.identity_index
        for i, u in enumerate(self.units):
            if abs(nf_norm(u)) != 1:
                raise IsoprimesError("BAD_GENERATOR_NORM", f"unit_generators[{i}] has norm {nf_norm(u)}")
        for rec in self.class_entries + self.extra_primes:
            self._check_prime_record(rec)
        if self.class_number == 1 and any(r["h"] != 1 for r in self.class_entries):
            raise IsoprimesError("PARSE", "class number 1 but a class group entry of order > 1")
        for p, g in self.declared_split:
            if p in self.index_primes:
                raise IsoprimesError("NOT_SPLIT", f"declared split prime {p} divides the index")
            facs = poly_factor_mod(F.poly, p)
            if len(facs) != d or any(len(h) != 2 or m != 1 for h, m in facs):
                raise IsoprimesError("NOT_SPLIT", f"f does not split into distinct linear factors mod {p}")
            if g and not any(tuple(c % p for c in g) == h for h, _ in facs):
                raise IsoprimesError("NOT_SPLIT", f"{g} is not a factor of f mod {p}")
        for i, (disc, e, _) in enumerate(self.subfields_raw):
            sq = e * e
            if not sq.is_rational() or e.is_rational():
                raise IsoprimesError("BAD_SQRT", f"imaginary_quadratic_subfields[{i}]: square is not rational")
            r = sq.rational()
            if r >= 0 or fundamental_discriminant(r) != disc:
                raise IsoprimesError("BAD_SQRT", f"imaginary_quadratic_subfields[{i}]: does not generate disc {disc}")
        for g in self.gen_sets_raw:
            if any(not 0 <= i < len(self.class_entries) for i in g):
                raise IsoprimesError("PARSE", f"gen_sets entry {g} refers to a missing class_group entry")

    def _check_index(self) -> None:
        # disc(f) = disc(k) * [O_k : Z[theta]]^2; Dedekind-Kummer needs the index primes declared
        pd = int(discriminant(Poly(list(reversed(self.field.poly)), symbols("x"))))
        if self.disc == 0 or pd % self.disc:
            raise IsoprimesError("PARSE", f"field discriminant {self.disc} does not divide disc(f) = {pd}")
        m2 = pd // self.disc
        m = isqrt(m2) if m2 > 0 else -1
        if m * m != m2:
            raise IsoprimesError("PARSE", f"disc(f)/disc(k) = {m2} is not a square")
        missing = [q for q in factorint(m) if q not in self.index_primes]
        if missing:
            raise IsoprimesError("PARSE", f"index primes {missing} are not declared")

    def _check_prime_record(self, rec: dict) -> None:
        q, g = rec["q"], rec["g"]
        facs = [h for h, _ in poly_factor_mod(self.field.poly, q)]
        if q in self.index_primes or tuple(c % q for c in g) not in facs:
            raise IsoprimesError("PARSE", f"{rec['where']}: {g} is not a Dedekind-Kummer factor mod {q}")
        N = q ** (len(g) - 1)
        gamma = rec["gamma"]
        if abs(nf_norm(gamma)) != N ** rec["h"]:
            raise IsoprimesError("BAD_GENERATOR_NORM",
                                 f"{rec['where']}: |Nm(gamma)| = {abs(nf_norm(gamma))}, expected {N}^{rec['h']}")
        rf = ResidueField(q, g)
        if gamma.den % q == 0 or not rf.is_zero(rf.reduce(gamma)):
            raise IsoprimesError("BAD_GENERATOR_NORM", f"{rec['where']}: generator is not in the prime")

    # interface shared with QuadraticField -------------------------------------
    @property
    def discriminant(self) -> int:
        return self.disc

    def __repr__(self) -> str:
        return f"GaloisField({self.label})"

    @property
    def rejects_infinite(self) -> bool:
        return False

    def check_finite(self) -> None:
        # in degree > 2 a contained Hilbert class field only excludes CM primes (a report caveat)
        for _, _, hcf in self.subfields_raw:
            if hcf and self.degree == 2:
                raise IsoprimesError("REJECT_INFINITE", f"{self.label} is imaginary quadratic with class number 1")

    def unit_generators(self) -> list[NFElement]:
        return list(self.units)

    def cc_skip_primes(self) -> tuple[int, ...]:
        return self.index_primes

    def residue_degrees(self, q: int) -> list[int]:
        if q in self.index_primes:
            return []
        if self.disc % q == 0:
            return [len(g) - 1 for g, _ in poly_factor_mod(self.field.poly, q)]
        # unramified in a Galois field: every residue degree is the order of Frobenius,
        # the least k with x^(q^k) = x mod (f, q)
        f_hi = [c % q for c in reversed(self.field.poly)]
        x = [1, 0]
        h = x
        for k in range(1, self.degree + 1):
            h = gf_pow_mod(h, q, f_hi, q, ZZ)
            if h == x:
                return [k] * (self.degree // k)
        raise IsoprimesError("NON_GALOIS", f"Frobenius order at {q} exceeds the degree")

    def cc_entries(self, limit: int) -> set[tuple[int, int]]:
        """(q^f, q) with f odd and q^f < limit, using one vectorised Frobenius test for large q."""
        out = set()
        big = []
        for q in primes_upto(max(limit, 2)):
            if q >= limit:
                break
            if q in self.index_primes:
                continue
            if q ** 3 < limit or self.disc % q == 0:
                for f in set(self.residue_degrees(q)):
                    if f % 2 and q ** f < limit:
                        out.add((q ** f, q))
            else:
                big.append(q)  # only f = 1 can contribute
        if big:
            mask = splits_completely_mask(self.field.poly, big)
            out |= {(q, q) for q, m in zip(big, mask) if m}
        return out

    def _known(self, q: int, g: tuple[int, ...]):
        for rec in self.class_entries + self.extra_primes:
            if rec["q"] == q and tuple(c % q for c in rec["g"]) == g:
                return rec
        return None

    def primes_above(self, q: int) -> list[PrimeIdealData]:
        hit = self._prime_cache.get(q)
        if hit is not None:
            return hit
        if q in self.index_primes:
            log.info("%d divides the index of Z[theta]; no primes above it are used", q)
            self._prime_cache[q] = []
            return []
        facs = poly_factor_mod(self.field.poly, q)
        d = self.degree
        out = []
        for g, e in facs:
            f = len(g) - 1
            if f == d:
                kind = "inert"
            elif e > 1:
                kind = "ramified"
            elif len(facs) == d:
                kind = "split"
            else:
                kind = "partial"
            rec = self._known(q, g)
            if rec is not None:
                h, gamma = rec["h"], rec["gamma"]
            elif f == d:
                h, gamma = 1, self.field(q)
            else:
                gamma = self._search_generator(q, g)
                h = 1 if gamma is not None else None
            out.append(PrimeIdealData(q, f, e, kind, g, h, gamma))
        self._prime_cache[q] = out
        return out

    def prime_ideal_data(self, q: int) -> list[PrimeIdealData]:
        return self.primes_above(q)

    # principal generators by search over small elements of O_k
    def _basis_matrix(self) -> list[list[Fraction]]:
        F = self.field
        if F.integral_basis:
            return [b.coeffs() for b in F.integral_basis]
        return [[Fraction(int(i == j)) for j in range(self.degree)] for i in range(self.degree)]

    def _grid_boxes(self):
        if self._grid is not None:
            return self._grid
        d = self.degree
        B = 1
        while (2 * B + 3) ** d <= _SEARCH_BUDGET:
            B += 1
        roots = np.roots([float(c) for c in reversed(self.field.poly)])
        basis = np.array([[float(c) for c in row] for row in self._basis_matrix()])
        # basis element values at each complex root
        powers = np.vander(roots, d, increasing=True)  # roots x powers
        bvals = powers @ basis.T  # roots x basis
        coords = np.array(list(product(range(-B, B + 1), repeat=d)), dtype=np.int64)
        height = np.abs(coords).max(axis=1)
        order = np.argsort(height, kind="stable")
        coords = coords[order]
        norms = np.prod(coords @ bvals.T, axis=1).real
        self._grid = (coords, np.abs(norms))
        return self._grid

    def _search_generator(self, q: int, g: Sequence[int]) -> NFElement | None:
        """Small element of O_k with |norm| = Nm(q, g) lying in the prime; None if none is found."""
        N = q ** (len(g) - 1)
        coords, norms = self._grid_boxes()
        cand = np.nonzero(np.abs(norms - N) < 0.5 + 1e-9 * N)[0]
        rf = ResidueField(q, g)
        basis = [self.field.element(row) for row in self._basis_matrix()]
        for i in cand:
            c = coords[i]
            x = self.field.element([0])
            for a, b in zip(c, basis):
                if a:
                    x = x + int(a) * b
            if abs(nf_norm(x)) != N:
                continue
            if x.den % q == 0 or not rf.is_zero(rf.reduce(x)):
                continue
            return x
        log.info("no generator of norm %d found for the prime (%d, %s)", N, q, list(g))
        return None

    def split_primes(self) -> Iterator[int]:
        """Totally split q for which every prime above has a known generator of its class power."""
        for q in primes_from(2):
            if q in self.index_primes:
                continue
            facs = poly_factor_mod(self.field.poly, q)
            if len(facs) != self.degree:
                continue
            if all(P.gamma is not None for P in self.primes_above(q)):
                yield q

    def imaginary_quadratic_subfields(self) -> list[ImaginaryQuadraticSubfield]:
        out = []
        for disc, e, hcf in self.subfields_raw:
            fixing = tuple(i for i in range(self.degree) if e.apply_aut(i) == e)
            out.append(ImaginaryQuadraticSubfield(disc, e, hcf, fixing))
        return out

    def _entry_prime(self, rec: dict) -> PrimeIdealData:
        for P in self.primes_above(rec["q"]):
            if P.residue_poly == tuple(c % rec["q"] for c in rec["g"]):
                return P
        raise IsoprimesError("PARSE", f"{rec['where']} does not match a prime above {rec['q']}")

    def gen_sets(self) -> list[list[PrimeIdealData]]:
        if self.class_number == 1:
            return [[]]
        if self.gen_sets_raw:
            return [[self._entry_prime(self.class_entries[i]) for i in g] for g in self.gen_sets_raw]
        return [[self._entry_prime(r) for r in self.class_entries if r["q"] != 2 and r["h"] > 1]]

    def generates_class_group(self, gen) -> bool:
        # the file asserts generation; we only check the primes are declared class group entries
        return all(self._known(P.q, P.residue_poly) is not None for P in gen)

    def nonprincipal_primes(self, count: int = 1) -> list[PrimeIdealData]:
        out = [self._entry_prime(r) for r in self.class_entries + self.extra_primes if r["h"] > 1]
        if len(out) < count:
            raise IsoprimesError("NEED_NONPRINCIPAL_AUX", "field data lists too few nonprincipal primes")
        return out[:count]


def load_field_data(path: str) -> GaloisField:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IsoprimesError("PARSE", f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise IsoprimesError("PARSE", f"{path} does not hold a JSON object")
    return GaloisField(data)


def quadratic_field_data(K, prime_bound: int = 60) -> dict:
    """Field-data dictionary for a QuadraticField, for cross-checking the two backends."""
    F = K.field
    data: dict[str, Any] = {
        "label": f"quadratic-{K.D}",
        "degree": 2,
        "defining_polynomial": list(F.poly),
        "discriminant": K.discriminant,
        "integral_basis": [[1, 0], [0, 1]],
        "automorphisms": [_encode_elem(a) for a in F.automorphisms],
        "unit_generators": [_encode_elem(u) for u in K.unit_generators()],
        "class_number": K.class_number,
        "class_group": [],
        "primes": [],
        "split_primes": [],
        "imaginary_quadratic_subfields": [],
    }

    def entry(P):
        return {"prime": P.q, "residue_poly": list(P.residue_poly), "order": P.h,
                "power_generator": _encode_elem(P.gamma)}

    if K.class_number > 1:
        data["class_group"] = [entry(g.prime) for g in K.class_chain(odd_only=True).gens]
        data["gen_sets"] = [list(range(len(data["class_group"])))]
        for q in primes_from(2):
            if q > prime_bound:
                break
            for P in K.primes_above(q):
                if P.f < 2:
                    data["primes"].append(entry(P))
    for q in primes_from(2):
        if q > prime_bound:
            break
        if K.splitting_type(q)[0] == "split":
            data["split_primes"].append({"p": q, "g": list(K.primes_above(q)[0].residue_poly)})
    for L in K.imaginary_quadratic_subfields():
        data["imaginary_quadratic_subfields"].append(
            {"disc": L.disc, "sqrt": _encode_elem(L.sqrt), "hcf_contained": L.hcf_contained})
    return data
