"""The combined pipeline: bounds, the Type 2 scan, factoring, then weeding with provenance."""
from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import asdict, dataclass, field
from typing import Any

from .arith import MAZUR_PRIMES, lcm0
from .bounds_generic import AuxStrategy, BoundLedger, mmib
from .errors import IsoprimesError
from .factoring import prime_support
from .galois import load_field_data
from .ice import DEFAULT_TEST_Q, ice_filter
from .quadratic import QuadraticField
from .signatures import SignatureType, classify_signature, congruence_filter
from .type_one import DEFAULT_TYPE1_AUX, BFIRecord, load_bfi, save_bfi, type_one_bound
from .type_two import type2_scan

log = logging.getLogger(__name__)

SMALL_PRIME_LIMIT = 17


@dataclass
class RunConfig:
    kind: str = "quadratic"  # or "galois"
    D: int | None = None
    path: str | None = None
    aux: AuxStrategy = field(default_factory=AuxStrategy.auto_stop)
    type1_aux: tuple[int, ...] = DEFAULT_TYPE1_AUX
    type2_cap: int = 10 ** 6
    shards: int = 1
    resume: str | None = None
    semistable: bool = False
    ice: bool = True
    ice_max_q: int = DEFAULT_TEST_Q
    bfi_cache: str | None = None

    def describe(self) -> dict:
        return {"field": self.kind, "D": self.D, "path": os.path.basename(self.path) if self.path else None,
                "aux": {"strategy": self.aux.kind, "value": self.aux.value},
                "type1_aux": list(self.type1_aux), "type2_cap": self.type2_cap,
                "semistable": self.semistable, "ice": self.ice, "ice_max_q": self.ice_max_q}


@dataclass
class Route:
    route: str  # generic | type1 | type2 | type2-not-momose | type3
    signature: tuple[int, ...]
    stype: str
    congruence: bool | None = None
    ice: bool | None = None

    @property
    def passes(self) -> bool:
        return bool(self.congruence) and self.ice is not False


@dataclass
class PrimeProvenance:
    p: int
    routes: list[Route] = field(default_factory=list)
    kept: bool = False
    reason: str = ""


@dataclass
class SupersetReport:
    field: dict[str, Any]
    config: dict[str, Any]
    superset: list[int]
    provenance: dict[int, PrimeProvenance]
    bounds: dict[str, Any]
    caveats: list[str]
    unconditional: bool
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def beyond_mazur(self) -> list[int]:
        return [p for p in self.superset if p not in MAZUR_PRIMES]

    def as_dict(self, timings: bool = True) -> dict:
        out = {
            "field": self.field,
            "config": self.config,
            "superset": self.superset,
            "superset_minus_mazur": self.beyond_mazur,
            "unconditional": self.unconditional,
            "caveats": self.caveats,
            "bounds": self.bounds,
            "provenance": {str(p): {"kept": pr.kept, "reason": pr.reason,
                                    "routes": [asdict(r) | {"signature": list(r.signature)} for r in pr.routes]}
                           for p, pr in sorted(self.provenance.items())},
        }
        if timings:
            out["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return out

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.as_dict(timings), indent=2, sort_keys=True)

    def to_text(self) -> str:
        f = self.field
        lines = [f"field: {f['label']} (degree {f['degree']}, discriminant {f['discriminant']}, "
                 f"class number {f['class_number']})",
                 f"S_k: {self.superset}",
                 f"S_k minus Mazur primes: {self.beyond_mazur}",
                 f"unconditional: {'yes' if self.unconditional else 'no (Type 2 part assumes GRH)'}"]
        if self.caveats:
            lines.append("caveats: " + ", ".join(self.caveats))
        b = self.bounds
        lines.append(f"MMIB primes: {b['mmib']['primes']}")
        lines.append(f"TypeOneBound primes: {b['type1']['primes']}")
        t2 = b["type2"]
        if t2.get("skipped"):
            lines.append("Type 2 scan: skipped (semistable)")
        else:
            lines.append(f"Type 2 scan: cap {t2['cap']}, GRH bound {t2['grh_bound']}, survivors {t2['survivors']}")
        lines.append("candidates:")
        for p, pr in sorted(self.provenance.items()):
            tags = "; ".join(_route_text(r) for r in pr.routes) or "-"
            lines.append(f"  {p:>6} {'kept   ' if pr.kept else 'removed'} {pr.reason:<24} {tags}")
        if self.timings:
            lines.append("timings: " + ", ".join(f"{k} {v:.2f}s" for k, v in self.timings.items()))
        return "\n".join(lines)


def _route_text(r: Route) -> str:
    sig = "".join(f"{a:x}" if a < 12 else "c" for a in r.signature) if r.signature else ""
    marks = []
    if r.congruence is False:
        marks.append("cong")
    if r.ice is False:
        marks.append("ice")
    tail = f" x{'/'.join(marks)}" if marks else ""
    return f"{r.route}[{r.stype}{':' + sig if sig else ''}]{tail}"


# ---------------------------------------------------------------------------

def build_backend(config: RunConfig):
    if config.kind == "quadratic":
        if config.D is None:
            raise IsoprimesError("INVALID_FIELD", "no discriminant given")
        K = QuadraticField(config.D)
    elif config.kind == "galois":
        if not config.path:
            raise IsoprimesError("PARSE", "no field-data path given")
        K = load_field_data(config.path)
    else:
        raise IsoprimesError("INVALID_FIELD", f"unknown field kind {config.kind}")
    K.check_finite()
    return K


def _bfi(config: RunConfig, d: int) -> BFIRecord:
    path = config.bfi_cache
    if path and os.path.exists(path):
        recs = load_bfi(path)
    else:
        recs = load_bfi()
        if path:
            save_bfi(recs, path)
    if d not in recs:
        raise IsoprimesError("UNSUPPORTED_DEGREE", f"no formal immersion data for degree {d}")
    return recs[d]


def _semistable_ok(eps) -> bool:
    # semistable curves only have signatures with entries 0 and 12
    return set(eps) <= {0, 12}


def _split_or_ramified(K, p: int) -> bool:
    P = K.primes_above(p)
    if not P:  # index prime: unknown, keep
        return True
    return not (len(P) == 1 and P[0].e == 1)


class _Support:
    """Prime supports, factoring once per signature-type lcm."""

    def __init__(self):
        self.unresolved: list[int] = []

    def of_group(self, values: list[int], components: list[int]) -> set[int]:
        L = lcm0(*values) if values else 1
        if L == 0:
            raise IsoprimesError("ZERO_BOUND", "a bound to be factored vanished")
        if L == 1:
            return set()
        primes, unres = prime_support(L, components)
        self.unresolved += unres
        return primes


def run_combined(config: RunConfig, backend=None) -> SupersetReport:
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    K = backend if backend is not None else build_backend(config)
    d = K.field.degree
    caveats: list[str] = []
    support = _Support()

    # MMIB
    t = time.perf_counter()
    ledger: BoundLedger = mmib(K, config.aux)
    timings["mmib"] = time.perf_counter() - t

    candidates: dict[int, PrimeProvenance] = {}

    def attach(p: int, route: Route) -> None:
        candidates.setdefault(p, PrimeProvenance(p)).routes.append(route)

    groups: dict[str, list] = {}
    for b in ledger.generic:
        groups.setdefault(b.stype, []).append(b)
    generic_primes: set[int] = set()
    for stype, bounds in sorted(groups.items()):
        comps = [c for b in bounds for c in b.components]
        primes = support.of_group([b.value for b in bounds], comps)
        for b in bounds:
            for p in sorted(primes):
                if b.value % p == 0:
                    generic_primes.add(p)
                    if not config.semistable or _semistable_ok(b.eps):
                        attach(p, Route("generic", b.eps, b.stype))
    eps6 = (6,) * d
    t2nm_primes: set[int] = set()
    if ledger.type2_not_momose != 1:
        t2nm_primes = support.of_group([ledger.type2_not_momose], ledger.type2_components)
        if not config.semistable:
            for p in sorted(t2nm_primes):
                attach(p, Route("type2-not-momose", eps6, SignatureType.TYPE2.value))
    t3_primes: set[int] = set()
    for b in ledger.type3:
        ps = support.of_group([b.value], b.components)
        t3_primes |= ps
        for p in sorted(ps):
            attach(p, Route("type3", b.eps, classify_signature(b.eps).value))
    if any(L.hcf_contained for L in K.imaginary_quadratic_subfields()):
        caveats.append("CM_TYPE3_EXCLUDED")

    # Type 1
    t = time.perf_counter()
    bfi = _bfi(config, d)
    t1 = type_one_bound(K, config.type1_aux, bfi)
    t1_primes = set(bfi.bad_primes()) | support.of_group([t1.d_aux], t1.components)
    eps0 = (0,) * d
    for p in sorted(t1_primes):
        attach(p, Route("type1", eps0, SignatureType.TYPE1.value))
    timings["type1"] = time.perf_counter() - t

    # Type 2
    t = time.perf_counter()
    scan = type2_scan(K, cap=config.type2_cap, shards=config.shards, resume=config.resume,
                      semistable=config.semistable, field_id=getattr(K, "label", None))
    for p in scan.survivors:
        attach(p, Route("type2", eps6, SignatureType.TYPE2.value))
    caveats += scan.caveats
    if not config.semistable:
        caveats.insert(0, "GRH_CONDITIONAL_TYPE2")
    timings["type2"] = time.perf_counter() - t

    if support.unresolved:
        caveats.append("FACTORING_TIMEOUT")

    # weeding
    t = time.perf_counter()
    for p in range(2, SMALL_PRIME_LIMIT):
        if all(p % r for r in range(2, p)):
            candidates.setdefault(p, PrimeProvenance(p))
    for p in MAZUR_PRIMES:
        candidates.setdefault(p, PrimeProvenance(p))
    for p, pr in sorted(candidates.items()):
        if p < SMALL_PRIME_LIMIT:
            pr.kept, pr.reason = True, "small-prime"
            continue
        if p in MAZUR_PRIMES:
            pr.kept, pr.reason = True, "mazur"
            continue
        sor = _split_or_ramified(K, p)
        for r in pr.routes:
            r.congruence = congruence_filter(p, SignatureType(r.stype), sor)
            if r.congruence and config.ice:
                r.ice = ice_filter(K, p, [r.signature], config.ice_max_q)
            if r.passes:
                pr.kept, pr.reason = True, r.route
                break
        if not pr.kept:
            pr.reason = "congruence" if all(r.congruence is False for r in pr.routes) else "ice"
    timings["weeding"] = time.perf_counter() - t
    timings["total"] = time.perf_counter() - t0

    superset = sorted(p for p, pr in candidates.items() if pr.kept)
    bounds = {
        "mmib": {"value": str(ledger.mmib), "primes": sorted(generic_primes | t2nm_primes | t3_primes),
                 "aux": ledger.aux},
        "generic": [{"signature": list(b.eps), "type": b.stype, "value": str(b.value),
                     "primes": sorted(p for p in generic_primes if b.value % p == 0)} for b in ledger.generic],
        "type2_not_momose": {"value": str(ledger.type2_not_momose), "primes": sorted(t2nm_primes)},
        "type3": [{"signature": list(b.eps), "value": str(b.value)} for b in ledger.type3],
        "type1": {"value": str(t1.value), "bad_formal_immersion": str(t1.bad_formal_immersion),
                  "d_aux": str(t1.d_aux), "primes": sorted(t1_primes), "aux": t1.aux},
        "type2": {"grh_bound": scan.grh_bound, "cap": scan.cap, "survivors": scan.survivors,
                  "skipped": scan.skipped, "blocks_done": scan.blocks_done, "blocks_total": scan.blocks_total},
        "unresolved_cofactors": [str(u) for u in support.unresolved],
    }
    field_info = {"label": K.label, "degree": d, "discriminant": K.discriminant, "class_number": K.class_number}
    return SupersetReport(field_info, config.describe(), superset, candidates, bounds, caveats,
                          unconditional=config.semistable, timings=timings)
