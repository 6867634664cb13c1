"""Momose Type 2 primes: the conditional bound and a sharded, resumable Condition CC scan."""
from __future__ import annotations

import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import ceil, isqrt, log
from typing import Sequence

from .arith import primes_upto

log_ = logging.getLogger(__name__)

BLOCK = 1 << 18  # integers per checkpoint block, about 2^16 candidates = 3 mod 4
SCAN_START = 17


def type2_grh_bound(d: int, disc: int) -> int:
    """Least integer B with g(B) <= B, g(x) = (8d log(12x) + 16 log|disc| + 10d + 6)^4.

    g is increasing and concave, so every prime p > B has p > g(p)."""
    ld = log(abs(disc))

    def g(x: float) -> float:
        return (8 * d * log(12 * x) + 16 * ld + 10 * d + 6) ** 4

    B = 10.0 ** 30
    for _ in range(200):
        nb = g(B)
        if abs(nb - B) < 0.5:
            break
        B = nb
    n = ceil(B)
    while g(n) > n:
        n += 1
    while n > 1 and g(n - 1) <= n - 1:
        n -= 1
    return n


def _splits_in_minus_p(q: int, p: int) -> bool:
    if q == 2:
        return (-p) % 8 == 1
    return pow((-p) % q, (q - 1) // 2, q) == 1


def cc_table(backend, limit: int) -> list[tuple[int, int]]:
    """Sorted (q^f, q) with q^f < limit for primes of k of odd residue degree."""
    if hasattr(backend, "cc_entries"):
        return sorted(backend.cc_entries(limit))
    out = set()
    skip = set(getattr(backend, "cc_skip_primes", lambda: [])())
    for q in primes_upto(max(limit, 2)):
        if q >= limit:
            break
        if q in skip:
            continue
        for f in set(backend.residue_degrees(q)):
            if f % 2 == 1 and q ** f < limit:
                out.add((q ** f, q))
    return sorted(out)


def _eliminated(p: int, table: Sequence[tuple[int, int]]) -> bool:
    for N, q in table:
        if 4 * N >= p:
            break
        if (N * N + N + 1) % p == 0:
            continue
        if _splits_in_minus_p(q, p):
            return True
    return False


def satisfies_condition_cc(backend, p: int, table: Sequence[tuple[int, int]] | None = None) -> bool:
    """False when some prime of k above q proves p is not a Momose Type 2 prime."""
    if table is None:
        table = cc_table(backend, p // 4 + 1)
    return not _eliminated(p, table)


def _segment_primes(lo: int, hi: int, base: Sequence[int]) -> list[int]:
    """Primes in [lo, hi)."""
    lo = max(lo, 2)
    if hi <= lo:
        return []
    seg = bytearray([1]) * (hi - lo)
    for b in base:
        if b * b >= hi:
            break
        start = max(b * b, (lo + b - 1) // b * b)
        seg[start - lo::b] = bytearray(len(range(start - lo, hi - lo, b)))
    return [lo + i for i, v in enumerate(seg) if v]


def _scan_block(args) -> tuple[int, list[int]]:
    idx, lo, hi, table, base = args
    out = []
    for p in _segment_primes(lo, hi, base):
        if p < SCAN_START or p % 4 != 3:
            continue
        if not _eliminated(p, table):
            out.append(p)
    return idx, out


@dataclass
class Type2ScanResult:
    grh_bound: int
    cap: int
    survivors: list[int] = field(default_factory=list)
    caveats: list[str] = field(default_factory=list)
    blocks_done: int = 0
    blocks_total: int = 0
    skipped: bool = False

    @property
    def complete(self) -> bool:
        return self.skipped or self.blocks_done == self.blocks_total


def _write_checkpoint(path: str, state: dict) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".ckpt")
    with os.fdopen(fd, "w") as fh:
        json.dump(state, fh, sort_keys=True)
    os.replace(tmp, path)


def _load_checkpoint(path: str, field_id: str, cap: int) -> dict | None:
    if not path or not os.path.exists(path):
        return None
    with open(path) as fh:
        state = json.load(fh)
    if state.get("field") != field_id or state.get("cap") != cap or state.get("block") != BLOCK:
        log_.warning("checkpoint %s is for a different run; starting afresh", path)
        return None
    return state


def type2_scan(backend, cap: int = 10 ** 6, shards: int = 1, resume: str | None = None,
               semistable: bool = False, max_blocks: int | None = None, field_id: str | None = None) -> Type2ScanResult:
    """Survivors of Condition CC among primes p = 3 mod 4 with 17 <= p <= cap.

    ``resume`` names a checkpoint file, read if present and rewritten after every block.
    ``max_blocks`` stops early (the result is then incomplete), which is how interrupted
    runs are simulated.
    """
    d = backend.field.degree
    grh = type2_grh_bound(d, backend.discriminant)
    res = Type2ScanResult(grh, cap)
    if semistable:
        res.skipped = True
        res.caveats.append("SEMISTABLE_NO_TYPE2")
        return res
    if cap < grh:
        res.caveats.append("CAP_BELOW_GRH_BOUND")
    field_id = field_id or getattr(backend, "label", repr(backend))
    nblocks = (cap + BLOCK) // BLOCK  # blocks cover [0, cap]
    res.blocks_total = nblocks
    state = _load_checkpoint(resume, field_id, cap) or {
        "field": field_id, "cap": cap, "block": BLOCK, "done": {}}
    done: dict[str, list[int]] = state["done"]
    todo = [i for i in range(nblocks) if str(i) not in done]
    if max_blocks is not None:
        todo = todo[:max_blocks]
    if todo:
        table = cc_table(backend, cap // 4 + 1)
        base = primes_upto(isqrt(cap) + 1)
        tasks = [(i, i * BLOCK, min((i + 1) * BLOCK, cap + 1), table, base) for i in todo]
        if shards > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=shards) as ex:
                for idx, surv in ex.map(_scan_block, tasks):
                    done[str(idx)] = surv
                    if resume:
                        _write_checkpoint(resume, state)
        else:
            for t in tasks:
                idx, surv = _scan_block(t)
                done[str(idx)] = surv
                if resume:
                    _write_checkpoint(resume, state)
    res.blocks_done = len(done)
    res.survivors = sorted(p for v in done.values() for p in v)
    if not res.complete:
        res.caveats.append("SCAN_INCOMPLETE")
    return res
