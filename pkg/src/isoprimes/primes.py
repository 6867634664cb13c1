"""Data records shared by the field backends."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .nf import NFElement


@dataclass
class PrimeIdealData:
    """A prime q of k: residue char q, degree f, ramification e, class order h, generator of q^h.

    ``residue_poly`` is the irreducible factor g of the defining polynomial mod q with
    q = (q, g(theta)); it gives the reduction map O_k -> O_k/q.
    """

    q: int
    f: int
    e: int
    kind: str
    residue_poly: tuple[int, ...]
    h: int | None = None
    gamma: NFElement | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def norm(self) -> int:
        return self.q ** self.f

    def label(self) -> str:
        return f"({self.q}, {list(self.residue_poly)})"


@dataclass
class ImaginaryQuadraticSubfield:
    disc: int
    sqrt: NFElement  # an element e with e^2 rational generating the subfield
    hcf_contained: bool
    fixing: tuple[int, ...] = ()  # indices of automorphisms fixing the subfield
