"""Exact arithmetic in Q[x]/(f) for monic integral f.

Elements are stored as an integer numerator vector over the power basis
together with a positive common denominator.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .errors import IsoprimesError


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_rem_monic(c: Sequence[int], f: Sequence[int]) -> list[int]:
    """Remainder of c modulo the monic polynomial f (coefficients low -> high)."""
    d = len(f) - 1
    c = list(c)
    for top in range(len(c) - 1, d - 1, -1):
        t = c[top]
        if t:
            shift = top - d
            for i in range(d):
                c[shift + i] -= t * f[i]
        c[top] = 0
    c = c[:d] if len(c) >= d else c + [0] * (d - len(c))
    return c


def bareiss_det(m: list[list[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * piv - aik * row_k[j]) // prev
        prev = piv
    return sign * a[n - 1][n - 1]


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Res(f, g) of integer polynomials via the Sylvester determinant."""
    f, g = _trim(list(f)), _trim(list(g))
    if not f or not g:
        return 0
    m, n = len(f) - 1, len(g) - 1
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    rows = []
    fh, gh = f[::-1], g[::-1]
    for i in range(n):
        rows.append([0] * i + fh + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gh + [0] * (size - n - 1 - i))
    return bareiss_det(rows)


class NumberField:
    """The field Q[x]/(f) together with its automorphisms (when Galois)."""

    def __init__(self, poly: Sequence[int], automorphisms: Sequence[Sequence] | None = None,
                 discriminant: int | None = None, name: str | None = None,
                 integral_basis: Sequence[Sequence] | None = None):
        poly = [int(c) for c in poly]
        if len(poly) < 2 or poly[-1] != 1:
            raise IsoprimesError("NON_MONIC", f"defining polynomial {poly} is not monic")
        self.poly = tuple(poly)
        self.degree = len(poly) - 1
        self.name = name or f"Q[x]/({self.poly})"
        self.discriminant = discriminant
        self.integral_basis = [self.element(v) for v in integral_basis] if integral_basis else None
        self.automorphisms: list[NFElement] = []
        if automorphisms is not None:
            for s in automorphisms:
                self.automorphisms.append(self.element(s))
        else:
            self.automorphisms = [self.gen()]

    # construction ---------------------------------------------------------
    def element(self, coeffs: Iterable) -> "NFElement":
        fr = [Fraction(c) for c in coeffs]
        if len(fr) > self.degree:
            num, den = _to_num_den(fr)
            num = poly_rem_monic(num, self.poly)
            return NFElement(self, num, den)
        fr += [Fraction(0)] * (self.degree - len(fr))
        num, den = _to_num_den(fr)
        return NFElement(self, num, den)

    def __call__(self, value) -> "NFElement":
        if isinstance(value, NFElement):
            return value
        if isinstance(value, (int, Fraction)):
            return self.element([value])
        return self.element(value)

    def gen(self) -> "NFElement":
        return self.element([0, 1]) if self.degree > 1 else self.element([-self.poly[0]])

    def one(self) -> "NFElement":
        return self.element([1])

    # Galois structure -----------------------------------------------------
    @property
    def is_galois(self) -> bool:
        return len(self.automorphisms) == self.degree

    def validate_automorphisms(self) -> None:
        for i, s in enumerate(self.automorphisms):
            if not self.poly_eval(self.poly, s).is_zero():
                raise IsoprimesError("AUT_NOT_ROOT", f"automorphism {i} does not map θ to a root of f")

    @cached_property
    def composition(self) -> list[list[int]]:
        """composition[i][j] = index of σ_i ∘ σ_j."""
        auts = self.automorphisms
        index = {a.key(): i for i, a in enumerate(auts)}
        table = []
        for i in range(len(auts)):
            row = []
            for j in range(len(auts)):
                # (σ_i ∘ σ_j)(θ) = σ_i(s_j(θ)) = s_j(s_i(θ))
                img = self.poly_eval_elem(auts[j], auts[i])
                k = index.get(img.key())
                if k is None:
                    raise IsoprimesError("NON_GALOIS", "automorphisms are not closed under composition")
                row.append(k)
            table.append(row)
        return table

    @cached_property
    def identity_index(self) -> int:
        for i, a in enumerate(self.automorphisms):
            if a == self.gen():
                return i
        raise IsoprimesError("NON_GALOIS", "identity automorphism missing")

    # evaluation helpers ---------------------------------------------------
    def poly_eval(self, coeffs: Sequence, x: "NFElement") -> "NFElement":
        acc = self.element([0])
        for c in reversed(list(coeffs)):
            acc = acc * x + c
        return acc

    def poly_eval_elem(self, elem: "NFElement", x: "NFElement") -> "NFElement":
        """elem(x) where elem is read as a polynomial in θ."""
        acc = NFElement(self, [0] * self.degree, 1)
        for c in reversed(elem.num):
            acc = acc * x
            if c:
                acc = acc + c
        return NFElement(self, acc.num, acc.den * elem.den)

    @cached_property
    def power_sums(self) -> list[int]:
        """Tr(θ^i) for i < d via Newton's identities on f."""
        d = self.degree
        # elementary symmetric functions e_k = (-1)^k a_{d-k}
        e = [1] + [(-1) ** k * self.poly[d - k] for k in range(1, d + 1)]
        p = [d]
        for k in range(1, d):
            s = (-1) ** (k - 1) * k * e[k]
            for i in range(1, k):
                s += (-1) ** (k - i - 1) * e[k - i] * p[i]
            p.append(s)
        return p

    def __repr__(self) -> str:
        return f"NumberField({self.name})"


def _to_num_den(fr: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for c in fr:
        den = den * c.denominator // gcd(den, c.denominator)
    return [int(c * den) for c in fr], den


class NFElement:
    __slots__ = ("field", "num", "den")

    def __init__(self, field: NumberField, num: Sequence[int], den: int = 1):
        if den < 0:
            num, den = [-c for c in num], -den
        g = den
        for c in num:
            if g == 1:
                break
            g = gcd(g, c)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.field = field
        self.num = list(num)
        self.den = den

    # basic protocol -------------------------------------------------------
    def coeffs(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def key(self) -> tuple:
        return (tuple(self.num), self.den)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field(other)
        return isinstance(other, NFElement) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def is_integral_in_power_basis(self) -> bool:
        return self.den == 1

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.num):
            if c:
                terms.append(f"{Fraction(c, self.den)}" + ("" if i == 0 else "*t" if i == 1 else f"*t^{i}"))
        return " + ".join(terms) or "0"

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "NFElement":
        if isinstance(other, NFElement):
            return other
        return self.field(Fraction(other))

    def __add__(self, other) -> "NFElement":
        if isinstance(other, int):
            num = list(self.num)
            num[0] += other * self.den
            return NFElement(self.field, num, self.den)
        o = self._coerce(other)
        if o.den == self.den:
            return NFElement(self.field, [a + b for a, b in zip(self.num, o.num)], self.den)
        return NFElement(self.field, [a * o.den + b * self.den for a, b in zip(self.num, o.num)],
                         self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "NFElement":
        return NFElement(self.field, [-a for a in self.num], self.den)

    def __sub__(self, other) -> "NFElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "NFElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "NFElement":
        if isinstance(other, int):
            return NFElement(self.field, [a * other for a in self.num], self.den)
        o = self._coerce(other)
        prod = poly_rem_monic(poly_mul(self.num, o.num), self.field.poly)
        return NFElement(self.field, prod, self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "NFElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other) -> "NFElement":
        if isinstance(other, (int, Fraction)):
            fr = Fraction(other)
            return NFElement(self.field, [a * fr.denominator for a in self.num], self.den * fr.numerator)
        return self * self._coerce(other).inverse()

    def multiplication_matrix(self) -> list[list[int]]:
        """Integer matrix (scaled by den) of multiplication by self on the power basis."""
        d = self.field.degree
        cols = []
        for i in range(d):
            e = [0] * d
            e[i] = 1
            cols.append(poly_rem_monic(poly_mul(self.num, e), self.field.poly))
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def inverse(self) -> "NFElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        m = [[Fraction(x) for x in row] for row in self.multiplication_matrix()]
        d = len(m)
        rhs = [Fraction(1)] + [Fraction(0)] * (d - 1)
        aug = [row + [rhs[i]] for i, row in enumerate(m)]
        for col in range(d):
            piv = next(r for r in range(col, d) if aug[r][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            pv = aug[col][col]
            aug[col] = [x / pv for x in aug[col]]
            for r in range(d):
                if r != col and aug[r][col] != 0:
                    fac = aug[r][col]
                    aug[r] = [a - fac * b for a, b in zip(aug[r], aug[col])]
        sol = [aug[i][d] * self.den for i in range(d)]
        return self.field.element(sol)

    # invariants -----------------------------------------------------------
    def norm(self) -> Fraction:
        return nf_norm(self)

    def trace(self) -> Fraction:
        ps = self.field.power_sums
        return Fraction(sum(c * p for c, p in zip(self.num, ps)), self.den)

    def charpoly(self) -> list[Fraction]:
        """Coefficients (low -> high) of the monic polynomial prod_sigma (Y - sigma(self))."""
        d = self.field.degree
        p = []
        x = self.field.one()
        for _ in range(d):
            x = x * self
            p.append(x.trace())
        e = [Fraction(1)]
        for k in range(1, d + 1):
            s = Fraction(0)
            for i in range(1, k + 1):
                s += (-1) ** (i - 1) * e[k - i] * p[i - 1]
            e.append(s / k)
        return [(-1) ** k * e[k] for k in range(d, -1, -1)]

    def apply_aut(self, index: int) -> "NFElement":
        return nf_apply_aut(self, index)


def nf_norm(elem: NFElement) -> Fraction:
    """Norm as Res(f, g) / den^d, exact."""
    field = elem.field
    r = resultant(field.poly, elem.num)
    return Fraction(r, elem.den ** field.degree)


def nf_apply_aut(elem: NFElement, index: int) -> NFElement:
    field = elem.field
    if not 0 <= index < len(field.automorphisms):
        raise IndexError(f"automorphism index {index} out of range")
    return field.poly_eval_elem(elem, field.automorphisms[index])


def nf_pow_signature(elem: NFElement, eps: Sequence[int]) -> NFElement:
    """prod_i sigma_i(elem)^{eps_i}."""
    field = elem.field
    if len(eps) != field.degree:
        raise IsoprimesError("SIGNATURE_LENGTH", f"signature of length {len(eps)} for degree {field.degree}")
    if len(set(eps)) == 1:
        return field(nf_norm(elem) ** eps[0])
    result = field.one()
    for i, a in enumerate(eps):
        if a:
            result = result * nf_apply_aut(elem, i) ** a
    return result


def eval_monic_at(cp: Sequence[Fraction], r) -> Fraction:
    acc = Fraction(0)
    for c in reversed(cp):
        acc = acc * r + c
    return acc


def norm_minus_rational(cp: Sequence[Fraction], r) -> Fraction:
    """Nm(x - r) from the characteristic polynomial cp of x."""
    d = len(cp) - 1
    return (-1) ** d * eval_monic_at(cp, r)


def norm_quadratic_in(cp: Sequence[Fraction], s: int, c: int) -> Fraction:
    """Nm(x^2 - s x + c) from the characteristic polynomial of x.

    The product over conjugates equals cp(rho) cp(rho') where rho, rho' are the
    roots of Y^2 - sY + c; evaluate cp in Q[Y]/(Y^2 - sY + c).
    """
    a, b = Fraction(0), Fraction(0)  # value a + b*Y
    for coef in reversed(cp):
        # (a + bY) * Y = aY + b(sY - c)
        a, b = -b * c + coef, a + b * s
    return a * a + a * b * s + b * b * c
