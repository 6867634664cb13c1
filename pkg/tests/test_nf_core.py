from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.functions.combinatorial.numbers import kronecker_symbol
from sympy.polys.subresultants_qq_zz import sylvester

from isoprimes.arith import gcd_iter, is_squarefree, kronecker, lcm0, primes_upto
from isoprimes.ff import ResidueField, poly_factor_mod, splits_completely_mask
from isoprimes.nf import NumberField, nf_norm, nf_pow_signature, resultant

x = sympy.symbols("x")
coeffs = st.lists(st.integers(-20, 20), min_size=3, max_size=3)


def sympy_poly(c):
    return sympy.Poly(list(reversed(c)), x)


def sylvester_resultant(f, g):
    # sympy.resultant has sign slips when deg f < deg g; the Sylvester determinant does not
    return sylvester(sympy_poly(f).as_expr(), sympy_poly(g).as_expr(), x, 1).det()


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(1, 10 ** 4))
def test_kronecker_matches_sympy(a, n):
    assert kronecker(a, n) == kronecker_symbol(a, n)


def test_lcm_gcd_conventions():
    assert lcm0() == 1 and lcm0(4, 6) == 12 and lcm0(3, 0, 5) == 0
    assert gcd_iter([]) == 0 and gcd_iter([0, 12, -18]) == 6
    assert is_squarefree(30) and not is_squarefree(12) and not is_squarefree(0)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=5), st.lists(st.integers(-9, 9), min_size=1, max_size=4))
def test_resultant_matches_sylvester_determinant(f, g):
    f = f[:-1] + [1]
    while len(g) > 1 and g[-1] == 0:
        g = g[:-1]
    if not any(g):
        return
    r = resultant(f, g)
    if len(g) == 1:
        assert r == g[0] ** (len(f) - 1)
    else:
        assert r == sylvester_resultant(f, g)


def test_norm_matches_resultant(cubic, quartic):
    for K in (cubic, quartic):
        F = K.field
        for c in ([1, 1, 0, 0][:F.degree], [2, -1, 3, 1][:F.degree], [0, 0, 1, 0][:F.degree]):
            a = F.element(c)
            want = sylvester_resultant(F.poly, c)
            assert nf_norm(a) == want


@given(coeffs, coeffs)
def test_norm_multiplicative_and_automorphisms(a, b):
    from conftest import CUBIC
    F = _field(CUBIC).field
    u, v = F.element(a), F.element(b)
    assert nf_norm(u * v) == nf_norm(u) * nf_norm(v)
    for i in range(3):
        assert (u * v).apply_aut(i) == u.apply_aut(i) * v.apply_aut(i)
        assert (u + v).apply_aut(i) == u.apply_aut(i) + v.apply_aut(i)
    if not u.is_zero():
        assert u * u.inverse() == F.one()
    prod = F.one()
    for i in range(3):
        prod = prod * u.apply_aut(i)
    assert prod.is_rational() and prod.rational() == nf_norm(u)


_cache = {}


def _field(path):
    from isoprimes.galois import load_field_data
    if path not in _cache:
        _cache[path] = load_field_data(path)
    return _cache[path]


@given(st.lists(st.integers(-6, 6), min_size=4, max_size=4))
def test_charpoly_consistency_quartic(c):
    from conftest import QUARTIC
    F = _field(QUARTIC).field
    a = F.element(c)
    cp = a.charpoly()
    assert cp[-1] == 1 and len(cp) == 5
    assert cp[0] == nf_norm(a)  # (-1)^4 = 1
    assert -cp[3] == a.trace()


def test_signature_power_is_product_of_conjugates(cubic):
    F = cubic.field
    g = F.element([3, 1, 0])
    eps = (4, 0, 8)
    want = g.apply_aut(0) ** 4 * g.apply_aut(2) ** 8
    assert nf_pow_signature(g, eps) == want


def test_rational_element_helpers():
    F = NumberField([-5, 0, 1])
    a = F.element([Fraction(1, 2), 0])
    assert a.is_rational() and a.rational() == Fraction(1, 2)
    assert not F.gen().is_rational()


def test_factor_mod_reconstructs(cubic):
    f = cubic.field.poly
    for p in primes_upto(60):
        facs = poly_factor_mod(f, p)
        prod = sympy.Poly(1, x, modulus=p)
        for g, m in facs:
            prod *= sympy.Poly(list(reversed(g)), x, modulus=p) ** m
        assert prod == sympy.Poly(list(reversed(f)), x, modulus=p)


def test_splits_completely_mask_matches_factoring(quartic):
    f = quartic.field.poly
    qs = [q for q in primes_upto(3000) if q > 5]
    mask = splits_completely_mask(f, qs)
    for q, m in zip(qs, mask):
        assert bool(m) == (len(poly_factor_mod(f, q)) == 4)
        assert bool(m) == (q % 5 == 1)  # Q(zeta_5)


def test_residue_field_reduction(cubic):
    F = cubic.field
    for p in (13, 29):
        for g, _ in poly_factor_mod(F.poly, p):
            rf = ResidueField(p, g)
            theta = F.gen()
            # theta reduces to a root of g
            assert rf.is_zero(rf.reduce(F.poly_eval(g, theta)))
            a, b = F.element([2, 1, 0]), F.element([1, 0, 3])
            assert rf.reduce(a * b) == rf.mul(rf.reduce(a), rf.reduce(b))


def test_zero_inverse_raises(cubic):
    with pytest.raises(Exception):
        cubic.field.element([0, 0, 0]).inverse()
