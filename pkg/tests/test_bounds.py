import math
import os
from dataclasses import replace
from itertools import product
from math import gcd

import pytest
import sympy
from hypothesis import given, strategies as st

from isoprimes.arith import lcm0, primes_upto
from isoprimes.bounds_generic import (AuxStrategy, abc_record, c_star, generic_bound, mmib, type_three_not_momose_bound,
                                      type_two_not_momose_bound, unit_divisibility)
from isoprimes.errors import IsoprimesError
from isoprimes.frobenius import ordinary_traces, power_trace
from isoprimes.quadratic import QuadraticField
from isoprimes.type_one import (BFIRecord, R_matrix, bfi_record, construct_M, eps_M, load_bfi, rank,
                                rank_fraction_free, rank_mod, save_bfi, type_one_bound, units_mod)
from isoprimes.type_two import (SCAN_START, cc_table, satisfies_condition_cc, type2_grh_bound, type2_scan)

# --- A/B/C against exact symbolic arithmetic -------------------------------------------


def _conjugates(K, g):
    """gamma and its conjugate as sympy numbers, with w = (delta + sqrt(disc)) / 2."""
    r = sympy.sqrt(K.disc)
    a, b = g.coeffs()
    w, wc = (K.delta + r) / 2, (K.delta - r) / 2
    return sympy.Rational(a) + sympy.Rational(b) * w, sympy.Rational(a) + sympy.Rational(b) * wc


def _norm(expr_pair):
    v = sympy.expand(expr_pair[0] * expr_pair[1])
    assert v.is_Integer
    return int(v)


@pytest.mark.parametrize("D,eps", [(5, (0, 12)), (5, (4, 4)), (5, (0, 6)), (-5, (4, 8)), (13, (0, 4)), (-23, (6, 0)), (-23, (4, 8)), (-5, (0, 6))])
def test_abc_matches_symbolic_norms(D, eps):
    K = QuadraticField(D)
    P = next(P for q in primes_upto(50) for P in K.primes_above(q) if P.kind == "split")
    g, gc = _conjugates(K, P.gamma)
    x, xc = g ** eps[0] * gc ** eps[1], gc ** eps[0] * g ** eps[1]
    N, h = P.norm, P.h
    rec = abc_record(eps, P)
    assert rec.A == _norm((x - 1, xc - 1))
    assert rec.B == _norm((x - N ** (12 * h), xc - N ** (12 * h)))
    if P.q == 2 and P.f % 2:
        # the supersingular term collapses to B at the doubled signature
        assert rec.C_s == abc_record([2 * e for e in eps], P).B
    else:
        assert rec.C_s == _norm((x - N ** (6 * h), xc - N ** (6 * h)))
    c = N ** (12 * h)
    want = [_norm((x ** 2 - s * x + c, xc ** 2 - s * xc + c))
            for s in sorted({power_trace(t, P.q, 1, 12 * h).s for t in ordinary_traces(P.q, 1)})]
    assert rec.components[4:] == want
    assert rec.C_o == lcm0(*want)


def test_A_at_norm_eleven_with_fixed_generator():
    # gamma = omega - 4 in Q(sqrt 5): gamma^4 = 338 - 189 omega, so A = Nm(337 - 189 omega) = 14155
    K = QuadraticField(5)
    P = K.primes_above(11)[0]
    P = replace(P, gamma=K.field.element([-4, 1]))
    g, gc = _conjugates(K, P.gamma)
    assert sympy.expand(g ** 4) == sympy.expand(338 - 189 * (1 + sympy.sqrt(5)) / 2)
    assert abc_record((4, 0), P).A == _norm((g ** 4 - 1, gc ** 4 - 1)) == 14155
    assert abc_record((0, 0), P).A == 0


def test_c_star_drops_only_zero_terms():
    K = QuadraticField(-5)
    P = K.primes_above(3)[0]
    val, terms = c_star((0, 12), P)
    assert val != 0 and all(terms)
    assert val == lcm0(*terms)


def test_unit_divisibility_symbolic():
    K = QuadraticField(5)
    eps = (0, 12)
    want = 0
    for u in K.unit_generators():
        g, gc = _conjugates(K, u)
        x, xc = g ** eps[0] * gc ** eps[1], gc ** eps[0] * g ** eps[1]
        v = _norm((x - 1, xc - 1))
        if v:
            want = gcd(want, v)
    assert unit_divisibility(K.unit_generators(), eps) == want


def test_type1_constant_signature_B_value():
    # eps = 0 at a split prime of norm 11 with h = 1: B = (1 - 11^12)^2
    K = QuadraticField(5)
    P = K.primes_above(11)[0]
    assert P.h == 1
    assert abc_record((0, 0), P).B == (1 - 11 ** 12) ** 2


# --- bounds ------------------------------------------------------------------------------

def test_generic_bound_gcd_monotone_in_aux():
    K = QuadraticField(13)
    small = generic_bound(K, AuxStrategy.norm_bound(40))
    large = generic_bound(K, AuxStrategy.norm_bound(80))
    for a, b in zip(small[1], large[1]):
        assert a.eps == b.eps and b.value != 0 and a.value % b.value == 0
    assert all(small[0] % b.value == 0 for b in small[1])


def test_auto_stop_bound_is_stable():
    K = QuadraticField(5)
    total, bounds, aux = generic_bound(K, AuxStrategy.auto_stop(4))
    assert total != 0
    # four more split primes do not shrink any signature bound
    more = [P for q in primes_upto(200) if q > aux[-1].q and K.splitting_type(q)[0] == "split"
            for P in K.primes_above(q)][:8]
    total2, _, _ = generic_bound(K, AuxStrategy.auto_stop(4), more)
    assert total2 == total


def test_type_two_not_momose_bound():
    K = QuadraticField(-23)
    value, comps = type_two_not_momose_bound(K)
    assert value not in (0, 1)
    assert type_two_not_momose_bound(QuadraticField(5)) == (1, [])
    with pytest.raises(IsoprimesError) as err:
        type_two_not_momose_bound(K, [[K.primes_above(2)[0]]])
    assert err.value.code == "GEN_EVEN_CHARACTERISTIC"
    principal = next(P for q in primes_upto(100) for P in K.primes_above(q) if P.h == 1 and q != 2)
    with pytest.raises(IsoprimesError) as err:
        type_two_not_momose_bound(K, [[principal]])
    assert err.value.code == "GEN_NOT_GENERATING"


def test_type_three_bound_includes_subfield_disc():
    K = QuadraticField(-5)
    ledger = mmib(K)
    assert ledger.type3_bound % 20 == 0
    assert type_three_not_momose_bound(QuadraticField(5), [])[0] == 1


def test_mmib_d5_regression():
    ledger = mmib(QuadraticField(5))
    assert ledger.mmib != 0 and ledger.type2_not_momose == 1 and ledger.type3_bound == 1
    # one representative per orbit of {0,4,6,8,12}^2 under e -> 12 - e and the swap, minus Types 1 and 2
    orbits = set()
    for e in product((0, 4, 6, 8, 12), repeat=2):
        if e in ((0, 0), (12, 12), (6, 6)):
            continue
        orb = frozenset({e, e[::-1], (12 - e[0], 12 - e[1]), (12 - e[1], 12 - e[0])})
        orbits.add(orb)
    reps = [tuple(b.eps) for b in ledger.generic]
    assert len(reps) == len(orbits)
    assert all(sum(r in o for r in reps) == 1 for o in orbits)


# --- Type 1 --------------------------------------------------------------------------------

def _eps(M, a):
    return 0 if 1 <= a % M < M / 2 else 1


@pytest.mark.parametrize("M,a,v", [(7, 2, 0), (7, 4, 1), (5, 3, 1), (9, 1, 0), (9, 8, 1)])
def test_eps_M(M, a, v):
    assert eps_M(M, a) == v


def test_eps_M_needs_unit():
    with pytest.raises(ValueError):
        eps_M(9, 3)


def test_R_matrix_small_cases():
    assert R_matrix(1, 1, 3) == [[0, 0]]
    assert R_matrix(1, 2, 5) == [[0, 0, 0, 0]]
    M = 13
    for u in units_mod(M):
        R = R_matrix(2, u, M)
        want = [[_eps(M, n * a) - _eps(M, n * u * pow(a, -1, M)) for a in units_mod(M)] for n in (1, 2)]
        assert R == want


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_construct_M_is_least(d):
    M = construct_M(d)
    assert M % 2 == 1 and 2 * M * d <= 65 * (2 * d) ** 6
    for u in units_mod(M):
        assert sympy.Matrix(R_matrix(d, u, M)).rank() == d
    for m in range(3, M, 2):
        assert any(sympy.Matrix(R_matrix(d, u, m)).rank() < d for u in units_mod(m))


@given(st.integers(1, 5), st.sampled_from([3, 5, 7, 9, 11, 13, 15, 17, 21, 25]), st.data())
def test_rank_two_ways(d, M, data):
    u = data.draw(st.sampled_from(units_mod(M)))
    R = R_matrix(d, u, M)
    r = rank_fraction_free(R)
    assert r == sympy.Matrix(R).rank() == rank(R)
    assert rank_mod(R, 1000003) <= r


def test_bfi_data_is_consistent():
    recs = load_bfi()
    assert sorted(recs) == list(range(2, 11))
    for d, r in recs.items():
        assert r.sgfip >= 11 and all(p >= 11 for p in r.sporadic)
        assert all(sympy.isprime(p) for p in r.sporadic + [r.sgfip])
        assert r.sporadic == sorted(r.sporadic)
    assert bfi_record(2).bad_formal_immersion() == 11 * 13 * 17 * 19 * 37
    with pytest.raises(IsoprimesError) as err:
        bfi_record(11)
    assert err.value.code == "UNSUPPORTED_DEGREE"


def test_bfi_cache_roundtrip(tmp_path):
    path = str(tmp_path / "bfi.json")
    recs = load_bfi()
    recs[2] = BFIRecord(2, 23, [37], {3: [29]})
    save_bfi(recs, path)
    back = load_bfi(path)
    assert back[2].agfi == {3: [29]} and back[2].agfi_product(3) == 29 and back[3] == recs[3]
    assert os.listdir(tmp_path) == ["bfi.json"]


def test_type_one_bound_d5():
    K = QuadraticField(5)
    res = type_one_bound(K)
    assert res.bad_formal_immersion == 11 * 13 * 17 * 19 * 37
    assert res.value % res.bad_formal_immersion == 0 and res.value % res.d_aux == 0
    # 61 divides D(Aux), which is why it reaches the weeding stage
    assert res.d_aux % 61 == 0
    fewer = type_one_bound(K, (3, 5, 7))
    assert fewer.d_aux % res.d_aux == 0


def test_type_one_bound_errors():
    K = QuadraticField(5)
    for aux, code in (((), "AUX_EMPTY"), ((3, 4), "EVEN_AUX")):
        with pytest.raises(IsoprimesError) as err:
            type_one_bound(K, aux)
        assert err.value.code == code


# --- Type 2 --------------------------------------------------------------------------------

@given(st.integers(2, 10), st.integers(2, 10 ** 12))
def test_grh_bound_is_least_integer_above_fixed_point(d, disc):
    def g(x):
        return (8 * d * math.log(12 * x) + 16 * math.log(disc) + 10 * d + 6) ** 4
    B = type2_grh_bound(d, disc)
    assert g(B) <= B and g(B - 1) > B - 1
    assert type2_grh_bound(d, disc + 1000) >= B


def _naive_cc(K, p):
    for q in primes_upto(p // 4 + 1):
        for f in set(K.residue_degrees(q)):
            N = q ** f
            if f % 2 == 0 or 4 * N >= p or (N * N + N + 1) % p == 0:
                continue
            split = (-p) % 8 == 1 if q == 2 else pow((-p) % q, (q - 1) // 2, q) == 1
            if split:
                return False
    return True


def test_scan_matches_naive_condition_cc(cubic):
    for K in (QuadraticField(5), QuadraticField(-23), cubic):
        cap = 20000
        scan = type2_scan(K, cap=cap)
        naive = [p for p in primes_upto(cap) if p >= SCAN_START and p % 4 == 3 and _naive_cc(K, p)]
        assert scan.survivors == naive
        table = cc_table(K, cap // 4 + 1)
        assert all(satisfies_condition_cc(K, p, table) for p in scan.survivors)


def test_scan_caveats_and_semistable():
    K = QuadraticField(5)
    res = type2_scan(K, cap=1000)
    assert "CAP_BELOW_GRH_BOUND" in res.caveats and res.complete
    semi = type2_scan(K, cap=1000, semistable=True)
    assert semi.skipped and semi.survivors == [] and "SEMISTABLE_NO_TYPE2" in semi.caveats


def test_scan_resume_ignores_foreign_checkpoint(tmp_path):
    K = QuadraticField(5)
    ck = str(tmp_path / "ck.json")
    type2_scan(K, cap=300000, resume=ck, field_id="other", max_blocks=1)
    part = type2_scan(K, cap=300000, resume=ck, max_blocks=1)
    assert not part.complete and "SCAN_INCOMPLETE" in part.caveats
    full = type2_scan(K, cap=300000, resume=ck)
    assert full.complete and full.survivors == type2_scan(K, cap=300000).survivors


def test_scan_d5_survivors_below_one_million():
    # frozen against the naive check above, run once at 10^6
    assert type2_scan(QuadraticField(5)).survivors == [19, 23, 31, 43, 47, 67, 163]
