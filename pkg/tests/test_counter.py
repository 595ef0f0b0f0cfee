import math
import random

import pytest

from ellgauss.counter import (
    CurveContext,
    CurveError,
    DegenerateRoot,
    InsufficientCoverage,
    count_points,
    crt,
    eigenvalue_index,
    evaluate_table,
    fp_ring,
    is_elkies,
    naive_count,
    naive_count_params,
    naive_trace,
    root_data,
    tables_for,
    trace_mod_ell,
)
from ellgauss.fp import legendre
from ellgauss.gauss import CharSpec, prime_power_parts
from ellgauss.oracles import eigenvalues, kernel_gauss_power, kernel_p1, kernel_point
from ellgauss.qexp import is_prime
from ellgauss.rings import euler_phi


def random_curves(count, lo, hi, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = rng.randrange(lo, hi)
        if not is_prime(p):
            continue
        try:
            out.append(CurveContext(p, rng.randrange(1, p), rng.randrange(1, p)))
        except CurveError:
            continue
    return out


def test_naive_small():
    # y^2 = x^3 + x over F_5: (0,0), (2,0), (3,0) and infinity
    assert naive_count_params(5, 1, 0) == 4
    assert naive_count(CurveContext(101, 2, 3)) == 96


def test_curve_validation():
    with pytest.raises(CurveError):
        CurveContext(100, 1, 1)
    with pytest.raises(CurveError):
        CurveContext(101, 0, 5)
    with pytest.raises(CurveError):
        CurveContext(101, 3, 0)
    with pytest.raises(CurveError):
        CurveContext(101, 98, 2)  # 4 (-3)^3 + 27 * 2^2 = 0


def test_curve_invariants():
    E = CurveContext(1009, 3, 7)
    assert E.disc == (4 * 27 + 27 * 49) % 1009
    assert E.j == 1728 * 4 * 27 * pow(E.disc, -1, 1009) % 1009


def test_crt():
    assert crt([(2, 3), (3, 5), (2, 7)]) == (23, 105)
    assert crt([]) == (0, 1)


@pytest.mark.parametrize("ell", [5, 7, 11, 13])
def test_elkies_classification(small_tables, ell):
    poly = small_tables[(ell, tables_for(small_tables, ell)[0].n)].m_poly
    for E in random_curves(15, 50, 400, ell):
        t = naive_trace(E)
        leg = legendre(t * t - 4 * E.p, ell)
        info = is_elkies(E, ell, poly)
        if leg == 1:
            assert info.is_elkies and not info.double_root
        elif leg == 0:
            assert info.is_elkies
        else:
            # a root here can only be a collision of two conjugate values mod p
            assert not info.is_elkies or info.double_root


def test_colliding_double_root_is_skipped(small_tables):
    E = CurveContext(113, 25, 9)
    t = naive_trace(E)
    assert legendre(t * t - 4 * E.p, 11) == -1
    info = is_elkies(E, 11, small_tables[(11, 2)].m_poly)
    assert info.roots == [96] and info.double_root
    with pytest.raises(DegenerateRoot):
        trace_mod_ell(E, 11, small_tables)


# p = 1 mod n exercises the Gauss-only path, otherwise the Jacobi path
ORACLE_CASES = [(101, 5, 4), (103, 5, 4), (101, 7, 3), (107, 7, 3)]
ORACLE_COEFFS = [(2, 3), (5, 17), (7, 3), (11, 13), (13, 9)]


def test_torsion_oracle(small_tables):
    checked = 0
    for (p, ell, n), (a, b) in [(c, ab) for c in ORACLE_CASES for ab in ORACLE_COEFFS]:
        try:
            E = CurveContext(p, a, b)
        except CurveError:
            continue
        t = naive_trace(E)
        lams = eigenvalues(t, p, ell)
        if len(lams) != 2:
            continue
        tab = small_tables[(ell, n)]
        base = tables_for(small_tables, ell)[0]
        info = is_elkies(E, ell, base.m_poly)
        p1s = {lam: kernel_p1(kp) for lam, kp in
               ((lam, kernel_point(p, a, b, t, ell, lam, seed=1)) for lam in lams)}
        ring = fp_ring(p, n)
        spec = CharSpec(ell, n, tab.c)
        for root in info.roots:
            rd = root_data(E, base, root)
            (lam,) = [lam for lam, v in p1s.items() if v == rd.p1]
            kp = kernel_point(p, a, b, t, ell, lam, seed=1)
            gn = evaluate_table(E, tab, tab.tau, rd, ring)
            assert list(gn.coeffs) == kernel_gauss_power(kp, spec, ring)
            for k, ent in tab.jacobi.items():
                jv = evaluate_table(E, tab, ent, rd, ring)
                assert list(jv.coeffs) == kernel_gauss_power(kp, spec, ring, twist=k)
            assert eigenvalue_index(E, tab, rd, ring) == spec.index[lam] % n
            checked += 1
    assert checked >= 4


def test_trace_witness(small_tables):
    hits = 0
    for E in random_curves(30, 50, 600, 7):
        t = naive_trace(E)
        for ell in (5, 7, 11, 13):
            try:
                w = trace_mod_ell(E, ell, small_tables)
            except DegenerateRoot:
                assert is_elkies(E, ell, tables_for(small_tables, ell)[0].m_poly).double_root
                continue
            if w is None:
                continue
            hits += 1
            assert w.t == t % ell
            # the other eigenvalue is p / lambda
            assert (w.lam * ((t - w.lam) % ell) - E.p) % ell == 0
            assert w.max_degree <= max(euler_phi(n) for n in prime_power_parts(ell - 1))
            assert w.consistent(tables_for(small_tables, ell)[0].c)
    assert hits > 20


def test_count_p101_needs_large_ell(count_tables, a_basis_tables):
    E = CurveContext(101, 2, 3)
    with pytest.raises(InsufficientCoverage):
        count_points(E, [5, 7, 11, 13, 17, 19], count_tables)
    tables = {**count_tables, **a_basis_tables}
    res = count_points(E, [5, 7, 11, 13, 17, 19, 29, 31], tables)
    assert res.count == 96 and res.count == naive_count(E)
    assert {w.ell for w in res.witnesses} == {13, 29, 31}


def test_count_within_hasse(count_tables):
    E = CurveContext(1009, 3, 7)
    res = count_points(E, [5, 7, 11, 13, 17, 19], count_tables)
    assert res.count == naive_count(E) == 952
    assert abs(res.t) <= 2 * math.sqrt(E.p)


def test_p101_small_ell(small_tables):
    seen = 0
    for a, b in [(2, 3), (1, 1), (3, 5), (7, 11), (10, 20), (4, 9)]:
        E = CurveContext(101, a, b)
        t = naive_trace(E)
        for ell in (5, 7):
            info = is_elkies(E, ell, tables_for(small_tables, ell)[0].m_poly)
            assert info.is_elkies == (legendre(t * t - 4 * E.p, ell) >= 0)
            w = trace_mod_ell(E, ell, small_tables)
            if w is not None:
                seen += 1
                assert w.t == t % ell
    assert seen >= 3
