"""Acceptance criteria A1-A8; each test records one pass/fail line for the terminal summary."""

import math
import random

from conftest import ACCEPTANCE, get_table, get_tables
from ellgauss.build import table_order_structure, verify_table
from ellgauss.counter import (
    CurveContext,
    CurveError,
    DegenerateRoot,
    InsufficientCoverage,
    count_points,
    is_elkies,
    naive_count,
    naive_trace,
    tables_for,
    trace_mod_ell,
)
from ellgauss.fp import legendre
from ellgauss.gauss import (
    CharSpec,
    OpCounter,
    cyclotomic_gauss_sum,
    descended_gauss_product,
    naive_gauss_product,
    prime_power_parts,
    tau_exponents,
    tau_multiplier,
    tau_series,
)
from ellgauss.modpoly import order_bound_check
from ellgauss.qexp import ell_params, is_prime, m_ell_series
from ellgauss.rings import CycElem, tensor_descend
from ellgauss.tables import save_table

M_BASIS_ELLS = [5, 7, 11, 13, 17, 19, 23]
A_BASIS_ELLS = [29, 31]
STAR_MAX_ELL = 13


def record(key, ok, detail):
    line = f"{key} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE[key] = line
    print(line)
    assert ok, line


def divisors(m):
    return [d for d in range(2, m + 1) if m % d == 0]


def random_curves(count, lo, hi, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = rng.randrange(lo, hi)
        if not is_prime(p):
            continue
        try:
            E = CurveContext(p, rng.randrange(1, p), rng.randrange(1, p))
        except CurveError:
            continue
        if E.j in (0, 1728 % p) or naive_trace(E) % p == 0:
            continue
        out.append(E)
    return out


def test_a1_integrality():
    pairs = [(5, 2), (5, 4), (7, 2), (7, 3), (7, 6), (11, 2), (11, 5), (13, 3), (13, 4)]
    bad = []
    for ell, n in pairs:
        s = tau_series(CharSpec(ell, n), 25, check=False).series
        c = tau_multiplier(ell, n)
        if not all(x.scale(c).is_integral() for x in s.coeffs):
            bad.append((ell, n))
    record("A1", not bad, f"c*tau integral for {len(pairs) - len(bad)}/{len(pairs)} pairs to q^25")


def test_a2_descent():
    cases = [(ell, n) for ell in (5, 7, 11) for n in divisors(ell - 1)]
    bad = [(ell, n) for ell, n in cases
           if not descended_gauss_product(CharSpec(ell, n), 10).equals_to_precision(
               naive_gauss_product(CharSpec(ell, n), 10))]
    record("A2", not bad, f"descended product equals naive double sum for {len(cases)} (l, n) to q^10")


def test_a3_reconstruction():
    failures = []
    count = 0
    for ell in M_BASIS_ELLS + A_BASIS_ELLS:
        for n in prime_power_parts(ell - 1):
            t = get_table(ell, n)
            assert t.basis == ("a" if ell in A_BASIS_ELLS else "m")
            for chk in verify_table(t, star=ell <= STAR_MAX_ELL):
                count += 1
                if not chk.ok:
                    failures.append(f"l={ell} n={n} {chk.name}: {chk.detail}")
    record("A3", not failures, f"{count} residual checks exact zero (m basis l<=23, a basis l=29,31)"
           + ("; " + "; ".join(failures) if failures else ""))


def test_a4_gauss_identity():
    cases = [(ell, n) for ell in range(5, 32) if is_prime(ell) for n in divisors(ell - 1)]
    bad = []
    for ell, n in cases:
        spec = CharSpec(ell, n)
        prod = tensor_descend(cyclotomic_gauss_sum(spec, 1) * cyclotomic_gauss_sum(spec, -1))
        sign = -1 if 2 * spec.chi_minus_one() == n else 1
        if prod != CycElem.from_rational(n, sign * ell):
            bad.append((ell, n))
    record("A4", not bad, f"G_chi G_chi^-1 = chi(-1) l for {len(cases)} (l, n), l <= 31")


def test_a5_end_to_end_trace():
    tables = get_tables([5, 7, 11, 13])
    curves = random_curves(60, 50, 2000, 2024)
    checked = gauss_only = jacobi = skipped = 0
    wrong = []
    for E in curves:
        t = naive_trace(E)
        for ell in (5, 7, 11, 13):
            leg = legendre(t * t - 4 * E.p, ell)
            try:
                w = trace_mod_ell(E, ell, tables)
            except DegenerateRoot:
                # only colliding roots of the modular polynomial may be skipped
                if leg == 1 or not is_elkies(E, ell, tables_for(tables, ell)[0].m_poly).double_root:
                    wrong.append((E.p, E.a, E.b, ell, "degenerate"))
                skipped += 1
                continue
            if w is None:
                if leg == 1:
                    wrong.append((E.p, E.a, E.b, ell, "missed Elkies"))
                continue
            checked += 1
            for n, _ in w.indices:
                if E.p % n == 1:
                    gauss_only += 1
                else:
                    jacobi += 1
            if w.t != t % ell:
                wrong.append((E.p, E.a, E.b, ell, w.t, t % ell))
    ok = not wrong and len(curves) >= 50 and gauss_only > 0 and jacobi > 0
    record("A5", ok, f"{len(curves)} curves, {checked} Elkies traces correct, {gauss_only} Gauss-only "
           f"and {jacobi} Jacobi evaluations, {skipped} colliding-root skips"
           + (f"; wrong: {wrong[:5]}" if wrong else ""))


def test_a6_full_count():
    tables = get_tables([5, 7, 11, 13, 17, 19])
    ells = [5, 7, 11, 13, 17, 19]
    covered = uncovered = 0
    wrong = []
    for E in random_curves(60, 50, 1500, 7):
        try:
            res = count_points(E, ells, tables)
        except InsufficientCoverage:
            uncovered += 1
            continue
        covered += 1
        ref = naive_count(E)
        if res.count != ref:
            wrong.append((E.p, E.a, E.b, res.count, ref))
    ok = not wrong and covered >= 20
    record("A6", ok, f"{covered} covered curves counted exactly ({uncovered} below 4 sqrt(p) coverage)"
           + (f"; wrong: {wrong[:5]}" if wrong else ""))


def test_a7_orders_and_degrees():
    bad = []
    for ell in M_BASIS_ELLS + A_BASIS_ELLS:
        s, v = ell_params(ell)
        m = m_ell_series(ell, v + 3)
        t = get_table(ell, prime_power_parts(ell - 1)[0])
        if m.ord != v or m.lc() != ell ** s or t.m_poly.deg_y != v or t.m_poly.deg_x != ell + 1:
            bad.append((ell, "m"))
        if not table_order_structure(t):
            bad.append((ell, "monomial window"))
        if t.basis == "a":
            rep = order_bound_check(t.a_poly, ell, t.v_a)
            if not rep.ok or t.a_poly.deg_y != 2 * t.v_a:
                bad.append((ell, "A", rep))
    record("A7", not bad, f"orders, leading coefficients, degrees and A_l derivative bounds for "
           f"{len(M_BASIS_ELLS + A_BASIS_ELLS)} primes" + (f"; bad: {bad}" if bad else ""))


def test_a8_cost_growth():
    # soft criterion: report only
    rows = []
    for ell, n in [(11, 5), (31, 5)]:
        _, v = ell_params(ell)
        _, e = tau_exponents(n)
        prec = ell * (v + e)
        ctr = OpCounter()
        descended_gauss_product(CharSpec(ell, n), prec, ctr)
        rows.append((ell, prec, ctr["coeff_ops"]))
    (l0, p0, c0), (l1, p1, c1) = rows
    predicted = (l1 * p1) / (l0 * p0)
    measured = c1 / c0
    ops_ok = predicted / 2 <= measured <= predicted * 2
    sizes = []
    for ell, n in [(11, 5), (23, 11)]:
        t = get_table(ell, n)
        _, v = ell_params(ell)
        _, e = tau_exponents(n)
        sizes.append((len(save_table(t)), (v + e) * n * ell ** 2))
    (b0, m0), (b1, m1) = sizes
    size_ratio = (b1 / b0) / (m1 / m0)
    size_ok = 0.25 <= size_ratio <= 4
    line = (f"A8 {'PASS' if ops_ok and size_ok else 'SOFT-FAIL'} (report only): op ratio {measured:.2f} vs "
            f"predicted {predicted:.2f}; table bytes {b0} -> {b1}, ratio / model = {size_ratio:.2f}")
    ACCEPTANCE["A8"] = line
    print(line)
    assert math.isfinite(size_ratio)
