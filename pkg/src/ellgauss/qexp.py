"""q-expansions of x(w,q), y(w,q), eta, Delta, j, m_l, p1, a_l and their w_l images.

Normalization: x = wp/(2 pi i)^2 and y = (1/2) w dx/dw on the model
y^2 = x^3 - (E4/48) x + E6/864, whose discriminant -16(4A^3 + 27B^2) is Delta(q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .rings import QQ
from .series import LaurentSeries, substitute_q_power, series_pow, series_inv, PrecisionError


# ---------------------------------------------------------------------------
# small helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _check_ell(ell: int):
    if ell <= 3 or not is_prime(ell):
        raise ValueError(f"l must be a prime > 3, got {ell}")


def divisor_sigma_table(k: int, nmax: int) -> list[int]:
    """sigma_k(i) for 0 <= i < nmax (sigma_k(0) = 0)."""
    sig = [0] * nmax
    for d in range(1, nmax):
        dk = d ** k
        for m in range(d, nmax, d):
            sig[m] += dk
    return sig


def ell_params(ell: int) -> tuple[int, int]:
    """(s, v) for m_l: s = 12/gcd(12, l-1), v = (l-1)/gcd(l-1, 12)."""
    g = gcd(12, ell - 1)
    return 12 // g, (ell - 1) // g


# ---------------------------------------------------------------------------
# eta, Delta, Eisenstein series, j


@lru_cache(maxsize=64)
def _euler_product_coeffs(prec: int) -> tuple[int, ...]:
    out = [0] * prec
    k = 0
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 >= prec:
            break
        sign = -1 if k % 2 else 1
        out[e1] += sign
        if k:
            e2 = k * (3 * k + 1) // 2
            if e2 < prec:
                out[e2] += sign
        k += 1
    return tuple(out)


def euler_product(prec: int) -> LaurentSeries:
    """prod_{n>=1} (1 - q^n) to O(q^prec)."""
    return LaurentSeries(QQ, list(_euler_product_coeffs(prec)), 0, prec)


def eta_series(prec: int) -> LaurentSeries:
    """eta = q^(1/24) prod (1 - q^n) as a series in q^(1/24), valid to O(q^prec)."""
    base = _euler_product_coeffs(prec)
    out = {}
    for e, c in enumerate(base):
        if c:
            out[1 + 24 * e] = c
    return LaurentSeries.from_dict(out, QQ, 1 + 24 * prec, denom_exp=24)


def delta_series(prec: int) -> LaurentSeries:
    """Delta = q prod (1 - q^n)^24 to O(q^prec)."""
    if prec < 1:
        return LaurentSeries.zero(QQ, prec)
    return series_pow(euler_product(prec - 1), 24).shift(1)


def eisenstein_series(k: int, prec: int) -> LaurentSeries:
    """Normalized E_k for k in {2, 4, 6}."""
    factor = {2: -24, 4: 240, 6: -504}[k]
    sig = divisor_sigma_table(k - 1, prec)
    coeffs = [1] + [factor * sig[i] for i in range(1, prec)]
    return LaurentSeries(QQ, coeffs[:prec], 0, prec)


def j_series(prec: int) -> LaurentSeries:
    """j = E4^3 / Delta to O(q^prec); ord = -1."""
    e4 = eisenstein_series(4, prec + 2)
    d = delta_series(prec + 2)
    return (series_pow(e4, 3) * series_inv(d)).truncate(prec)


# ---------------------------------------------------------------------------
# m_l


def m_ell_series(ell: int, prec: int) -> LaurentSeries:
    """m_l = l^s (eta(q^l)/eta(q))^(2s) to O(q^prec); ord = v, lc = l^s."""
    _check_ell(ell)
    s, v = ell_params(ell)
    rel = max(prec - v, 1)
    p = euler_product(rel)
    ratio = substitute_q_power(p, ell).truncate(rel) * series_inv(p)
    return series_pow(ratio, 2 * s).scale(ell ** s).shift(v)


def m_ell_star_series(ell: int, prec: int) -> LaurentSeries:
    """l^s / m_l = (eta(q)/eta(q^l))^(2s); ord = -v, integral."""
    _check_ell(ell)
    s, v = ell_params(ell)
    rel = prec + v
    p = euler_product(rel)
    ratio = p * series_inv(substitute_q_power(p, ell).truncate(rel))
    return series_pow(ratio, 2 * s).shift(-v).truncate(prec)


# ---------------------------------------------------------------------------
# x and y evaluated at w = zeta_l


@dataclass(frozen=True)
class WCoeffTable:
    """Coefficients a[i][k] of q^i zeta_l^k of V(zeta_l, q) for 0 <= i < prec.

    Row 0 holds the constant term as a polynomial in zeta_l.  With full=False
    the w-independent part (1/12 and the -2m q^(nm) terms) is dropped.
    """

    ell: int
    kind: str
    prec: int
    rows: tuple
    full: bool = False


def _cyclic_mul(a: list, b: list, ell: int) -> list:
    out = [0] * ell
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[(i + j) % ell] += x * y
    return out


def _constant_row(ell: int, kind: str) -> list:
    # 1/(1 - zeta) = -(1/l) sum_k k zeta^k for zeta^l = 1, zeta != 1
    inv1m = [Fraction(-k, ell) for k in range(ell)]
    sq = _cyclic_mul(inv1m, inv1m, ell)
    if kind == "x":
        # w/(1-w)^2
        return [sq[(k - 1) % ell] for k in range(ell)]
    cube = _cyclic_mul(sq, inv1m, ell)
    # (w + w^2) / (2 (1-w)^3)
    num = [0] * ell
    num[1 % ell] += Fraction(1, 2)
    num[2 % ell] += Fraction(1, 2)
    return _cyclic_mul(num, cube, ell)


def xy_coefficient_table(ell: int, kind: str, prec: int, full: bool = False) -> WCoeffTable:
    _check_ell(ell)
    if kind not in ("x", "y"):
        raise ValueError("kind must be 'x' or 'y'")
    rows = [[0] * ell for _ in range(prec)]
    if prec:
        rows[0] = _constant_row(ell, kind)
        if full and kind == "x":
            rows[0][0] += Fraction(1, 12)
    for m in range(1, prec):
        mp, mn = m % ell, (-m) % ell
        for i in range(m, prec, m):
            row = rows[i]
            if kind == "x":
                row[mp] += m
                row[mn] += m
                if full:
                    row[0] -= 2 * m
            else:
                h = Fraction(m * m, 2)
                row[mp] += h
                row[mn] -= h
    rows = tuple(tuple(int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in r) for r in rows)
    return WCoeffTable(ell, kind, prec, rows, full)


def p1_from_table(ell: int, prec: int) -> LaurentSeries:
    """Sum of the full x(zeta, q) over nontrivial l-th roots of unity, from the table."""
    tab = xy_coefficient_table(ell, "x", prec, full=True)
    # sum_{zeta != 1} zeta^k = l-1 if k = 0 else -1
    coeffs = [(ell - 1) * row[0] - sum(row[1:]) for row in tab.rows]
    return LaurentSeries(QQ, coeffs, 0, prec)


def p1_series(ell: int, prec: int) -> LaurentSeries:
    """p1 = (l/12) (E2(q) - l E2(q^l)), the sum of x over the nonzero l-torsion of the Tate curve."""
    _check_ell(ell)
    e2 = eisenstein_series(2, prec)
    return (e2 - substitute_q_power(e2, ell).truncate(prec).scale(ell)).scale(Fraction(ell, 12))


# ---------------------------------------------------------------------------
# a_l via a Hecke operator


def hecke_eta_params(ell: int) -> tuple[int, int]:
    """(s, z) with eta(tau) eta(l tau) = q^(z/s) prod(1-q^n)(1-q^(l n))."""
    g = gcd(24, ell + 1)
    return 24 // g, (ell + 1) // g


def a_ell_series(ell: int, r: int, prec: int) -> LaurentSeries:
    """a_l = T_r(eta(tau) eta(l tau)) / (eta(tau) eta(l tau)) to O(q^prec)."""
    _check_ell(ell)
    s, z = hecke_eta_params(ell)
    # f = sum_k c_k q^((k s + z)/s); work in q^(1/s) units: exponent E = k s + z
    # the quotient has order >= -(r - 1) z / s, so keep enough relative precision
    lo = -((r - 1) * z // s) - 1
    rel = prec - lo + 2
    base = euler_product(rel) * substitute_q_power(euler_product(rel), ell).truncate(rel)
    c = base.coeffs + [0] * (rel - len(base.coeffs))
    kmax = r * (rel + 3)
    big = euler_product(kmax) * substitute_q_power(euler_product(kmax), ell).truncate(kmax)
    cbig = big.coeffs + [0] * (kmax - len(big.coeffs))

    def coeff(E):
        # coefficient of q^(E/s) in f
        if E < z or (E - z) % s:
            return 0
        k = (E - z) // s
        if k >= len(cbig):
            raise PrecisionError("Hecke image needs more terms")
        return cbig[k]

    # T_r f coefficient at E: c(r E) + c(E / r)
    emax = z + s * (rel - 1)
    tf = {}
    for E in range(1, emax + 1):
        val = coeff(r * E)
        if E % r == 0:
            val += coeff(E // r)
        if val:
            tf[E] = val
    tf_series = LaurentSeries.from_dict(tf, QQ, emax + 1, denom_exp=s)
    f_series = LaurentSeries.from_dict({z + s * k: v for k, v in enumerate(c) if v}, QQ, z + s * rel, denom_exp=s)
    quot = tf_series * series_inv(f_series)
    out = {}
    for E, v in quot.items():
        if E % s:
            raise ArithmeticError("Hecke quotient has non-integral exponent")
        out[E // s] = v
    qprec = quot.prec // s
    if qprec < prec:
        raise PrecisionError("insufficient precision for a_l")
    return LaurentSeries.from_dict(out, QQ, prec)


# ---------------------------------------------------------------------------
# images under the Fricke involution, automorphy factors dropped


def x_star_reduced(ell: int, t: int, prec: int) -> LaurentSeries:
    """x(q^t, q^l) without its w-independent part."""
    coeffs = [0] * prec
    for N in range(1, prec):
        if N % ell not in (t % ell, (-t) % ell):
            continue
        for M in range(N, prec, N):
            coeffs[M] += M // N
    return LaurentSeries(QQ, coeffs, 0, prec)


def y_star_reduced(ell: int, t: int, prec: int) -> LaurentSeries:
    """y(q^t, q^l) = (1/2) sum_{N = +-t mod l} +-(M/N)^2 q^M."""
    coeffs = [0] * prec
    for N in range(1, prec):
        r = N % ell
        if r == t % ell:
            sign = 1
        elif r == (-t) % ell:
            sign = -1
        else:
            continue
        for M in range(N, prec, N):
            coeffs[M] += Fraction(sign * (M // N) ** 2, 2)
    return LaurentSeries(QQ, coeffs, 0, prec)


def p1_star_series(ell: int, prec: int) -> LaurentSeries:
    """sum_t x(q^t, q^l) including the w-independent part."""
    coeffs = [Fraction(ell - 1, 12)] + [0] * (prec - 1)
    for N in range(1, prec):
        if N % ell == 0:
            continue
        for M in range(N, prec, N):
            coeffs[M] += 2 * (M // N)
    for n in range(1, prec):
        for m in range(1, prec):
            e = ell * n * m
            if e >= prec:
                break
            coeffs[e] -= 2 * (ell - 1) * m
    return LaurentSeries(QQ, coeffs[:prec], 0, prec)


STAR_KINDS = ("x", "y", "p1", "delta", "j", "m")


def star_image(kind: str, ell: int, prec: int, t: int | None = None) -> LaurentSeries:
    """w_l image of a constituent with automorphy factors dropped.

    Only weight-0 combinations (tau*, J*) of these are meaningful.
    """
    _check_ell(ell)
    if kind == "x":
        return x_star_reduced(ell, t, prec)
    if kind == "y":
        return y_star_reduced(ell, t, prec)
    if kind == "p1":
        return p1_star_series(ell, prec)
    if kind == "delta":
        return substitute_q_power(delta_series(-(-prec // ell) + 1), ell).truncate(prec)
    if kind == "j":
        return substitute_q_power(j_series(-(-prec // ell) + 1), ell).truncate(prec)
    if kind == "m":
        return m_ell_star_series(ell, prec)
    raise ValueError(f"unsupported kind {kind!r}; expected one of {STAR_KINDS}")
