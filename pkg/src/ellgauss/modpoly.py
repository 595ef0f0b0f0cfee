"""Modular polynomials M_l (for m_l) and A_l (for a_l) from q-expansions.

The roots of the polynomial in X over C(j(tau)) are f(tau) and f*((tau+k)/l)
for k = 0..l-1.  Power sums of the l twisted roots only need the part of
f*(u)^e with exponent divisible by l (u = q^(1/l)), so no zeta_l arithmetic is
required.  Newton's identities give the elementary symmetric functions, each of
which is a polynomial in j found by leading-order elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable

from .qexp import (
    a_ell_series,
    ell_params,
    hecke_eta_params,
    is_prime,
    j_series,
    m_ell_series,
    m_ell_star_series,
    _check_ell,
)
from .rings import QQ, CycElem, CyclotomicField, euler_phi
from .series import LaurentSeries, PrecisionError, extract_progression, series_mul


class ModularPolynomialError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# bivariate polynomials


class BivariatePoly:
    """Sparse polynomial sum c[i,k] X^i Y^k; Y stands for j."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {}
        for key, c in (coeffs or {}).items():
            if not _is_zero(c):
                self.coeffs[(int(key[0]), int(key[1]))] = c

    def __eq__(self, other):
        return isinstance(other, BivariatePoly) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"BivariatePoly({len(self.coeffs)} terms, deg_X={self.deg_x}, deg_Y={self.deg_y})"

    def __getitem__(self, key):
        return self.coeffs.get(key, 0)

    @property
    def deg_x(self) -> int:
        return max((i for i, _ in self.coeffs), default=-1)

    @property
    def deg_y(self) -> int:
        return max((k for _, k in self.coeffs), default=-1)

    @property
    def min_x(self) -> int:
        return min((i for i, _ in self.coeffs), default=0)

    def terms(self):
        return sorted(self.coeffs.items())

    def diff_x(self) -> "BivariatePoly":
        return BivariatePoly({(i - 1, k): c * i for (i, k), c in self.coeffs.items() if i})

    def diff_y(self) -> "BivariatePoly":
        return BivariatePoly({(i, k - 1): c * k for (i, k), c in self.coeffs.items() if k})

    def map_coeffs(self, fn: Callable) -> "BivariatePoly":
        return BivariatePoly({key: fn(c) for key, c in self.coeffs.items()})

    def shift_x(self, k: int) -> "BivariatePoly":
        return BivariatePoly({(i + k, j): c for (i, j), c in self.coeffs.items()})

    # --- evaluation
    def evaluate_series(self, x: LaurentSeries, y: LaurentSeries, x_powers: dict | None = None,
                        y_powers: dict | None = None, ring=None) -> LaurentSeries:
        """Evaluate at series x, y; negative X-exponents use x^-1."""
        if not self.coeffs:
            return LaurentSeries.zero(ring or x.ring, _min_prec(x, y))
        xp = x_powers if x_powers is not None else {}
        yp = y_powers if y_powers is not None else {}
        if x.ring == QQ and y.ring == QQ:
            return self._evaluate_by_coordinates(x, y, xp, yp)
        return self._evaluate_direct(x, y, xp, yp)

    def _evaluate_by_coordinates(self, x, y, xp, yp) -> LaurentSeries:
        """Rational x, y: one evaluation with integer coefficients per coordinate of Q(zeta_n)."""
        n = next((c.n for c in self.coeffs.values() if isinstance(c, CycElem)), None)
        d = euler_phi(n) if n else 1
        den = 1
        for c in self.coeffs.values():
            for t in (c.coeffs if isinstance(c, CycElem) else (c,)):
                den = lcm(den, Fraction(t).denominator)
        parts = []
        for t in range(d):
            sub = {}
            for key, c in self.coeffs.items():
                val = c.coeffs[t] if isinstance(c, CycElem) else (c if t == 0 else 0)
                if val:
                    sub[key] = int(val * den)
            if sub:
                parts.append(BivariatePoly(sub)._evaluate_direct(x, y, xp, yp))
            else:
                parts.append(None)
        if n is None:
            return parts[0].scale(Fraction(1, den)) if den != 1 else parts[0]
        live = [q for q in parts if q is not None]
        prec = _min_prec(*live)
        lo = min(q.ord for q in live)
        hi = max(q.ord + len(q.coeffs) for q in live)
        if prec is not None:
            hi = min(hi, prec)
        coeffs = []
        for e in range(lo, hi):
            vals = [Fraction(q[e], den) if q is not None and q.ord <= e < q.ord + len(q.coeffs) else 0
                    for q in parts]
            coeffs.append(CycElem(n, vals))
        return LaurentSeries(CyclotomicField(n), coeffs, lo, prec, x.denom_exp)

    def _evaluate_direct(self, x, y, xp, yp) -> LaurentSeries:
        by_k: dict[int, dict[int, object]] = {}
        for (i, k), c in self.coeffs.items():
            by_k.setdefault(k, {})[i] = c
        total = None
        for k, row in by_k.items():
            inner = None
            for i, c in row.items():
                term = _power(x, i, xp).scale(c) if not isinstance(c, CycElem) else _scale_to(_power(x, i, xp), c)
                inner = term if inner is None else inner + term
            part = series_mul(inner, _power(y, k, yp)) if k else inner
            total = part if total is None else total + part
        return total

    def evaluate_mod_p(self, x: int, y: int, p: int) -> int:
        total = 0
        for (i, k), c in self.coeffs.items():
            total += _rat_mod(c, p) * pow(x, i, p) * pow(y, k, p)
        return total % p

    def specialize_y_mod_p(self, y: int, p: int) -> list[int]:
        """Coefficients (low to high) of the univariate polynomial in X over F_p."""
        out = [0] * (self.deg_x + 1)
        for (i, k), c in self.coeffs.items():
            out[i] = (out[i] + _rat_mod(c, p) * pow(y, k, p)) % p
        while out and out[-1] == 0:
            out.pop()
        return out


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, CycElem) else c == 0


def _rat_mod(c, p: int) -> int:
    if isinstance(c, Fraction):
        if c.denominator % p == 0:
            raise ZeroDivisionError(f"denominator divisible by p={p}")
        return c.numerator * pow(c.denominator, -1, p) % p
    return c % p


def _min_prec(*ss):
    ps = [s.prec for s in ss if s.prec is not None]
    return min(ps) if ps else None


def _power(x: LaurentSeries, i: int, cache: dict) -> LaurentSeries:
    if i in cache:
        return cache[i]
    if i == 0:
        val = LaurentSeries.constant(1, x.ring, None, x.denom_exp)
    elif i == 1:
        val = x
    elif i == -1:
        val = x.inv()
    elif i > 0:
        val = series_mul(_power(x, i - 1, cache), x)
    else:
        val = series_mul(_power(x, i + 1, cache), _power(x, -1, cache))
    cache[i] = val
    return val


def _scale_to(s: LaurentSeries, c: CycElem) -> LaurentSeries:
    ring = CyclotomicField(c.n)
    if s.ring != ring:
        s = s.change_ring(ring)
    return s.scale(c)


# ---------------------------------------------------------------------------
# Hecke prime


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def select_hecke_prime(ell: int, bound: int = 10 ** 5) -> int:
    """Smallest odd prime r != l with s | r-1, (r|l) = 1 and (l|r) = 1."""
    _check_ell(ell)
    s, _ = hecke_eta_params(ell)
    for r in range(3, bound, 2):
        if r == ell or not is_prime(r):
            continue
        if (r - 1) % s == 0 and legendre(r, ell) == 1 and legendre(ell, r) == 1:
            return r
    raise ModularPolynomialError(f"no Hecke prime below {bound} for l={ell}")


def a_ell_order(ell: int) -> int:
    """v_a = -ord(a_l), or 0 when a_l is constant (possibly the zero constant)."""
    r = select_hecke_prime(ell)
    a = a_ell_series(ell, r, 2)
    if a.is_zero():
        return 0
    return max(0, -a.ord)


# ---------------------------------------------------------------------------
# conjugates and the minimal polynomial


@dataclass
class Conjugates:
    """Roots of the modular polynomial over C(j): f(q) and g(zeta_l^k u), u = q^(1/l).

    ``twisted`` is g as a series in u; power sums are available to O(q^prec).
    """

    kind: str
    ell: int
    base: LaurentSeries
    twisted: LaurentSeries
    order_bound: int  # v or v_a
    prec: int

    def expand(self) -> list[LaurentSeries]:
        """The l+1 conjugates as series in q^(1/l) over Q(zeta_l)."""
        K = CyclotomicField(self.ell)
        out = []
        tw = self.twisted
        for k in range(self.ell):
            coeffs = [CycElem.zeta(self.ell, k * (tw.ord + i)) * c for i, c in enumerate(tw.coeffs)]
            out.append(LaurentSeries(K, coeffs, tw.ord, tw.prec, self.ell))
        out.append(self.base.change_ring(K).rescale(self.ell))
        return out

    def power_sums(self, count: int) -> list[LaurentSeries]:
        """Power sums p_1..p_count of all l+1 roots as q-series to O(q^prec)."""
        ell = self.ell
        sums = []
        fpow = None
        gpow = None
        for e in range(1, count + 1):
            fpow = self.base if fpow is None else series_mul(fpow, self.base)
            gpow = self.twisted if gpow is None else series_mul(gpow, self.twisted)
            twisted_part = extract_progression(gpow, ell).scale(ell)
            if twisted_part.prec < self.prec or fpow.prec < self.prec:
                raise PrecisionError(f"power sum {e} not known to q^{self.prec}")
            sums.append((fpow + twisted_part).truncate(self.prec))
        return sums


def conjugate_expansions(kind: str, ell: int, prec: int) -> Conjugates:
    """Conjugate data for kind in {'m', 'a'} with power sums valid to O(q^prec)."""
    _check_ell(ell)
    if kind == "m":
        _, v = ell_params(ell)
        base = m_ell_series(ell, prec)
        # l^s / m_l evaluated at u
        twisted = m_ell_star_series(ell, ell * (prec + v) + 1)
        return Conjugates("m", ell, base, twisted, v, prec)
    if kind == "a":
        r = select_hecke_prime(ell)
        v = a_ell_order(ell)
        base = a_ell_series(ell, r, prec + ell * v)
        twisted = a_ell_series(ell, r, ell * (prec + v) + 1)
        return Conjugates("a", ell, base, twisted, v, prec)
    raise ValueError("kind must be 'm' or 'a'")


def newton_precision_loss(kind: str, ell: int, v: int) -> int:
    """Upper bound for the precision lost in Newton's identities plus j-elimination."""
    if kind == "m":
        return ell + 2 * v + 4
    return (ell + 1) * v + 2 * v + 4


def express_in_j(f: LaurentSeries, j: LaurentSeries) -> dict[int, object]:
    """Write f (a polynomial in j up to its precision) in powers of j; residual must vanish."""
    coeffs = {}
    rem = f
    if not rem.is_zero() and rem.ord <= 0:
        top = -rem.ord
        jpow = [LaurentSeries.constant(1, QQ)]
        for _ in range(top):
            jpow.append(series_mul(jpow[-1], j))
        for d in range(top, -1, -1):
            c = rem[-d]
            if c != 0:
                if isinstance(c, Fraction) and c.denominator != 1:
                    raise ModularPolynomialError(f"nonintegral coefficient {c} at j^{d}")
                c = int(c)
                coeffs[d] = c
                rem = rem - jpow[d].scale(c)
    if rem.prec is not None and rem.prec < 2:
        raise PrecisionError("residual not known beyond q^1")
    if not rem.is_zero():
        raise ModularPolynomialError(f"residual series not O(q^{rem.prec}): order {rem.ord}")
    return coeffs


def minpoly_from_conjugates(conj: Conjugates, j: LaurentSeries | None = None) -> BivariatePoly:
    """Monic-in-X polynomial whose roots over C(j) are the given conjugates."""
    deg = conj.ell + 1
    if j is None:
        j = j_series(conj.prec + 2)
    sums = conj.power_sums(deg)
    # Newton: k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} p_i
    e = [LaurentSeries.constant(1, QQ)]
    for k in range(1, deg + 1):
        acc = None
        for i in range(1, k + 1):
            term = series_mul(e[k - i], sums[i - 1])
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        e.append(acc.scale(Fraction(1, k)))
    poly = {}
    for k in range(deg + 1):
        sign = -1 if k % 2 else 1
        for d, c in express_in_j(e[k], j).items():
            poly[(deg - k, d)] = sign * c
    return BivariatePoly(poly)


def modular_polynomial(ell: int, kind: str = "m", margin: int = 4) -> BivariatePoly:
    """M_l (kind 'm') or A_l (kind 'a'); margin extra q-terms are checked to vanish."""
    v = ell_params(ell)[1] if kind == "m" else a_ell_order(ell)
    work = margin + newton_precision_loss(kind, ell, v)
    conj = conjugate_expansions(kind, ell, work)
    return minpoly_from_conjugates(conj)


# ---------------------------------------------------------------------------
# order checks for A_l


@dataclass
class OrderReport:
    ell: int
    v_a: int
    ord_dy_j: int | None
    ord_dy_jl: int | None
    bound_j: int
    bound_jl: int
    coefficient_bound_ok: bool
    top_structure_ok: bool
    skipped: bool = False

    @property
    def ok(self) -> bool:
        if self.skipped:
            return True
        return (self.ord_dy_j >= self.bound_j and self.ord_dy_jl >= self.bound_jl
                and self.coefficient_bound_ok and self.top_structure_ok)


def order_bound_check(A: BivariatePoly, ell: int, v_a: int | None = None, prec: int = 4) -> OrderReport:
    from .qexp import substitute_q_power

    if v_a is None:
        v_a = A.deg_y // 2
    if v_a == 0:
        return OrderReport(ell, 0, None, None, 0, 0, True, True, skipped=True)
    r = select_hecke_prime(ell)
    dy = A.diff_y()
    a = a_ell_series(ell, r, prec + (ell + 1) * v_a + 2)
    j = j_series(prec + (ell + 1) * v_a + 2)
    v1 = dy.evaluate_series(a, j)
    a_big = a_ell_series(ell, r, prec + 2 * v_a * ell + 2)
    jl = substitute_q_power(j_series(2 * v_a + 2 + prec), ell)
    v2 = dy.evaluate_series(a_big, jl)
    coef_ok = all(-i * v_a - k >= -(ell + 1) * v_a for (i, k) in A.coeffs)
    top = 2 * v_a
    top_ok = A[(0, top)] != 0 and all(A[(i, top)] == 0 for i in range(1, ell + 2))
    return OrderReport(ell, v_a, v1.ord, v2.ord, -(ell + 1) * v_a + 1, -(2 * v_a - 1) * ell,
                       coef_ok, top_ok)
