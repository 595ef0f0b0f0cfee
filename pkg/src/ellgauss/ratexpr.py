"""Rational expressions for weight-0 Gamma_0(l) series in terms of (m_l, j) or (a_l, j).

m_l basis:  f * dM/dY(m, j) = m^-k_shift * Q(m, j), found greedily because the
monomials m^i j^k (0 <= k < v) have pairwise distinct orders i v - k.

a_l basis:  f = R1(a, j)/dA/dY(a, j) + R2(a, j)/(g dA/dY(a, j)) with g = m* - m.
Each w_l-invariant part is found by paired elimination against both
f dA/dY(a, j) and its image f dA/dY(a, j(q^l)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .modpoly import BivariatePoly
from .rings import QQ, CycElem, CyclotomicField, euler_phi
from .series import LaurentSeries, PrecisionError, series_mul


class EliminationError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# vector series: a Q(zeta_n)-series split into phi(n) rational coordinates


class _VecSeries:
    def __init__(self, s: LaurentSeries):
        if isinstance(s.ring, CyclotomicField):
            self.n = s.ring.n
            d = euler_phi(self.n)
            self.parts = [s.map_coeffs(lambda c, t=t: c.coeffs[t], QQ) for t in range(d)]
        else:
            self.n = None
            self.parts = [s]

    @property
    def prec(self):
        ps = [p.prec for p in self.parts if p.prec is not None]
        return min(ps) if ps else None

    @property
    def ord(self) -> int:
        return min(p.ord for p in self.parts)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def coeff(self, e: int):
        vals = [p[e] for p in self.parts]
        if self.n is None:
            return vals[0]
        return CycElem(self.n, vals)

    def sub_scaled(self, mono: LaurentSeries, c):
        vals = c.coeffs if isinstance(c, CycElem) else (c,)
        self.parts = [p - mono.scale(v) if v else p for p, v in zip(self.parts, vals)]


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, CycElem) else c == 0


def _div(c, d):
    if isinstance(c, CycElem):
        return c.scale(Fraction(1) / Fraction(d))
    q = Fraction(c) / Fraction(d)
    return q.numerator if q.denominator == 1 else q


class _PowerCache:
    def __init__(self, x: LaurentSeries):
        self.x = x
        self.pos = [LaurentSeries.constant(1, QQ), x]
        self.neg = [LaurentSeries.constant(1, QQ)]
        self._inv = None

    def __call__(self, i: int) -> LaurentSeries:
        if i >= 0:
            while len(self.pos) <= i:
                self.pos.append(series_mul(self.pos[-1], self.x))
            return self.pos[i]
        if self._inv is None:
            self._inv = self.x.inv()
        while len(self.neg) <= -i:
            self.neg.append(series_mul(self.neg[-1], self._inv))
        return self.neg[-i]


# ---------------------------------------------------------------------------
# m_l basis


@dataclass
class EliminationResult:
    poly: BivariatePoly
    k_shift: int
    steps: int
    prec: int


def _int_rows(s: LaurentSeries, lo: int, hi: int) -> list[list[int]] | None:
    """Coefficient rows (one per coordinate) for exponents lo..hi-1, or None if not integral."""
    d = euler_phi(s.ring.n) if isinstance(s.ring, CyclotomicField) else None
    rows = [[0] * (hi - lo) for _ in range(d or 1)]
    for e, c in s.items():
        if e >= hi:
            break
        if e < lo:
            continue
        vals = c.coeffs if d else (c,)
        for t, x in enumerate(vals):
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    return None
                x = x.numerator
            rows[t][e - lo] = x
    return rows


def _lcm_denominator(s: LaurentSeries) -> int:
    den = 1
    for c in s.coeffs:
        for x in (c.coeffs if isinstance(c, CycElem) else (c,)):
            den = lcm(den, Fraction(x).denominator)
    return den


def eliminate_distinct_orders(lhs: LaurentSeries, m: LaurentSeries, j: LaurentSeries, v: int,
                              prec: int) -> EliminationResult:
    """Greedy elimination lhs = sum c_ik m^i j^k (0 <= k < v) up to O(q^prec)."""
    if lhs.prec is not None and lhs.prec < prec:
        raise PrecisionError(f"lhs known to q^{lhs.prec}, need q^{prec}")
    lead = m.lc()
    mn = m.scale(Fraction(1) / Fraction(lead))
    if _int_rows(mn, mn.ord, min(mn.prec, prec + mn.ord)) is None or _int_rows(j, j.ord, min(j.prec, prec)) is None:
        return _eliminate_generic(lhs, m, j, v, prec)
    # integer path: monomials (m/lc)^i j^k are integral with leading coefficient 1
    den = _lcm_denominator(lhs)
    o0 = lhs.ord
    if o0 >= prec:
        return EliminationResult(BivariatePoly(), 0, 0, prec)
    rows = _int_rows(lhs.scale(den), o0, prec)
    n = lhs.ring.n if isinstance(lhs.ring, CyclotomicField) else None
    mp = _PowerCache(mn)
    jp = _PowerCache(j)
    coeffs = {}
    steps = 0
    o = o0
    while True:
        while o < prec and not any(r[o - o0] for r in rows):
            o += 1
        if o >= prec:
            break
        i = -((-o) // v)  # ceil(o / v)
        k = i * v - o
        mono = series_mul(mp(i), jp(k))
        if mono.ord != o or mono.lc() != 1:
            raise EliminationError(f"no monomial of order {o}")
        if mono.prec is not None and mono.prec < prec:
            raise PrecisionError(f"monomial m^{i} j^{k} known to q^{mono.prec}, need q^{prec}")
        (mrow,) = _int_rows(mono, o, prec)
        cs = [r[o - o0] for r in rows]
        base = o - o0
        for r, c in zip(rows, cs):
            if c:
                r[base:] = [a - c * b for a, b in zip(r[base:], mrow)]
        scale = Fraction(1, den) / Fraction(lead) ** i
        vals = [c * scale for c in cs]
        coeffs[(i, k)] = CycElem(n, vals) if n else _div(vals[0], 1)
        steps += 1
    return _finish(coeffs, steps, prec)


def _finish(coeffs: dict, steps: int, prec: int) -> EliminationResult:
    k_shift = max(0, -min((i for i, _ in coeffs), default=0))
    poly = BivariatePoly({(i + k_shift, k): c for (i, k), c in coeffs.items()})
    return EliminationResult(poly, k_shift, steps, prec)


def _eliminate_generic(lhs, m, j, v, prec) -> EliminationResult:
    rem = _VecSeries(lhs.truncate(prec))
    mp = _PowerCache(m)
    jp = _PowerCache(j)
    coeffs = {}
    steps = 0
    while not rem.is_zero() and rem.ord < prec:
        o = rem.ord
        i = -((-o) // v)
        k = i * v - o
        mono = series_mul(mp(i), jp(k))
        if mono.ord != o:
            raise EliminationError(f"no monomial of order {o}")
        if mono.prec is not None and mono.prec < prec:
            raise PrecisionError(f"monomial m^{i} j^{k} known to q^{mono.prec}, need q^{prec}")
        c = _div(rem.coeff(o), mono.lc())
        coeffs[(i, k)] = c
        rem.sub_scaled(mono, c)
        steps += 1
    return _finish(coeffs, steps, prec)


def evaluate_m_expression(res: EliminationResult, m: LaurentSeries, j: LaurentSeries) -> LaurentSeries:
    """m^-k_shift Q(m, j)."""
    cache = {}
    val = res.poly.evaluate_series(m, j, cache)
    if res.k_shift:
        val = series_mul(val, _PowerCache(m)(-res.k_shift))
    return val


# ---------------------------------------------------------------------------
# w_l decomposition


def wl_decompose(f: LaurentSeries, f_star: LaurentSeries, g: LaurentSeries) -> tuple[LaurentSeries, LaurentSeries]:
    """f1 = (f + f*)/2, f2 = (f - f*) g / 2, so f = f1 + f2/g with f1, f2 invariant."""
    f1 = (f + f_star).scale(Fraction(1, 2))
    f2 = series_mul(f - f_star, g).scale(Fraction(1, 2))
    return f1, f2


# ---------------------------------------------------------------------------
# a_l basis


@dataclass
class PairedResult:
    poly: BivariatePoly
    steps: int
    prec: int
    orders_visited: int


def eliminate_paired(f: LaurentSeries, a: LaurentSeries, j: LaurentSeries, jl: LaurentSeries,
                     A: BivariatePoly, v: int, ell: int, margin: int = 4,
                     s1: LaurentSeries | None = None, s2: LaurentSeries | None = None) -> PairedResult:
    """Q with deg_Y Q < 2v, only non-negative X powers, and
    f dA/dY(a, j) = Q(a, j), f dA/dY(a, j(q^l)) = Q(a, j(q^l)) up to O(q^margin).

    Coefficients are read alternately from the two series; every order carries
    two monomials (i, k1), (i', k1 + v) and one of them is always known already.
    """
    dA = A.diff_y()
    if s1 is None:
        s1 = series_mul(f, dA.evaluate_series(a, j))
    if s2 is None:
        s2 = series_mul(f, dA.evaluate_series(a, jl))
    if (s1.prec or margin) < margin or (s2.prec or margin) < margin:
        raise PrecisionError(f"s1/s2 known to q^{s1.prec}/q^{s2.prec}, need q^{margin}")
    rem1 = _VecSeries(s1.truncate(margin))
    rem2 = _VecSeries(s2.truncate(margin))
    if f.is_zero():
        return PairedResult(BivariatePoly(), 0, margin, 0)
    # lower bounds for the true orders of s1 and s2
    low1 = f.ord - (ell + 1) * v + 1
    low2 = f.ord - (2 * v - 1) * ell
    ap = _PowerCache(a)
    jp = _PowerCache(j)
    jlp = _PowerCache(jl)
    known: dict[tuple[int, int], object] = {}
    zero = CycElem.zero(f.ring.n) if isinstance(f.ring, CyclotomicField) else 0

    def ord1(i, k):
        return -i * v - k

    def ord2(i, k):
        return -i * v - k * ell

    def status(mon):
        i, k = mon
        if i < 0 or k < 0 or k >= 2 * v:
            return zero
        if ord1(i, k) < low1 or ord2(i, k) < low2:
            return zero
        return known.get(mon)

    def pair1(o):
        # monomials of s1-order o: (i, k1), (i-1, k1+v)
        k1 = (-o) % v
        i = (-o - k1) // v
        return (i, k1), (i - 1, k1 + v)

    def pair2(o):
        # monomials of s2-order o: (i1, k1), (i1-l, k1+v)
        k1 = (-o) * pow(ell, -1, v) % v if v > 1 else 0
        i1 = (-o - k1 * ell) // v
        return (i1, k1), (i1 - ell, k1 + v)

    def mono1(mon):
        return series_mul(ap(mon[0]), jp(mon[1]))

    def mono2(mon):
        return series_mul(ap(mon[0]), jlp(mon[1]))

    p1 = min(low1, rem1.ord)
    p2 = min(low2, rem2.ord)
    steps = 0
    visited = 0
    applied1: set = set()
    applied2: set = set()

    def process(rem, applied, p, pair, mono) -> bool:
        """Handle order p of one series; False if both monomials are still unknown."""
        nonlocal steps
        mons = pair(p)
        stats = [status(mon) for mon in mons]
        unknown = [mon for mon, st in zip(mons, stats) if st is None]
        if len(unknown) == 2:
            return False
        for mon, st in zip(mons, stats):
            if st is not None and mon not in applied:
                if not _is_zero(st):
                    rem.sub_scaled(mono(mon), st)
                applied.add(mon)
        c = rem.coeff(p)
        if not unknown:
            if not _is_zero(c):
                raise EliminationError(f"order {p}: both monomials known but residual {c} != 0")
            return True
        target = unknown[0]
        ms = mono(target)
        if ms.ord != p:
            raise EliminationError(f"monomial {target} has order {ms.ord}, expected {p}")
        val = _div(c, ms.lc())
        known[target] = val
        if not _is_zero(val):
            rem.sub_scaled(ms, val)
        applied.add(target)
        steps += 1
        return True

    while p1 <= 0:
        progressed = False
        o1 = p1
        while p1 <= 0 and p1 < o1 + ell - 1 and process(rem1, applied1, p1, pair1, mono1):
            p1 += 1
            visited += 1
            progressed = True
        o2 = p2
        while p2 <= 0 and p2 < o2 + ell - 1 and process(rem2, applied2, p2, pair2, mono2):
            p2 += 1
            visited += 1
            progressed = True
        if not progressed:
            raise EliminationError(f"stuck at s1-order {p1}, s2-order {p2}: both partners unknown")
    # monomials fixed by s1 but not yet visited in s2
    for mon, c in known.items():
        if mon not in applied2 and not _is_zero(c):
            rem2.sub_scaled(mono2(mon), c)
    if (rem1.prec or margin) < margin or (rem2.prec or margin) < margin:
        raise PrecisionError(f"monomials too short: residuals known to q^{rem1.prec}/q^{rem2.prec}")
    if not rem1.is_zero():
        raise EliminationError(f"s1 residual nonzero at order {rem1.ord} < {margin}")
    if not rem2.is_zero():
        raise EliminationError(f"s2 residual nonzero at order {rem2.ord} < {margin}")
    poly = BivariatePoly({mon: c for mon, c in known.items() if not _is_zero(c)})
    return PairedResult(poly, steps, margin, visited)


def reconstruction_residual(lhs: LaurentSeries, poly: BivariatePoly, x: LaurentSeries, y: LaurentSeries,
                            k_shift: int = 0) -> LaurentSeries:
    """lhs - x^-k_shift * poly(x, y); zero up to its precision iff the expression is right."""
    val = poly.evaluate_series(x, y)
    if k_shift:
        val = series_mul(val, _PowerCache(x)(-k_shift))
    if isinstance(lhs.ring, CyclotomicField) and val.ring == QQ:
        val = val.change_ring(lhs.ring)
    return lhs - val
