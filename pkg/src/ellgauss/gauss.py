"""Cyclotomic and elliptic Gauss sums, universal Gauss sums tau and Jacobi sums J.

The character chi of order n on F_l^* is fixed by chi(c) = zeta_n for the
smallest primitive root c mod l.  For odd n the Gauss sums are built from x,
for even n from y.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from .qexp import (
    _check_ell,
    delta_series,
    p1_series,
    p1_star_series,
    xy_coefficient_table,
    star_image,
)
from .rings import (
    CycElem,
    CyclotomicField,
    TensorElem,
    TensorField,
    galois_apply,
    tensor_descend,
)
from .series import LaurentSeries, series_inv, series_mul, series_pow


class IntegralityError(ArithmeticError):
    pass


def primitive_root(ell: int) -> int:
    order = ell - 1
    factors = {p for p in range(2, order + 1) if order % p == 0 and all(p % d for d in range(2, p))}
    for g in range(2, ell):
        if all(pow(g, order // f, ell) != 1 for f in factors):
            return g
    raise ValueError(f"no primitive root mod {ell}")


def prime_power_parts(m: int) -> list[int]:
    """Maximal prime-power divisors of m, ascending by prime."""
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            q = 1
            while m % p == 0:
                m //= p
                q *= p
            out.append(q)
        p += 1
    if m > 1:
        out.append(m)
    return out


@dataclass(frozen=True)
class CharSpec:
    ell: int
    n: int
    c: int = 0

    def __post_init__(self):
        _check_ell(self.ell)
        if self.n < 2 or (self.ell - 1) % self.n:
            raise ValueError(f"n={self.n} must be >= 2 and divide l-1={self.ell - 1}")
        if not self.c:
            object.__setattr__(self, "c", primitive_root(self.ell))

    @cached_property
    def index(self) -> dict[int, int]:
        """Discrete log base c on F_l^*."""
        out = {}
        x = 1
        for j in range(self.ell - 1):
            out[x] = j
            x = x * self.c % self.ell
        return out

    def chi_exp(self, a: int) -> int:
        """e with chi(a) = zeta_n^e."""
        return self.index[a % self.ell] % self.n

    @property
    def kind(self) -> str:
        return "x" if self.n % 2 else "y"

    @property
    def weight(self) -> int:
        return 2 if self.n % 2 else 3

    def chi_minus_one(self) -> int:
        return self.chi_exp(-1)


# ---------------------------------------------------------------------------
# exponent bookkeeping


def tau_exponents(n: int) -> tuple[int, int]:
    """(r, e_Delta) with weight(n) * n + 2 r = 12 e_Delta and r minimal."""
    w = 2 if n % 2 else 3
    r = 0
    while (w * n + 2 * r) % 12:
        r += 1
    return r, (w * n + 2 * r) // 12


def jacobi_exponents(n: int, k: int) -> tuple[int, int]:
    w = 2 if n % 2 else 3
    r = 0
    while (w * (k + 1) + 2 * r) % 12:
        r += 1
    return r, (w * (k + 1) + 2 * r) // 12


def ell_exponent(ell: int, n: int) -> int:
    """v_l: bound for the power of l in the denominators of tau."""
    num = 2 * n if n % 2 else 3 * n
    return -(-num // (ell - 1))


def tau_multiplier(ell: int, n: int) -> int:
    r, _ = tau_exponents(n)
    c = 12 ** r * ell ** ell_exponent(ell, n)
    if n % 2 == 0:
        c *= 2 ** n
    return c


def jacobi_ks(n: int) -> list[int]:
    return [k for k in range(1, n - 1) if gcd(k, n) == 1]


# ---------------------------------------------------------------------------
# cyclotomic Gauss sums


def cyclotomic_gauss_sum(spec: CharSpec, power: int = 1) -> TensorElem:
    """sum_{a in F_l^*} chi^power(a) zeta_l^a."""
    coords = [CycElem.zeta(spec.n, power * spec.chi_exp(a)) for a in range(1, spec.ell)]
    return TensorElem(spec.ell, spec.n, coords)


# ---------------------------------------------------------------------------
# the product G(q) G_{chi^-1}(zeta_l)


@dataclass
class OpCounter:
    counts: Counter = field(default_factory=Counter)

    def add(self, key: str, k: int = 1):
        self.counts[key] += k

    def __getitem__(self, key):
        return self.counts[key]


def descended_gauss_product(spec: CharSpec, prec: int, counter: OpCounter | None = None,
                            table=None) -> LaurentSeries:
    """T1 = G_{l,n,chi}(q) * G_{chi^-1}(zeta_l) as a series over Q(zeta_n).

    For c running over F_l^* in the order c = g^j the value
    b_i(c) = l a_{i,-c^-1} - sum_k a_{i,k} is updated in O(1).
    """
    ell, n = spec.ell, spec.n
    tab = table if table is not None else xy_coefficient_table(ell, spec.kind, prec)
    g = spec.c
    powers = [pow(g, j, ell) for j in range(ell - 1)]
    neg_inv = [(-pow(c, -1, ell)) % ell for c in powers]
    coeffs = []
    for i in range(prec):
        row = tab.rows[i]
        total = sum(row)
        buckets = [0] * n
        b = ell * row[neg_inv[0]] - total
        buckets[0] += b
        for j in range(1, ell - 1):
            b += ell * (row[neg_inv[j]] - row[neg_inv[j - 1]])
            buckets[j % n] += b
        if counter is not None:
            counter.add("coeff_ops", ell - 1)
        coeffs.append(CycElem.from_buckets(n, buckets))
    return LaurentSeries(CyclotomicField(n), coeffs, 0, prec)


def gauss_series_tensor(spec: CharSpec, prec: int, power: int = 1) -> LaurentSeries:
    """G_{l,n,chi^power}(q) with coefficients in Q(zeta_n, zeta_l) (slow reference path)."""
    ell, n = spec.ell, spec.n
    tab = xy_coefficient_table(ell, spec.kind, prec)
    coeffs = []
    for i in range(prec):
        row = tab.rows[i]
        buckets = [CycElem.zero(n) for _ in range(ell)]
        for lam in range(1, ell):
            z = CycElem.zeta(n, power * spec.chi_exp(lam))
            for k, a in enumerate(row):
                if a:
                    idx = lam * k % ell
                    buckets[idx] = buckets[idx] + z * a
        coeffs.append(TensorElem.from_buckets(ell, n, buckets))
    return LaurentSeries(TensorField(ell, n), coeffs, 0, prec)


def naive_gauss_product(spec: CharSpec, prec: int) -> LaurentSeries:
    """Reference for T1: double sum in Q(zeta_n, zeta_l), then descend."""
    G = gauss_series_tensor(spec, prec)
    s = cyclotomic_gauss_sum(spec, -1)
    return LaurentSeries(CyclotomicField(spec.n), [tensor_descend(c * s) for c in G.coeffs], 0, prec)


def gauss_power(spec: CharSpec, prec: int, counter: OpCounter | None = None,
                t1: LaurentSeries | None = None) -> LaurentSeries:
    """G_{l,n,chi}(q)^n = T1^n G_chi(zeta_l)^n / l^n."""
    n, ell = spec.n, spec.ell
    if t1 is None:
        t1 = descended_gauss_product(spec, prec, counter)
    t2 = series_pow(t1.truncate(prec), n)
    if counter is not None:
        counter.add("series_mul", 2 * n.bit_length())
    s = tensor_descend(cyclotomic_gauss_sum(spec, 1) ** n)
    return t2.scale(s.scale(Fraction(1, ell ** n)))


# ---------------------------------------------------------------------------
# Fricke images


def gauss_star_series(spec: CharSpec, prec: int) -> LaurentSeries:
    """sum_t chi(t) V(q^t, q^l) with automorphy factors dropped (order >= 1)."""
    ell, n = spec.ell, spec.n
    buckets = [[0] * n for _ in range(prec)]
    for N in range(1, prec):
        if N % ell == 0:
            continue
        ep = spec.chi_exp(N)
        em = spec.chi_exp(-N)
        for M in range(N, prec, N):
            w = M // N
            if spec.kind == "x":
                buckets[M][ep] += w
                buckets[M][em] += w
            else:
                h = Fraction(w * w, 2)
                buckets[M][ep] += h
                buckets[M][em] -= h
    coeffs = [CycElem.from_buckets(n, b) for b in buckets]
    return LaurentSeries(CyclotomicField(n), coeffs, 0, prec)


# ---------------------------------------------------------------------------
# universal Gauss and Jacobi sums


@dataclass
class GaussTau:
    ell: int
    n: int
    r: int
    e_delta: int
    series: LaurentSeries
    multiplier: int
    v_ell: int
    c: int
    k: int | None = None  # Jacobi twist, None for tau

    @property
    def kind(self) -> str:
        return "tau" if self.k is None else "jacobi"


JacobiTau = GaussTau


def _normalize(num: LaurentSeries, r: int, e: int, ell: int, prec: int) -> LaurentSeries:
    """num * p1^r / Delta^e to O(q^prec)."""
    out = num.truncate(prec + e)
    if r:
        out = out * series_pow(p1_series(ell, prec + e), r)
    if e:
        out = out * series_inv(series_pow(delta_series(prec + e + 1), e))
    return out.truncate(prec)


def denominator_lcm(s: LaurentSeries) -> int:
    den = 1
    for c in s.coeffs:
        d = c.denominator() if isinstance(c, CycElem) else Fraction(c).denominator
        den = den * d // gcd(den, d)
    return den


def tau_series(spec: CharSpec, prec: int, counter: OpCounter | None = None,
               t1: LaurentSeries | None = None, check: bool = True) -> GaussTau:
    r, e = tau_exponents(spec.n)
    gn = gauss_power(spec, prec + e, counter, t1)
    series = _normalize(gn, r, e, spec.ell, prec)
    mult = tau_multiplier(spec.ell, spec.n)
    if check and any(not c.scale(mult).is_integral() for c in series.coeffs):
        raise IntegralityError(f"multiplier {mult} does not clear tau_{spec.ell},{spec.n}")
    return GaussTau(spec.ell, spec.n, r, e, series, mult, ell_exponent(spec.ell, spec.n), spec.c)


def tau_star_series(spec: CharSpec, prec: int) -> LaurentSeries:
    """tau* = G*^n p1*^r / Delta(q^l)^e with automorphy factors cancelled."""
    r, e = tau_exponents(spec.n)
    ell = spec.ell
    work = prec + ell * e
    num = series_pow(gauss_star_series(spec, work), spec.n)
    if r:
        num = num * series_pow(p1_star_series(ell, work), r)
    d = series_pow(star_image("delta", ell, work + ell * e + 1), e)
    return (num * series_inv(d)).truncate(prec)


def jacobi_star_series(spec: CharSpec, k: int, prec: int) -> LaurentSeries:
    r, e = jacobi_exponents(spec.n, k)
    ell, n = spec.ell, spec.n
    work = prec + ell * e
    gs = gauss_star_series(spec, work)
    num = series_pow(gs, k) * galois_apply(gs, (-k) % n)
    if r:
        num = num * series_pow(p1_star_series(ell, work), r)
    d = series_pow(star_image("delta", ell, work + ell * e + 1), e)
    return (num * series_inv(d)).truncate(prec)


def jacobi_series_batch(spec: CharSpec, prec: int, ks: list[int] | None = None,
                        t1: LaurentSeries | None = None) -> list[GaussTau]:
    """J_{l,n,k} = G^k G_{chi^-k} p1^r / Delta^e for all admissible k.

    Running products T = T1^k and S = G_{chi^-1}(zeta_l)^k; the chi^-k twists come
    from the Galois action on the stored T1 and S1.
    """
    ell, n = spec.ell, spec.n
    wanted = jacobi_ks(n) if ks is None else ks
    if not wanted:
        return []
    e_max = max(jacobi_exponents(n, k)[1] for k in wanted)
    work = prec + e_max
    if t1 is None:
        t1 = descended_gauss_product(spec, work)
    t1 = t1.truncate(work)
    s1 = cyclotomic_gauss_sum(spec, -1)
    T = None
    S = None
    out = []
    for k in range(1, max(wanted) + 1):
        T = t1 if T is None else series_mul(T, t1)
        S = s1 if S is None else S * s1
        if k not in wanted:
            continue
        T2 = galois_apply(t1, (-k) % n)
        S2 = s1.galois_n((-k) % n)
        S3 = tensor_descend(S * S2)
        S3inv = S3.galois((-1) % n).scale(Fraction(1, ell ** (k + 1)))
        num = series_mul(T, T2).scale(S3inv)
        r, e = jacobi_exponents(n, k)
        series = _normalize(num, r, e, ell, prec)
        mult = denominator_lcm(series)
        out.append(GaussTau(ell, n, r, e, series, mult, 0, spec.c, k))
    return out
