"""Truncated Laurent series in q^(1/s) over Q, Q(zeta_n) or Q(zeta_n, zeta_l).

A series stores coefficients for exponents ord, ord+1, ..., prec-1 (in units of
q^(1/denom_exp)); everything from prec on is unknown.  ``prec=None`` marks an
exact (finite) series.  Products over Q and Q(zeta_n) go through a Kronecker
substitution into one big integer product, which is where almost all time is
spent for the precisions used here.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Sequence

from .rings import (
    QQ,
    CycElem,
    CyclotomicField,
    RationalField,
    euler_phi,
    reduce_mod_cyclotomic,
    _normalize_rational,
)


try:  # GMP multiplication is much faster than CPython's for the packed operands
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = None


def _bigmul(x: int, y: int) -> int:
    if _mpz is None or x.bit_length() < 20000 or y.bit_length() < 20000:
        return x * y
    return int(_mpz(x) * _mpz(y))


class PrecisionError(ArithmeticError):
    pass


def _pmin(*ps):
    vals = [p for p in ps if p is not None]
    return min(vals) if vals else None


def _padd(p, k):
    return None if p is None else p + k


class LaurentSeries:
    __slots__ = ("ring", "coeffs", "ord", "prec", "denom_exp")

    def __init__(self, ring, coeffs: Sequence = (), ord: int = 0, prec: int | None = None, denom_exp: int = 1):
        coeffs = list(coeffs)
        if prec is not None and ord + len(coeffs) > prec:
            del coeffs[max(0, prec - ord):]
        # strip leading and trailing zeros
        is_zero = ring.is_zero
        lead = 0
        while lead < len(coeffs) and is_zero(coeffs[lead]):
            lead += 1
        if lead:
            del coeffs[:lead]
            ord += lead
        if prec is None:
            while coeffs and is_zero(coeffs[-1]):
                coeffs.pop()
        if not coeffs:
            ord = prec if prec is not None else 0
        self.ring = ring
        self.coeffs = coeffs
        self.ord = ord
        self.prec = prec
        self.denom_exp = denom_exp

    # --- constructors
    @classmethod
    def zero(cls, ring=QQ, prec=None, denom_exp=1):
        return cls(ring, [], 0 if prec is None else prec, prec, denom_exp)

    @classmethod
    def constant(cls, c, ring=QQ, prec=None, denom_exp=1):
        return cls(ring, [ring.coerce(c)], 0, prec, denom_exp)

    @classmethod
    def monomial(cls, c, e: int, ring=QQ, prec=None, denom_exp=1):
        return cls(ring, [ring.coerce(c)], e, prec, denom_exp)

    @classmethod
    def from_dict(cls, terms: dict, ring=QQ, prec=None, denom_exp=1):
        if not terms:
            return cls.zero(ring, prec, denom_exp)
        lo, hi = min(terms), max(terms)
        if prec is not None:
            hi = min(hi, prec - 1)
        coeffs = [ring.zero] * (hi - lo + 1)
        for e, c in terms.items():
            if lo <= e <= hi:
                coeffs[e - lo] = ring.coerce(c)
        return cls(ring, coeffs, lo, prec, denom_exp)

    # --- inspection
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> int:
        return self.ord

    def lc(self):
        if not self.coeffs:
            raise ValueError("zero series has no leading coefficient")
        return self.coeffs[0]

    def __getitem__(self, e: int):
        if self.prec is not None and e >= self.prec:
            raise PrecisionError(f"coefficient {e} beyond precision {self.prec}")
        k = e - self.ord
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.ring.zero

    def items(self):
        is_zero = self.ring.is_zero
        for k, c in enumerate(self.coeffs):
            if not is_zero(c):
                yield self.ord + k, c

    def to_dict(self) -> dict:
        return dict(self.items())

    def __repr__(self):
        terms = [f"({c})*q^({e}/{self.denom_exp})" if self.denom_exp != 1 else f"({c})*q^{e}" for e, c in list(self.items())[:6]]
        tail = " + ..." if len(self.coeffs) > 6 else ""
        return f"LaurentSeries[{self.ring}](" + " + ".join(terms) + tail + f" + O(q^{self.prec}))"

    # --- structural ops
    def truncate(self, prec: int) -> "LaurentSeries":
        if self.prec is not None and prec > self.prec:
            raise PrecisionError(f"cannot raise precision from {self.prec} to {prec}")
        return LaurentSeries(self.ring, self.coeffs, self.ord, prec, self.denom_exp)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by q^(k/denom_exp)."""
        return LaurentSeries(self.ring, self.coeffs, self.ord + k, _padd(self.prec, k), self.denom_exp)

    def map_coeffs(self, fn: Callable, ring=None) -> "LaurentSeries":
        ring = self.ring if ring is None else ring
        return LaurentSeries(ring, [fn(c) for c in self.coeffs], self.ord, self.prec, self.denom_exp)

    def change_ring(self, ring) -> "LaurentSeries":
        return self.map_coeffs(ring.coerce, ring)

    def rescale(self, denom_exp: int) -> "LaurentSeries":
        if denom_exp % self.denom_exp:
            raise ValueError("new denominator must be a multiple of the old one")
        t = denom_exp // self.denom_exp
        return _spread(self, t, denom_exp)

    def _aligned(self, other: "LaurentSeries"):
        if self.denom_exp == other.denom_exp:
            return self, other
        s = lcm(self.denom_exp, other.denom_exp)
        return self.rescale(s), other.rescale(s)

    def _lift(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        return LaurentSeries.constant(other, self.ring, None, self.denom_exp)

    # --- arithmetic
    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = self._lift(other)
        a, b = self._aligned(other)
        if a.ring != b.ring:
            raise ValueError(f"ring mismatch {a.ring} vs {b.ring}")
        prec = _pmin(a.prec, b.prec)
        if not a.coeffs:
            lo = b.ord
        elif not b.coeffs:
            lo = a.ord
        else:
            lo = min(a.ord, b.ord)
        hi = max(a.ord + len(a.coeffs), b.ord + len(b.coeffs))
        if prec is not None:
            hi = min(hi, prec)
            lo = min(lo, prec)
        zero = a.ring.zero
        out = [zero] * max(0, hi - lo)
        for src in (a, b):
            off = src.ord - lo
            for k, c in enumerate(src.coeffs):
                if off + k < len(out):
                    out[off + k] = out[off + k] + c
        return LaurentSeries(a.ring, out, lo, prec, a.denom_exp)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.ring, [-c for c in self.coeffs], self.ord, self.prec, self.denom_exp)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = self._lift(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentSeries":
        return LaurentSeries(self.ring, [x * c for x in self.coeffs], self.ord, self.prec, self.denom_exp)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return series_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        return series_pow(self, e)

    def inv(self, prec: int | None = None) -> "LaurentSeries":
        return series_inv(self, prec)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return series_mul(self, series_inv(other))
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, CycElem):
            return self.scale(other.inverse())
        return NotImplemented

    def equals_to_precision(self, other: "LaurentSeries", prec: int | None = None) -> bool:
        diff = self - other
        if prec is not None and diff.prec is not None and diff.prec < prec:
            raise PrecisionError("insufficient precision for comparison")
        if prec is None:
            return diff.is_zero()
        return diff.is_zero() or diff.ord >= prec


# ---------------------------------------------------------------------------
# integer polynomial multiplication via Kronecker substitution


def _pack(vals: Sequence[int], nbytes: int) -> int:
    pos = bytearray(len(vals) * nbytes)
    neg = None
    for i, v in enumerate(vals):
        if v > 0:
            pos[i * nbytes:(i + 1) * nbytes] = v.to_bytes(nbytes, "little")
        elif v < 0:
            if neg is None:
                neg = bytearray(len(vals) * nbytes)
            neg[i * nbytes:(i + 1) * nbytes] = (-v).to_bytes(nbytes, "little")
    x = int.from_bytes(pos, "little")
    if neg is not None:
        x -= int.from_bytes(neg, "little")
    return x


def int_poly_mul(a: Sequence[int], b: Sequence[int], nout: int | None = None) -> list[int]:
    """Product of integer coefficient lists, truncated to nout terms."""
    if not a or not b:
        return [0] * (nout or 0)
    full = len(a) + len(b) - 1
    if nout is None:
        nout = full
    a = a[:nout]
    b = b[:nout]
    if len(a) * len(b) <= 64:
        out = [0] * nout
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b[: nout - i]):
                    out[i + j] += x * y
        return out
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if not ma or not mb:
        return [0] * nout
    bound = ma * mb * min(len(a), len(b))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    bits = 8 * nbytes
    prod = _bigmul(_pack(a, nbytes), _pack(b, nbytes))
    full = len(a) + len(b) - 1
    half = 1 << (bits - 1)
    offset = int.from_bytes(((b"\x00" * (nbytes - 1)) + b"\x80") * full, "little")
    raw = (prod + offset).to_bytes(full * nbytes + 1, "little")
    out = []
    for i in range(min(nout, full)):
        out.append(int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half)
    out += [0] * (nout - len(out))
    return out


def _common_denominator(vals: Iterable) -> int:
    den = 1
    for v in vals:
        if isinstance(v, Fraction):
            d = v.denominator
            if den % d:
                den = den * d // gcd(den, d)
    return den


def _scaled_ints(vals: Sequence, den: int) -> list[int]:
    out = []
    for v in vals:
        if isinstance(v, Fraction):
            out.append(v.numerator * (den // v.denominator))
        else:
            out.append(v * den)
    return out


def _make_rational(num: int, den: int):
    if den == 1:
        return num
    g = gcd(num, den)
    if g == den:
        return num // den
    return Fraction(num // g, den // g)


def _mul_rational(a: list, b: list, nout: int) -> list:
    da = _common_denominator(a)
    db = _common_denominator(b)
    prod = int_poly_mul(_scaled_ints(a, da), _scaled_ints(b, db), nout)
    den = da * db
    return [_make_rational(x, den) for x in prod]


def _mul_cyclotomic(a: list, b: list, nout: int, n: int) -> list:
    d = euler_phi(n)
    if d == 1:
        res = _mul_rational([x.coeffs[0] for x in a], [x.coeffs[0] for x in b], nout)
        return [CycElem._raw(n, (c,)) for c in res]
    w = 2 * d - 1
    da = _common_denominator(c for x in a for c in x.coeffs)
    db = _common_denominator(c for x in b for c in x.coeffs)

    def flat(series, den):
        out = [0] * (len(series) * w)
        for i, x in enumerate(series):
            vals = _scaled_ints(x.coeffs, den)
            out[i * w:i * w + d] = vals
        return out

    a = a[:nout]
    b = b[:nout]
    prod = int_poly_mul(flat(a, da), flat(b, db), nout * w)
    den = da * db
    out = []
    for i in range(nout):
        red = reduce_mod_cyclotomic(n, prod[i * w:(i + 1) * w])
        out.append(CycElem._raw(n, tuple(_make_rational(x, den) for x in red)))
    return out


def _mul_generic(a: list, b: list, nout: int, zero) -> list:
    out = [zero] * nout
    for i, x in enumerate(a[:nout]):
        if x.is_zero() if hasattr(x, "is_zero") else x == 0:
            continue
        for j, y in enumerate(b[: nout - i]):
            out[i + j] = out[i + j] + x * y
    return out


def _coeff_mul(ring, a: list, b: list, nout: int) -> list:
    if nout <= 0 or not a or not b:
        return []
    if isinstance(ring, RationalField):
        return _mul_rational(a, b, nout)
    if isinstance(ring, CyclotomicField):
        return _mul_cyclotomic(a, b, nout, ring.n)
    return _mul_generic(a, b, nout, ring.zero)


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    a, b = a._aligned(b)
    if a.ring != b.ring:
        if isinstance(a.ring, RationalField):
            a = a.change_ring(b.ring)
        elif isinstance(b.ring, RationalField):
            b = b.change_ring(a.ring)
        else:
            raise ValueError(f"ring mismatch {a.ring} vs {b.ring}")
    ring = a.ring
    oa = a.ord
    ob = b.ord
    prec = _pmin(_padd(a.prec, ob), _padd(b.prec, oa))
    o = oa + ob
    if prec is None:
        nout = len(a.coeffs) + len(b.coeffs) - 1 if a.coeffs and b.coeffs else 0
    else:
        nout = max(0, prec - o)
    coeffs = _coeff_mul(ring, a.coeffs, b.coeffs, nout)
    return LaurentSeries(ring, coeffs, o, prec, a.denom_exp)


def series_inv(a: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    """Multiplicative inverse; the leading coefficient must be a unit."""
    if not a.coeffs:
        raise ZeroDivisionError("inverse of a zero series")
    if a.prec is None and prec is None:
        if len(a.coeffs) == 1:
            return LaurentSeries(a.ring, [_unit_inverse(a.coeffs[0])], -a.ord, None, a.denom_exp)
        raise PrecisionError("inverse of an exact non-monomial series needs a precision")
    # relative precision of the result
    rel = (a.prec - a.ord) if a.prec is not None else None
    if prec is not None:
        rel = prec + a.ord if rel is None else min(rel, prec + a.ord)
    u = _unit_inverse(a.coeffs[0])
    coeffs = a.coeffs
    ring = a.ring
    # Newton iteration b <- b (2 - a b) doubling the relative precision
    b = [u]
    k = 1
    while k < rel:
        k2 = min(2 * k, rel)
        ab = _coeff_mul(ring, coeffs[:k2], b, k2)
        # e = 1 - ab has zero low part
        e = [-c for c in ab]
        e[0] = e[0] + 1
        corr = _coeff_mul(ring, b, e, k2)
        b = [b[i] + corr[i] if i < len(b) else corr[i] for i in range(k2)]
        k = k2
    return LaurentSeries(ring, b[:rel], -a.ord, -a.ord + rel, a.denom_exp)


def _unit_inverse(c):
    if isinstance(c, int):
        return _make_rational(1, c) if c not in (1, -1) else c
    if isinstance(c, Fraction):
        return _normalize_rational(1 / c)
    return c.inverse()


def series_pow(a: LaurentSeries, e: int) -> LaurentSeries:
    if e < 0:
        return series_pow(series_inv(a), -e)
    result = LaurentSeries.constant(1, a.ring, None, a.denom_exp)
    base = a
    while e:
        if e & 1:
            result = series_mul(result, base)
        e >>= 1
        if e:
            base = series_mul(base, base)
    return result


def _spread(a: LaurentSeries, t: int, denom_exp: int) -> LaurentSeries:
    if t == 1:
        return LaurentSeries(a.ring, a.coeffs, a.ord, a.prec, denom_exp)
    zero = a.ring.zero
    out = [zero] * ((len(a.coeffs) - 1) * t + 1) if a.coeffs else []
    for k, c in enumerate(a.coeffs):
        out[k * t] = c
    prec = None if a.prec is None else a.prec * t
    return LaurentSeries(a.ring, out, a.ord * t, prec, denom_exp)


def substitute_q_power(a: LaurentSeries, t: int) -> LaurentSeries:
    """f(q) -> f(q^t)."""
    if t < 1:
        raise ValueError("t must be positive")
    return _spread(a, t, a.denom_exp)


def extract_progression(a: LaurentSeries, m: int, r: int = 0) -> LaurentSeries:
    """Terms with exponent = r mod m, returned as a series in q^(m/s): sum c_{mk+r} q^k."""
    out = {}
    for e, c in a.items():
        if (e - r) % m == 0:
            out[(e - r) // m] = c
    prec = None
    if a.prec is not None:
        prec = -((r - a.prec) // m)  # ceil((prec - r)/m)
    return LaurentSeries.from_dict(out, a.ring, prec, a.denom_exp)
