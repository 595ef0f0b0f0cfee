"""Exact arithmetic in Q(zeta_n), Q(zeta_n, zeta_l) and F_p[zeta_n].

Elements of Q(zeta_n) are stored in the power basis 1, z, ..., z^(d-1) with
d = phi(n).  Elements of Q(zeta_n)(zeta_l) use the basis zeta_l^1 .. zeta_l^(l-1)
over Q(zeta_n), which is natural for Gauss sums since the trivial power of
zeta_l never appears with a nontrivial character.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

Rational = (int, Fraction)


# ---------------------------------------------------------------------------
# cyclotomic polynomials and power tables


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dn] // den[dn]
        out[k] = c
        if c:
            for i, di in enumerate(den):
                num[k + i] -= c * di
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, cyclotomic_poly(d))
    return tuple(num)


@lru_cache(maxsize=None)
def power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Rows X^e mod Phi_n for 0 <= e < max(n, 2 phi(n) - 1)."""
    phi = cyclotomic_poly(n)
    d = len(phi) - 1
    rows = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(max(n, 2 * d - 1)):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(d):
                cur[i] -= top * phi[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def _sparse_rows(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    return tuple(tuple((i, c) for i, c in enumerate(row) if c) for row in power_table(n))


def reduce_mod_cyclotomic(n: int, vec: Sequence) -> list:
    """Reduce a coefficient vector of any length < 2 phi(n) - 1 modulo Phi_n."""
    d = euler_phi(n)
    out = list(vec[:d]) + [0] * max(0, d - len(vec))
    if len(vec) > d:
        rows = _sparse_rows(n)
        for k in range(d, len(vec)):
            c = vec[k]
            if c:
                for i, r in rows[k]:
                    out[i] += c * r
    return out


def _convolve(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _normalize_rational(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


# ---------------------------------------------------------------------------
# Q(zeta_n)


class CycElem:
    """Element of Q(zeta_n) in the power basis."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Iterable):
        coeffs = tuple(_normalize_rational(c) for c in coeffs)
        if len(coeffs) != euler_phi(n):
            raise ValueError(f"expected {euler_phi(n)} coefficients, got {len(coeffs)}")
        self.n = n
        self.coeffs = coeffs

    @classmethod
    def _raw(cls, n: int, coeffs: tuple) -> "CycElem":
        obj = object.__new__(cls)
        obj.n = n
        obj.coeffs = coeffs
        return obj

    @classmethod
    def zero(cls, n: int) -> "CycElem":
        return cls._raw(n, (0,) * euler_phi(n))

    @classmethod
    def from_rational(cls, n: int, x) -> "CycElem":
        c = [0] * euler_phi(n)
        c[0] = _normalize_rational(x)
        return cls._raw(n, tuple(c))

    @classmethod
    def one(cls, n: int) -> "CycElem":
        return cls.from_rational(n, 1)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "CycElem":
        return cls._raw(n, power_table(n)[k % n])

    @classmethod
    def from_buckets(cls, n: int, buckets: Sequence) -> "CycElem":
        """Sum of buckets[e] * zeta^e for 0 <= e < n."""
        d = euler_phi(n)
        out = [0] * d
        rows = _sparse_rows(n)
        for e, c in enumerate(buckets):
            if c:
                for i, r in rows[e % n]:
                    out[i] += c * r
        return cls._raw(n, tuple(_normalize_rational(c) for c in out))

    # --- predicates
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_integral(self) -> bool:
        return all(not isinstance(c, Fraction) or c.denominator == 1 for c in self.coeffs)

    def denominator(self) -> int:
        den = 1
        for c in self.coeffs:
            if isinstance(c, Fraction):
                den = den * c.denominator // gcd(den, c.denominator)
        return den

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    # --- arithmetic
    def _coerce(self, other) -> "CycElem | None":
        if isinstance(other, CycElem):
            if other.n != self.n:
                raise ValueError("mismatched cyclotomic fields")
            return other
        if isinstance(other, Rational):
            return CycElem.from_rational(self.n, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycElem._raw(self.n, tuple(_normalize_rational(a + b) for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycElem._raw(self.n, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycElem._raw(self.n, tuple(_normalize_rational(a - b) for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "CycElem":
        return CycElem._raw(self.n, tuple(_normalize_rational(a * c) for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Rational):
            return self.scale(other)
        if not isinstance(other, CycElem):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("mismatched cyclotomic fields")
        if len(self.coeffs) == 1:
            return CycElem._raw(self.n, (_normalize_rational(self.coeffs[0] * other.coeffs[0]),))
        red = reduce_mod_cyclotomic(self.n, _convolve(self.coeffs, other.coeffs))
        return CycElem._raw(self.n, tuple(_normalize_rational(c) for c in red))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycElem.one(self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def galois(self, c: int) -> "CycElem":
        """Apply zeta_n -> zeta_n^c (c coprime to n)."""
        if gcd(c, self.n) != 1:
            raise ValueError("Galois exponent must be coprime to n")
        return CycElem.from_buckets(
            self.n, _spread(self.coeffs, c, self.n)
        )

    def norm(self):
        """Field norm down to Q."""
        prod = CycElem.one(self.n)
        for c in range(2, self.n):
            if gcd(c, self.n) == 1:
                prod = prod * self.galois(c)
        return (prod * self).rational_value()

    def inverse(self) -> "CycElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CycElem.from_rational(self.n, Fraction(1) / self.coeffs[0])
        # x^-1 = (product of the other conjugates) / N(x)
        prod = CycElem.one(self.n)
        for c in range(2, self.n):
            if gcd(c, self.n) == 1:
                prod = prod * self.galois(c)
        nrm = (prod * self).rational_value()
        return prod.scale(Fraction(1) / Fraction(nrm))

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, CycElem):
            return self * other.inverse()
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, CycElem):
            return self.n == other.n and self.coeffs == other.coeffs
        if isinstance(other, Rational):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def __repr__(self):
        terms = [f"{c}*z^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return f"CycElem[{self.n}](" + (" + ".join(terms) or "0") + ")"


def _spread(coeffs: Sequence, c: int, n: int) -> list:
    buckets = [0] * n
    for k, a in enumerate(coeffs):
        if a:
            buckets[(k * c) % n] += a
    return buckets


# ---------------------------------------------------------------------------
# Q(zeta_n)(zeta_l)


class TensorElem:
    """Element of Q(zeta_n, zeta_l), coordinates over Q(zeta_n) in basis zeta_l^1..zeta_l^(l-1)."""

    __slots__ = ("ell", "n", "coeffs")

    def __init__(self, ell: int, n: int, coeffs: Sequence[CycElem]):
        if len(coeffs) != ell - 1:
            raise ValueError("need l-1 coordinates")
        self.ell = ell
        self.n = n
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, ell: int, n: int) -> "TensorElem":
        z = CycElem.zero(n)
        return cls(ell, n, [z] * (ell - 1))

    @classmethod
    def from_cyc(cls, ell: int, x: CycElem) -> "TensorElem":
        # x = x * 1 = -x * (zeta_l + ... + zeta_l^(l-1))
        return cls(ell, x.n, [-x] * (ell - 1))

    @classmethod
    def from_buckets(cls, ell: int, n: int, buckets: Sequence) -> "TensorElem":
        """Sum of buckets[k] * zeta_l^k for 0 <= k < l, buckets in Q(zeta_n) or Q."""
        base = buckets[0] if buckets[0] is not None else 0
        coords = []
        for k in range(1, ell):
            v = buckets[k] - base
            coords.append(v if isinstance(v, CycElem) else CycElem.from_rational(n, v))
        return cls(ell, n, coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def _coerce(self, other):
        if isinstance(other, TensorElem):
            return other
        if isinstance(other, CycElem):
            return TensorElem.from_cyc(self.ell, other)
        if isinstance(other, Rational):
            return TensorElem.from_cyc(self.ell, CycElem.from_rational(self.n, other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TensorElem(self.ell, self.n, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TensorElem(self.ell, self.n, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TensorElem(self.ell, self.n, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (CycElem, int, Fraction)):
            return TensorElem(self.ell, self.n, [a * other for a in self.coeffs])
        if not isinstance(other, TensorElem):
            return NotImplemented
        ell = self.ell
        buckets = [CycElem.zero(self.n) for _ in range(ell)]
        for i, a in enumerate(self.coeffs, start=1):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs, start=1):
                if not b.is_zero():
                    k = (i + j) % ell
                    buckets[k] = buckets[k] + a * b
        return TensorElem.from_buckets(ell, self.n, buckets)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers unsupported")
        result = TensorElem.from_cyc(self.ell, CycElem.one(self.n))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def galois_ell(self, c: int) -> "TensorElem":
        """zeta_l -> zeta_l^c."""
        coords = [None] * (self.ell - 1)
        for i, a in enumerate(self.coeffs, start=1):
            coords[(i * c) % self.ell - 1] = a
        return TensorElem(self.ell, self.n, coords)

    def galois_n(self, c: int) -> "TensorElem":
        """zeta_n -> zeta_n^c."""
        return TensorElem(self.ell, self.n, [a.galois(c) for a in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, TensorElem):
            return (self.ell, self.n, self.coeffs) == (other.ell, other.n, other.coeffs)
        return NotImplemented

    def __hash__(self):
        return hash((self.ell, self.n, self.coeffs))

    def __repr__(self):
        return f"TensorElem[{self.ell},{self.n}]({list(self.coeffs)})"


class DescentError(ValueError):
    pass


def tensor_descend(x: TensorElem) -> CycElem:
    """Return x as an element of Q(zeta_n); raises unless x is fixed by Gal(Q(zeta_l)/Q)."""
    first = x.coeffs[0]
    if any(c != first for c in x.coeffs[1:]):
        raise DescentError("element is not invariant under zeta_l automorphisms")
    return -first


def galois_apply(x, c: int):
    """zeta_n -> zeta_n^c on CycElem, TensorElem or a LaurentSeries over them."""
    if isinstance(x, CycElem):
        return x.galois(c)
    if isinstance(x, TensorElem):
        return x.galois_n(c)
    if hasattr(x, "map_coeffs"):
        return x.map_coeffs(lambda a: a.galois(c))
    raise TypeError(type(x))


def embed(x: CycElem, n_big: int) -> CycElem:
    """Embed Q(zeta_n) into Q(zeta_N) for n | N via zeta_n -> zeta_N^(N/n)."""
    if n_big % x.n:
        raise ValueError("n must divide the target order")
    step = n_big // x.n
    buckets = [0] * n_big
    for k, a in enumerate(x.coeffs):
        buckets[k * step] += a
    return CycElem.from_buckets(n_big, buckets)


# ---------------------------------------------------------------------------
# F_p[zeta_n] = F_p[X]/(h) with h = Phi_n mod p or one of its factors


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


class FpCycRing:
    """F_p[X]/(h) where h divides Phi_n mod p; X plays the role of zeta_n."""

    def __init__(self, p: int, n: int, modulus: Sequence[int] | None = None):
        if modulus is None:
            modulus = [c % p for c in cyclotomic_poly(n)]
        modulus = [c % p for c in modulus]
        if modulus[-1] != 1:
            inv = pow(modulus[-1], -1, p)
            modulus = [c * inv % p for c in modulus]
        self.p = p
        self.n = n
        self.modulus = tuple(modulus)
        self.d = len(modulus) - 1
        d = self.d
        rows = []
        cur = [0] * d
        if d:
            cur[0] = 1
        for _ in range(max(n, 2 * d - 1)):
            rows.append(tuple(cur))
            if not d:
                continue
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(d):
                    cur[i] = (cur[i] - top * modulus[i]) % p
        self._rows = rows

    def __eq__(self, other):
        return isinstance(other, FpCycRing) and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def elem(self, coeffs: Sequence[int]) -> "FpCycElem":
        c = [x % self.p for x in coeffs]
        if len(c) > self.d:
            c = self._reduce(c)
        c += [0] * (self.d - len(c))
        return FpCycElem(self, tuple(c))

    def scalar(self, x: int) -> "FpCycElem":
        c = [0] * self.d
        if self.d:
            c[0] = x % self.p
        return FpCycElem(self, tuple(c))

    def zero(self):
        return self.scalar(0)

    def one(self):
        return self.scalar(1)

    def zeta(self, k: int = 1) -> "FpCycElem":
        return FpCycElem(self, self._rows[k % self.n])

    def _reduce(self, vec: list[int]) -> list[int]:
        d, p = self.d, self.p
        if len(vec) <= 2 * d - 1:
            out = vec[:d] + [0] * max(0, d - len(vec))
            for k in range(d, len(vec)):
                c = vec[k]
                if c:
                    row = self._rows[k]
                    for i in range(d):
                        out[i] += c * row[i]
            return [x % p for x in out]
        # long vectors: plain polynomial remainder
        vec = [x % p for x in vec]
        m = self.modulus
        for k in range(len(vec) - 1, d - 1, -1):
            c = vec[k]
            if c:
                for i in range(d + 1):
                    vec[k - d + i] = (vec[k - d + i] - c * m[i]) % p
        return vec[:d]


class FpCycElem:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: FpCycRing, coeffs: tuple[int, ...]):
        self.ring = ring
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, FpCycElem):
            return other
        if isinstance(other, int):
            return self.ring.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.ring.p
        return FpCycElem(self.ring, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return FpCycElem(self.ring, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.ring.p
        return FpCycElem(self.ring, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.ring.p
            return FpCycElem(self.ring, tuple(a * other % p for a in self.coeffs))
        if not isinstance(other, FpCycElem):
            return NotImplemented
        conv = _convolve(self.coeffs, other.coeffs) if self.ring.d else []
        return FpCycElem(self.ring, tuple(self.ring._reduce(conv)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> "FpCycElem":
        """Inverse via extended Euclid in F_p[X]; raises if not a unit."""
        p = self.ring.p
        r0, r1 = list(self.ring.modulus), _poly_trim(list(self.coeffs))
        s0, s1 = [], [1]
        if not r1:
            raise ZeroDivisionError("zero is not invertible")
        while len(r1) > 1:
            inv = pow(r1[-1], -1, p)
            q = [0] * (len(r0) - len(r1) + 1)
            r = list(r0)
            for k in range(len(r) - len(r1), -1, -1):
                c = r[k + len(r1) - 1] * inv % p
                q[k] = c
                if c:
                    for i, b in enumerate(r1):
                        r[k + i] = (r[k + i] - c * b) % p
            r = _poly_trim(r[: len(r1) - 1])
            qs = _convolve(q, s1) if s1 else []
            s = [0] * max(len(s0), len(qs))
            for i, v in enumerate(s0):
                s[i] += v
            for i, v in enumerate(qs):
                s[i] -= v
            s = _poly_trim([v % p for v in s])
            r0, r1, s0, s1 = r1, r, s1, s
            if not r1:
                raise ZeroDivisionError("element is not a unit")
        inv = pow(r1[0], -1, p)
        return self.ring.elem([v * inv for v in s1])

    def __eq__(self, other):
        if isinstance(other, FpCycElem):
            return self.ring == other.ring and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == self.ring.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return f"FpCycElem(p={self.ring.p}, n={self.ring.n}, {list(self.coeffs)})"


def fp_specialize(x: CycElem, ring: FpCycRing) -> FpCycElem:
    """Reduce an element of Z_(p)[zeta_n] into F_p[X]/(h)."""
    p = ring.p
    vals = []
    for c in x.coeffs:
        if isinstance(c, Fraction):
            if c.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by p={p}")
            vals.append(c.numerator * pow(c.denominator, -1, p) % p)
        else:
            vals.append(c % p)
    return ring.elem(vals)


# ---------------------------------------------------------------------------
# coefficient ring descriptors used by Laurent series


class RationalField:
    name = "QQ"
    zero = 0
    one = 1

    def coerce(self, x):
        return _normalize_rational(x)

    @staticmethod
    def is_zero(x) -> bool:
        return x == 0

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class CyclotomicField:
    def __init__(self, n: int):
        self.n = n
        self.name = f"QQ(zeta_{n})"
        self.zero = CycElem.zero(n)
        self.one = CycElem.one(n)

    def coerce(self, x):
        if isinstance(x, CycElem):
            return x
        return CycElem.from_rational(self.n, x)

    @staticmethod
    def is_zero(x) -> bool:
        return x.is_zero()

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.n == self.n

    def __hash__(self):
        return hash(("cyc", self.n))

    def __repr__(self):
        return self.name


class TensorField:
    def __init__(self, ell: int, n: int):
        self.ell = ell
        self.n = n
        self.name = f"QQ(zeta_{n}, zeta_{ell})"
        self.zero = TensorElem.zero(ell, n)
        self.one = TensorElem.from_cyc(ell, CycElem.one(n))

    def coerce(self, x):
        if isinstance(x, TensorElem):
            return x
        if isinstance(x, CycElem):
            return TensorElem.from_cyc(self.ell, x)
        return TensorElem.from_cyc(self.ell, CycElem.from_rational(self.n, x))

    @staticmethod
    def is_zero(x) -> bool:
        return x.is_zero()

    def __eq__(self, other):
        return isinstance(other, TensorField) and (other.ell, other.n) == (self.ell, self.n)

    def __hash__(self):
        return hash(("tensor", self.ell, self.n))

    def __repr__(self):
        return self.name


def ring_of(x):
    if isinstance(x, CycElem):
        return CyclotomicField(x.n)
    if isinstance(x, TensorElem):
        return TensorField(x.ell, x.n)
    return QQ
