"""Polynomials over F_p as coefficient lists (low to high), root finding, square roots."""

from __future__ import annotations

import random
from math import gcd


def trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return trim([x % p for x in out])


def psub(a, b, p):
    return padd(a, [-x for x in b], p)


def pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([x % p for x in out])


def pdivmod(a, b, p):
    b = trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = [x % p for x in a]
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], trim(a)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv % p
        if c:
            q[k - db] = c
            for i in range(db + 1):
                a[k - db + i] = (a[k - db + i] - c * b[i]) % p
    return trim(q), trim(a[:db])


def pmod(a, b, p):
    return pdivmod(a, b, p)[1]


def monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def pgcd(a, b, p):
    a, b = trim([x % p for x in a]), trim([x % p for x in b])
    while b:
        a, b = b, pmod(a, b, p)
    return monic(a, p)


def ppowmod(base, e, mod, p):
    result = [1]
    base = pmod(base, mod, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = pmod(pmul(base, base, p), mod, p)
    return result


def pderiv(a, p):
    return trim([(i * a[i]) % p for i in range(1, len(a))])


def peval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def _split_linear(h, p, rng):
    """Roots of a squarefree product of distinct linear factors."""
    if len(h) <= 1:
        return []
    if len(h) == 2:
        return [(-h[0]) * pow(h[1], -1, p) % p]
    if p == 2:
        return [x for x in range(2) if peval(h, x, p) == 0]
    while True:
        a = rng.randrange(p)
        t = ppowmod([a, 1], (p - 1) // 2, h, p)
        d = pgcd(psub(t, [1], p), h, p)
        if 1 < len(d) < len(h):
            q, _ = pdivmod(h, d, p)
            return _split_linear(d, p, rng) + _split_linear(monic(q, p), p, rng)


def roots_mod_p(f: list[int], p: int, seed: int = 0) -> list[int]:
    """Distinct roots of f in F_p (sorted)."""
    f = monic(trim([x % p for x in f]), p)
    if len(f) <= 1:
        return []
    xp = ppowmod([0, 1], p, f, p)
    h = pgcd(psub(xp, [0, 1], p), f, p)
    rng = random.Random(seed)
    return sorted(_split_linear(h, p, rng))


def root_multiplicity(f: list[int], r: int, p: int) -> int:
    f = trim([x % p for x in f])
    m = 0
    while f and peval(f, r, p) == 0:
        f, _ = pdivmod(f, [(-r) % p, 1], p)
        m += 1
    return m


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod_p(a: int, p: int) -> int | None:
    """A square root of a mod p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if legendre(a, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def multiplicative_order(a: int, n: int) -> int:
    if gcd(a, n) != 1:
        raise ValueError("not a unit")
    k, x = 1, a % n
    while x != 1 % n:
        x = x * a % n
        k += 1
    return k


def cyclotomic_factor_mod_p(n: int, p: int, seed: int = 0) -> list[int]:
    """One irreducible factor of Phi_n mod p; its degree is ord_n(p)."""
    from .rings import cyclotomic_poly

    f = monic([c % p for c in cyclotomic_poly(n)], p)
    d = multiplicative_order(p, n)
    if d == len(f) - 1:
        return f
    rng = random.Random(seed)
    stack = [f]
    while stack:
        g = stack.pop()
        if len(g) - 1 == d:
            return g
        while True:
            a = [rng.randrange(p) for _ in range(len(g) - 1)]
            a = trim(a)
            if len(a) < 2:
                continue
            if p == 2:
                # trace map for characteristic 2
                t, acc = a, a
                for _ in range(d - 1):
                    t = pmod(pmul(t, t, p), g, p)
                    acc = padd(acc, t, p)
                h = pgcd(acc, g, p)
            else:
                t = ppowmod(a, (p ** d - 1) // 2, g, p)
                h = pgcd(psub(t, [1], p), g, p)
            if 1 < len(h) < len(g):
                q, _ = pdivmod(g, h, p)
                stack.append(h)
                stack.append(monic(q, p))
                break
    raise ArithmeticError("factorization failed")
