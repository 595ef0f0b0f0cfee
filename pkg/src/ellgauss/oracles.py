"""Slow reference computations from explicit l-torsion points (tiny p and l only).

Points of the eigenspace ker(phi - lambda) live in E(F_{p^D}) with D the order
of lambda mod l.  From such a point P we form p1 = sum x(aP) and
G = sum chi(a) u(aP), with chi(a) = Z^ind(a) in F_{p^D}[Z]/(h).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import fp
from .fp import pmod, pmul, trim
from .gauss import CharSpec
from .rings import FpCycRing


# ---------------------------------------------------------------------------
# F_{p^D}


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic f of degree D."""
    D = len(f) - 1
    x = [0, 1]
    if fp.ppowmod(x, p ** D, f, p) != trim(pmod(x, f, p)):
        return False
    for r in {q for q in range(2, D + 1) if D % q == 0 and all(q % t for t in range(2, q))}:
        h = fp.psub(fp.ppowmod(x, p ** (D // r), f, p), x, p)
        if len(fp.pgcd(h, f, p)) > 1:
            return False
    return True


def random_irreducible(p: int, D: int, rng: random.Random) -> list[int]:
    if D == 1:
        return [0, 1]
    while True:
        f = [rng.randrange(p) for _ in range(D)] + [1]
        if is_irreducible(f, p):
            return f


class ExtField:
    def __init__(self, p: int, D: int, seed: int = 0):
        self.p, self.D = p, D
        self.rng = random.Random(seed)
        self.mod = random_irreducible(p, D, self.rng)
        self.q = p ** D

    def norm(self, a):
        return tuple(trim(pmod(list(a), self.mod, self.p)))

    def add(self, a, b):
        return tuple(fp.padd(list(a), list(b), self.p))

    def sub(self, a, b):
        return tuple(fp.psub(list(a), list(b), self.p))

    def mul(self, a, b):
        return tuple(pmod(pmul(list(a), list(b), self.p), self.mod, self.p))

    def pow(self, a, e):
        return tuple(fp.ppowmod(list(a), e, self.mod, self.p)) if a else ()

    def inv(self, a):
        if not a:
            raise ZeroDivisionError
        return self.pow(a, self.q - 2)

    def const(self, c):
        return self.norm([c % self.p])

    def random(self):
        return self.norm([self.rng.randrange(self.p) for _ in range(self.D)])

    def sqrt(self, a):
        """Tonelli-Shanks in F_q; None for non-squares."""
        if not a:
            return ()
        q = self.q
        one = self.const(1)
        if self.pow(a, (q - 1) // 2) != one:
            return None
        Q, S = q - 1, 0
        while Q % 2 == 0:
            Q //= 2
            S += 1
        while True:
            z = self.random()
            if z and self.pow(z, (q - 1) // 2) != one:
                break
        M, c, t, R = S, self.pow(z, Q), self.pow(a, Q), self.pow(a, (Q + 1) // 2)
        while t != one:
            i, t2 = 0, t
            while t2 != one:
                t2 = self.mul(t2, t2)
                i += 1
            b = c
            for _ in range(M - i - 1):
                b = self.mul(b, b)
            M, c, t, R = i, self.mul(b, b), self.mul(t, self.mul(b, b)), self.mul(R, b)
        return R


# ---------------------------------------------------------------------------
# curve arithmetic (affine, None = point at infinity)


class ExtCurve:
    def __init__(self, p: int, a: int, b: int, D: int, seed: int = 0):
        self.F = ExtField(p, D, seed)
        self.a = self.F.const(a)
        self.b = self.F.const(b)

    def rhs(self, x):
        F = self.F
        return F.add(F.add(F.mul(F.mul(x, x), x), F.mul(self.a, x)), self.b)

    def add(self, P, Q):
        F = self.F
        if P is None:
            return Q
        if Q is None:
            return P
        (x1, y1), (x2, y2) = P, Q
        if x1 == x2:
            if F.add(y1, y2) == ():
                return None
            lam = F.mul(F.add(F.mul(F.const(3), F.mul(x1, x1)), self.a), F.inv(F.mul(F.const(2), y1)))
        else:
            lam = F.mul(F.sub(y2, y1), F.inv(F.sub(x2, x1)))
        x3 = F.sub(F.sub(F.mul(lam, lam), x1), x2)
        return x3, F.sub(F.mul(lam, F.sub(x1, x3)), y1)

    def neg(self, P):
        return None if P is None else (P[0], self.F.sub((), P[1]))

    def mul(self, k: int, P):
        if k < 0:
            return self.mul(-k, self.neg(P))
        R = None
        while k:
            if k & 1:
                R = self.add(R, P)
            k >>= 1
            if k:
                P = self.add(P, P)
        return R

    def frobenius(self, P):
        if P is None:
            return None
        p = self.F.p
        return self.F.pow(P[0], p), self.F.pow(P[1], p)

    def random_point(self):
        while True:
            x = self.F.random()
            y = self.F.sqrt(self.rhs(x))
            if y is not None:
                return x, y


def _lucas_trace(t: int, p: int, D: int) -> int:
    s0, s1 = 2, t
    for _ in range(D - 1):
        s0, s1 = s1, t * s1 - p * s0
    return s1 if D >= 1 else s0


def eigenvalues(t: int, p: int, ell: int) -> list[int]:
    return sorted({x for x in range(1, ell) if (x * x - t * x + p) % ell == 0})


@dataclass
class KernelPoint:
    curve: ExtCurve
    ell: int
    lam: int
    P: tuple


def kernel_point(p: int, a: int, b: int, t: int, ell: int, lam: int, seed: int = 0, tries: int = 50) -> KernelPoint:
    """A nonzero point with phi(P) = lam P."""
    mus = [m for m in eigenvalues(t, p, ell) if m != lam]
    mu = mus[0] if mus else None
    D = 1
    while pow(lam, D, ell) != 1:
        D += 1
    E = ExtCurve(p, a, b, D, seed)
    N = p ** D + 1 - _lucas_trace(t, p, D)
    if N % ell:
        raise ArithmeticError("l does not divide #E(F_p^D)")
    while N % ell == 0:
        N //= ell
    for _ in range(tries):
        P = E.mul(N, E.random_point())
        if P is None:
            continue
        while E.mul(ell, P) is not None:
            P = E.mul(ell, P)
        if mu is not None:
            P = E.add(E.frobenius(P), E.neg(E.mul(mu, P)))
            if P is None:
                continue
        if E.frobenius(P) == E.mul(lam, P):
            return KernelPoint(E, ell, lam, P)
    raise ArithmeticError("no kernel point found")


def kernel_p1(k: KernelPoint) -> int:
    """sum_{a=1}^{l-1} x(aP), an element of F_p."""
    E, F = k.curve, k.curve.F
    acc = ()
    Q = None
    for _ in range(1, k.ell):
        Q = E.add(Q, k.P)
        acc = F.add(acc, Q[0])
    if len(acc) > 1:
        raise ArithmeticError("kernel x-sum is not in F_p")
    return acc[0] if acc else 0


def kernel_gauss_power(k: KernelPoint, spec: CharSpec, ring: FpCycRing, power: int | None = None,
                       twist: int | None = None) -> list[int]:
    """G^power (default n), or G^k G_{chi^-k} when twist=k, as F_p-coordinates in ring."""
    E, F = k.curve, k.curve.F
    d = ring.d
    coord = 0 if spec.kind == "x" else 1

    def gauss(c):
        vec = [()] * d
        Q = None
        for a in range(1, k.ell):
            Q = E.add(Q, k.P)
            row = ring.zeta(c * spec.chi_exp(a)).coeffs
            for i, r in enumerate(row):
                if r:
                    vec[i] = F.add(vec[i], F.mul(F.const(r), Q[coord]))
        return vec

    def vmul(u, w):
        out = [()] * (2 * d - 1)
        for i, x in enumerate(u):
            for jj, y in enumerate(w):
                out[i + jj] = F.add(out[i + jj], F.mul(x, y))
        # reduce Z^e for e >= d using the ring's monic modulus
        mod = ring.modulus
        for e in range(len(out) - 1, d - 1, -1):
            c = out[e]
            if c:
                for i in range(d):
                    if mod[i]:
                        out[e - d + i] = F.sub(out[e - d + i], F.mul(c, F.const(mod[i])))
                out[e] = ()
        return out[:d]

    g = gauss(1)
    if twist is None:
        e = spec.n if power is None else power
        acc = [F.const(1)] + [()] * (d - 1)
        for _ in range(e):
            acc = vmul(acc, g)
    else:
        acc = [F.const(1)] + [()] * (d - 1)
        for _ in range(twist):
            acc = vmul(acc, g)
        acc = vmul(acc, gauss(-twist))
    out = []
    for c in acc:
        if len(c) > 1:
            raise ArithmeticError("Gauss power is not defined over F_p[zeta_n]")
        out.append(c[0] if c else 0)
    return out
