"""Point counting for E: y^2 = x^3 + a x + b over F_p from precomputed tables.

Per Elkies prime l the tables give G(E)^n and the Jacobi sums in F_p[zeta_n];
their Frobenius twist reveals the index of the eigenvalue lambda mod n.  The
indices for the prime-power parts n of l-1 combine to lambda, hence t mod l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .fp import cyclotomic_factor_mod_p, root_multiplicity, roots_mod_p
from .gauss import prime_power_parts
from .modpoly import BivariatePoly
from .qexp import is_prime
from .rings import CycElem, FpCycElem, FpCycRing, euler_phi
from .tables import EllTable


class CurveError(ValueError):
    pass


class DegenerateRoot(ArithmeticError):
    """A denominator vanished at this root; another root may still work."""


class TableCurveMismatch(ArithmeticError):
    pass


class InsufficientCoverage(ArithmeticError):
    def __init__(self, modulus: int, needed: float, skipped: dict):
        super().__init__(f"Elkies modulus {modulus} does not exceed 4 sqrt(p) = {needed:.1f}; skipped {skipped}")
        self.modulus = modulus
        self.skipped = skipped


@dataclass(frozen=True)
class CurveContext:
    p: int
    a: int
    b: int

    def __post_init__(self):
        p = self.p
        if p <= 3 or not is_prime(p):
            raise CurveError(f"p={p} must be a prime > 3")
        object.__setattr__(self, "a", self.a % p)
        object.__setattr__(self, "b", self.b % p)
        if self.disc == 0:
            raise CurveError("singular curve")
        if self.a == 0 or self.b == 0:
            raise CurveError("j(E) in {0, 1728} is not supported")

    @property
    def disc(self) -> int:
        return (4 * self.a ** 3 + 27 * self.b ** 2) % self.p

    @property
    def delta(self) -> int:
        return -16 * self.disc % self.p

    @property
    def j(self) -> int:
        p = self.p
        return 1728 * 4 * pow(self.a, 3, p) * pow(self.disc, -1, p) % p


def _rmod(c, p: int) -> int:
    if isinstance(c, Fraction):
        if c.denominator % p == 0:
            raise ZeroDivisionError(f"table denominator divisible by p={p}")
        return c.numerator * pow(c.denominator, -1, p) % p
    return int(c) % p


def _powers(x: int, top: int, p: int) -> list[int]:
    out = [1]
    for _ in range(top):
        out.append(out[-1] * x % p)
    return out


def eval_poly_mod_p(poly: BivariatePoly, x: int, y: int, p: int, ring: FpCycRing | None = None):
    """poly(x, y) in F_p, or in F_p[zeta_n] when the coefficients are cyclotomic."""
    if not poly.coeffs:
        return ring.zero() if ring is not None else 0
    xp = _powers(x, poly.deg_x, p)
    yp = _powers(y, poly.deg_y, p)
    if ring is None:
        return sum(_rmod(c, p) * xp[i] * yp[k] for (i, k), c in poly.coeffs.items()) % p
    acc = [0] * euler_phi(ring.n)
    for (i, k), c in poly.coeffs.items():
        w = xp[i] * yp[k] % p
        if isinstance(c, CycElem):
            for t, x in enumerate(c.coeffs):
                acc[t] += _rmod(x, p) * w
        else:
            acc[0] += _rmod(c, p) * w
    return ring.elem([v % p for v in acc])


# ---------------------------------------------------------------------------
# Elkies test


@dataclass
class ElkiesInfo:
    ell: int
    roots: list[int]
    multiplicities: list[int]

    @property
    def is_elkies(self) -> bool:
        return bool(self.roots)

    @property
    def double_root(self) -> bool:
        return any(m > 1 for m in self.multiplicities)


def is_elkies(E: CurveContext, ell: int, poly: BivariatePoly, seed: int = 0) -> ElkiesInfo:
    f = poly.specialize_y_mod_p(E.j, E.p)
    roots = roots_mod_p(f, E.p, seed)
    return ElkiesInfo(ell, roots, [root_multiplicity(f, r, E.p) for r in roots])


# ---------------------------------------------------------------------------
# values attached to one root


def p1_on_curve(E: CurveContext, ell: int, s: int, m_val: int, M: BivariatePoly) -> int:
    """Sum of the x-coordinates of the nonzero kernel points of the l-isogeny given by m_l(E).

    From p1 = -(l/s) D(m)/m, D(j) = -j E6/E4 and the implicit derivative of
    M_l(m, j) = 0, with E4 = -48 a and E6 = 864 b.
    """
    p = E.p
    mx = eval_poly_mod_p(M.diff_x(), m_val, E.j, p)
    my = eval_poly_mod_p(M.diff_y(), m_val, E.j, p)
    den = s * E.a * m_val * mx % p
    if den == 0:
        raise DegenerateRoot("dM/dX vanishes at m_l(E)")
    return 18 * ell * E.b * E.j * my * pow(den, -1, p) % p


def resolve_g_and_mell(E: CurveContext, t: EllTable, a_val: int, seed: int = 0) -> tuple[int, int]:
    """(g(E), m_l(E)) for the subgroup attached to the root a_l(E)."""
    p = E.p
    ay = eval_poly_mod_p(t.a_poly.diff_y(), a_val, E.j, p)
    if ay == 0:
        raise DegenerateRoot("dA/dY vanishes at a_l(E)")
    g2 = eval_poly_mod_p(t.g2, a_val, E.j, p) * pow(ay, -1, p) % p
    ls = pow(t.ell, t.s, p)
    matches = []
    for m in roots_mod_p(t.m_poly.specialize_y_mod_p(E.j, p), p, seed):
        if m == 0:
            continue
        g = (ls * pow(m, -1, p) - m) % p
        if g * g % p == g2:
            matches.append((g, m))
    if len(matches) != 1:
        raise DegenerateRoot(f"{len(matches)} roots of M_l(X, j(E)) fit g(E)^2")
    return matches[0]


@dataclass
class RootData:
    ell: int
    root: int
    m: int
    g: int | None
    dy: int  # dM/dY(m, j) or dA/dY(a, j)
    p1: int | None


def root_data(E: CurveContext, t: EllTable, root: int, need_p1: bool = True) -> RootData:
    p = E.p
    if t.basis == "a":
        g, m = resolve_g_and_mell(E, t, root)
        if g == 0:
            raise DegenerateRoot("g(E) = 0")
        dy = eval_poly_mod_p(t.a_poly.diff_y(), root, E.j, p)
    else:
        g, m = None, root
        if m == 0:
            raise DegenerateRoot("m_l(E) = 0")
        dy = eval_poly_mod_p(t.m_poly.diff_y(), m, E.j, p)
    if dy == 0:
        raise DegenerateRoot("dY of the modular polynomial vanishes")
    p1 = p1_on_curve(E, t.ell, t.s, m, t.m_poly) if need_p1 else None
    return RootData(t.ell, root, m, g, dy, p1)


def fp_ring(p: int, n: int, fast: bool = True) -> FpCycRing:
    """F_p[zeta_n]; with fast=True modulo one irreducible factor of Phi_n."""
    if fast:
        return FpCycRing(p, n, cyclotomic_factor_mod_p(n, p))
    return FpCycRing(p, n)


def evaluate_table(E: CurveContext, t: EllTable, entry, rd: RootData, ring: FpCycRing) -> FpCycElem:
    """G(E)^n (tau entry) or G(E)^k G_{chi^-k}(E) (Jacobi entry) in F_p[zeta_n]."""
    p = E.p
    x = rd.root
    if t.basis == "m":
        val = eval_poly_mod_p(entry.q, x, E.j, p, ring)
        if entry.k_shift:
            val = val * pow(pow(x, entry.k_shift, p), -1, p)
    else:
        val = eval_poly_mod_p(entry.r1, x, E.j, p, ring)
        if entry.r2.coeffs:
            val = val + eval_poly_mod_p(entry.r2, x, E.j, p, ring) * pow(rd.g, -1, p)
    scale = pow(rd.dy, -1, p) * pow(E.delta, entry.e_delta, p) % p
    if entry.r:
        if not rd.p1:
            raise DegenerateRoot("p1(E) = 0")
        scale = scale * pow(rd.p1, -entry.r, p) % p
    return val * scale


def eigenvalue_index(E: CurveContext, t: EllTable, rd: RootData, ring: FpCycRing | None = None) -> int:
    """ind(lambda) mod n for the eigenvalue on the subgroup attached to rd."""
    n, p = t.n, E.p
    ring = ring or fp_ring(p, n)
    q, m = divmod(p, n)
    gn = evaluate_table(E, t, t.tau, rd, ring)
    if gn.is_zero():
        raise TableCurveMismatch("G(E)^n = 0")
    if m == 1:
        val = gn ** q
    else:
        mp = n - m
        if mp not in t.jacobi:
            raise TableCurveMismatch(f"table lacks the Jacobi sum for k={mp}")
        jac = evaluate_table(E, t, t.jacobi[mp], rd, ring)
        if jac.is_zero():
            raise TableCurveMismatch("Jacobi sum vanishes")
        val = gn ** (q + 1) * jac.inverse()
    for jj in range(n):
        if val == ring.zeta(jj):
            return (-jj * pow(m, -1, n)) % n
    raise TableCurveMismatch(f"no power of zeta_{n} matches")


# ---------------------------------------------------------------------------
# t mod l and the full count


@dataclass
class EigenvalueWitness:
    ell: int
    indices: list[tuple[int, int]]
    lam: int
    t: int
    root: int
    double_root: bool = False
    max_degree: int = 0

    def consistent(self, c: int) -> bool:
        lam_ind = {pow(c, i, self.ell): i for i in range(self.ell - 1)}[self.lam]
        return all(lam_ind % n == ind for n, ind in self.indices)


def crt(residues: list[tuple[int, int]]) -> tuple[int, int]:
    """Combine (r_i mod m_i) for pairwise coprime m_i."""
    x, mod = 0, 1
    for r, m in residues:
        x += mod * ((r - x) * pow(mod, -1, m) % m)
        mod *= m
    return x % mod, mod


def tables_for(tables: dict, ell: int) -> list[EllTable]:
    missing = [n for n in prime_power_parts(ell - 1) if (ell, n) not in tables]
    if missing:
        raise KeyError(f"no tables for l={ell}, n in {missing}")
    return [tables[(ell, n)] for n in prime_power_parts(ell - 1)]


def trace_mod_ell(E: CurveContext, ell: int, tables: dict, fast: bool = True) -> EigenvalueWitness | None:
    """t mod l, or None for an Atkin prime; DegenerateRoot when no root is usable."""
    tabs = tables_for(tables, ell)
    if E.p == ell or any(E.p % t.n == 0 for t in tabs):
        raise DegenerateRoot("p divides l(l-1)")
    base = tabs[0]
    poly = base.a_poly if base.basis == "a" else base.m_poly
    info = is_elkies(E, ell, poly)
    if not info.is_elkies:
        return None
    rings = {t.n: fp_ring(E.p, t.n, fast) for t in tabs}
    need_p1 = any(e.r for t in tabs for e in t.entries())
    errors = []
    for root in info.roots:
        try:
            rd = root_data(E, base, root, need_p1)
            inds = [(eigenvalue_index(E, t, rd, rings[t.n]), t.n) for t in tabs]
        except (DegenerateRoot, TableCurveMismatch, ZeroDivisionError) as exc:
            errors.append(f"root {root}: {exc}")
            continue
        ind, _ = crt(inds)
        lam = pow(base.c, ind, ell)
        tr = (lam + E.p * pow(lam, -1, ell)) % ell
        return EigenvalueWitness(ell, [(n, i) for i, n in inds], lam, tr, root, info.double_root,
                                 max(r.d for r in rings.values()))
    raise DegenerateRoot(f"degenerate curve for l={ell}: " + "; ".join(errors))


@dataclass
class CountResult:
    p: int
    count: int
    t: int
    modulus: int
    witnesses: list[EigenvalueWitness] = field(default_factory=list)
    skipped: dict = field(default_factory=dict)


def count_points(E: CurveContext, ells: list[int], tables: dict, fast: bool = True) -> CountResult:
    residues = []
    witnesses = []
    skipped = {}
    for ell in ells:
        try:
            w = trace_mod_ell(E, ell, tables, fast)
        except KeyError as exc:
            skipped[ell] = f"missing tables ({exc.args[0]})"
            continue
        except DegenerateRoot as exc:
            skipped[ell] = str(exc)
            continue
        if w is None:
            skipped[ell] = "Atkin prime"
            continue
        witnesses.append(w)
        residues.append((w.t, ell))
    t, mod = crt(residues)
    need = 4 * math.sqrt(E.p)
    if mod <= need:
        raise InsufficientCoverage(mod, need, skipped)
    if t > mod // 2:
        t -= mod
    return CountResult(E.p, E.p + 1 - t, t, mod, witnesses, skipped)


NAIVE_LIMIT = 10 ** 7


def naive_count(E) -> int:
    """1 + sum over x of the number of y with y^2 = x^3 + a x + b (E needs p, a, b)."""
    return naive_count_params(E.p, E.a, E.b)


def naive_count_params(p: int, a: int, b: int) -> int:
    if p > NAIVE_LIMIT:
        raise CurveError(f"naive count limited to p <= {NAIVE_LIMIT}")
    if (4 * a ** 3 + 27 * b ** 2) % p == 0:
        raise CurveError("singular curve")
    sq = [0] * p
    for y in range(p):
        sq[y * y % p] += 1
    return 1 + sum(sq[(x * x * x + a * x + b) % p] for x in range(p))


def naive_trace(E: CurveContext) -> int:
    return E.p + 1 - naive_count(E)
