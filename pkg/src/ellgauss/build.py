"""Precomputation of per-(l, n) tables and their residual checks."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .gauss import (
    CharSpec,
    jacobi_exponents,
    jacobi_ks,
    jacobi_series_batch,
    jacobi_star_series,
    tau_exponents,
    tau_series,
    tau_star_series,
)
from .modpoly import BivariatePoly, a_ell_order, modular_polynomial, select_hecke_prime
from .qexp import a_ell_series, ell_params, j_series, m_ell_series, m_ell_star_series, star_image
from .ratexpr import (
    eliminate_distinct_orders,
    eliminate_paired,
    reconstruction_residual,
    wl_decompose,
)
from .series import LaurentSeries, series_inv, series_mul, substitute_q_power
from .tables import EllTable, ExpressionEntry


@dataclass
class BuildConfig:
    ell: int
    n: int
    jacobi: bool = True
    prec_margin_pct: float = 10.0
    min_margin: int = 4
    basis: str | None = None  # None: a-basis whenever v_a > 0


@dataclass
class BuildReport:
    table: EllTable
    seconds: float
    timings: dict = field(default_factory=dict)


def choose_basis(ell: int) -> tuple[str, int, int | None]:
    """(basis, v_a, Hecke prime); falls back to m_l when a_l has no pole."""
    r = select_hecke_prime(ell)
    v_a = a_ell_order(ell)
    return ("a" if v_a > 0 else "m"), v_a, r


def _margin(cfg: BuildConfig, base: int) -> int:
    return max(cfg.min_margin, math.ceil(base * cfg.prec_margin_pct / 100))


# ---------------------------------------------------------------------------
# series providers


class _SeriesSource:
    """tau and Jacobi series of one character at a requested precision."""

    def __init__(self, spec: CharSpec):
        self.spec = spec

    def exponents(self, k):
        return tau_exponents(self.spec.n) if k is None else jacobi_exponents(self.spec.n, k)

    def series(self, k, prec: int) -> tuple[LaurentSeries, int]:
        if k is None:
            t = tau_series(self.spec, prec)
            return t.series, t.multiplier
        (t,) = jacobi_series_batch(self.spec, prec, ks=[k])
        return t.series, t.multiplier

    def star(self, k, prec: int) -> LaurentSeries:
        if k is None:
            return tau_star_series(self.spec, prec)
        return jacobi_star_series(self.spec, k, prec)


# ---------------------------------------------------------------------------
# m_l basis


def m_basis_prec(ell: int, e_delta: int) -> int:
    _, v = ell_params(ell)
    return (v + e_delta) * ell


def _m_lhs(src: _SeriesSource, k, M: BivariatePoly, P: int):
    """f * dM/dY(m, j) to O(q^P) together with the m, j series used."""
    ell = src.spec.ell
    _, v = ell_params(ell)
    _, e = src.exponents(k)
    m = m_ell_series(ell, P + e + 2 * v + 4)
    j = j_series(P + e + v + 4)
    f, mult = src.series(k, P + v + 4)
    lhs = series_mul(f, M.diff_y().evaluate_series(m, j)).truncate(P)
    return lhs, m, j, mult


def _build_m_entry(src: _SeriesSource, k, M: BivariatePoly, cfg: BuildConfig) -> ExpressionEntry:
    ell = src.spec.ell
    _, v = ell_params(ell)
    r, e = src.exponents(k)
    base = m_basis_prec(ell, e)
    P = base + _margin(cfg, base)
    lhs, m, j, mult = _m_lhs(src, k, M, P)
    res = eliminate_distinct_orders(lhs, m, j, v, P)
    return ExpressionEntry(k=k, r=r, e_delta=e, multiplier=mult, prec=P, q=res.poly, k_shift=res.k_shift)


# ---------------------------------------------------------------------------
# a_l basis


@dataclass
class _ABasisSeries:
    a: LaurentSeries
    j: LaurentSeries
    jl: LaurentSeries
    g: LaurentSeries


def _a_series(ell: int, hecke_r: int, prec: int) -> _ABasisSeries:
    j = j_series(prec)
    jl = substitute_q_power(j_series(prec // ell + 3), ell)
    g = m_ell_star_series(ell, prec) - m_ell_series(ell, prec)
    return _ABasisSeries(a_ell_series(ell, hecke_r, prec), j, jl, g)


def _a_precisions(ell: int, v_a: int, margin: int) -> tuple[int, int]:
    """(series precision of f, f*) and the extra headroom for a, j."""
    _, vm = ell_params(ell)
    pf = margin + max((ell + 1) * v_a, (2 * v_a - 1) * ell) + 2
    return pf + vm + 2, 2 * v_a * ell + (ell + 1) * v_a + 4


def _build_a_entry(src: _SeriesSource, k, A: BivariatePoly, v_a: int, hecke_r: int,
                   cfg: BuildConfig) -> ExpressionEntry:
    ell = src.spec.ell
    _, vm = ell_params(ell)
    r, e = src.exponents(k)
    base = (ell + 1) * v_a + ell * e
    margin = _margin(cfg, base)
    pt, head = _a_precisions(ell, v_a, margin)
    f, mult = src.series(k, pt)
    fs = src.star(k, pt)
    fo = min(f.ord, fs.ord) - vm
    ser = _a_series(ell, hecke_r, margin - fo + head)
    f1, f2 = wl_decompose(f, fs, ser.g)
    res1 = eliminate_paired(f1, ser.a, ser.j, ser.jl, A, v_a, ell, margin)
    res2 = eliminate_paired(f2, ser.a, ser.j, ser.jl, A, v_a, ell, margin)
    return ExpressionEntry(k=k, r=r, e_delta=e, multiplier=mult, prec=margin, r1=res1.poly, r2=res2.poly)


def g_squared_expression(ell: int, A: BivariatePoly, v_a: int, hecke_r: int, margin: int = 4):
    """g^2 dA/dY(a, j) = Q_g(a, j) with g = m* - m."""
    _, vm = ell_params(ell)
    _, head = _a_precisions(ell, v_a, margin)
    ser = _a_series(ell, hecke_r, margin + 2 * vm + head)
    g2 = series_mul(ser.g, ser.g)
    return eliminate_paired(g2, ser.a, ser.j, ser.jl, A, v_a, ell, margin).poly


# ---------------------------------------------------------------------------
# driver


def build_table(cfg: BuildConfig) -> BuildReport:
    t0 = time.perf_counter()
    ell, n = cfg.ell, cfg.n
    spec = CharSpec(ell, n)
    s, v = ell_params(ell)
    basis, v_a, hecke_r = choose_basis(ell)
    if cfg.basis is not None:
        if cfg.basis == "a" and v_a == 0:
            raise ValueError(f"a_l basis unusable for l={ell} (v_a = 0)")
        basis = cfg.basis
    timings = {}
    tic = time.perf_counter()
    M = modular_polynomial(ell, "m")
    A = modular_polynomial(ell, "a") if basis == "a" else None
    timings["modular_polynomials"] = time.perf_counter() - tic
    src = _SeriesSource(spec)
    ks = [None] + (jacobi_ks(n) if cfg.jacobi else [])
    entries = {}
    tic = time.perf_counter()
    for k in ks:
        if basis == "m":
            entries[k] = _build_m_entry(src, k, M, cfg)
        else:
            entries[k] = _build_a_entry(src, k, A, v_a, hecke_r, cfg)
    timings["expressions"] = time.perf_counter() - tic
    g2 = None
    g2_prec = 0
    if basis == "a":
        tic = time.perf_counter()
        g2_prec = _margin(cfg, 2 * ell_params(ell)[1] + (ell + 1) * v_a)
        g2 = g_squared_expression(ell, A, v_a, hecke_r, g2_prec)
        timings["g2"] = time.perf_counter() - tic
    table = EllTable(
        ell=ell, n=n, c=spec.c, basis=basis, s=s, v=v, v_a=v_a, hecke_r=hecke_r,
        m_poly=M, a_poly=A, g2=g2, g2_prec=g2_prec,
        tau=entries[None], jacobi={k: e for k, e in entries.items() if k is not None},
    )
    return BuildReport(table, time.perf_counter() - t0, timings)


# ---------------------------------------------------------------------------
# verification


@dataclass
class ResidualCheck:
    name: str
    ok: bool
    checked_to: int
    detail: str = ""


def _inv_mul(x: LaurentSeries, y: LaurentSeries) -> LaurentSeries:
    return series_mul(x, series_inv(y))


def verify_table(t: EllTable, extra: int = 8, star: bool = True) -> list[ResidualCheck]:
    """Recompute every series beyond the table precision and check the residuals vanish."""
    spec = CharSpec(t.ell, t.n, t.c)
    src = _SeriesSource(spec)
    out = []
    for e in t.entries():
        if t.basis == "m":
            P = e.prec + extra
            lhs, m, j, _ = _m_lhs(src, e.k, t.m_poly, P)
            res = reconstruction_residual(lhs, e.q, m, j, e.k_shift)
            ok = res.is_zero() and res.prec >= P
            out.append(ResidualCheck(e.name, ok, res.prec, "" if ok else f"residual order {res.ord}"))
            if star:
                out.append(_star_check(t, e, src))
        else:
            out.append(_a_check(t, e, src, extra))
    if t.basis == "a":
        out.append(_g2_check(t, extra))
    return out


def _star_check(t: EllTable, e: ExpressionEntry, src: _SeriesSource) -> ResidualCheck:
    """The same expression must hold at the other cusp: f* dM/dY(m*, j*) = m*^-k Q(m*, j*)."""
    top = max((i * t.v + k * t.ell for (i, k) in e.q.coeffs), default=0)
    W = 6
    work = W + top + t.ell * (t.v + e.e_delta) + (t.ell + 1) * t.v + 8
    ms = m_ell_star_series(t.ell, work)
    js = star_image("j", t.ell, work)
    lhs = series_mul(src.star(e.k, work), t.m_poly.diff_y().evaluate_series(ms, js))
    res = reconstruction_residual(lhs, e.q, ms, js, e.k_shift)
    ok = res.is_zero() and res.prec >= W
    return ResidualCheck(e.name + "*", ok, res.prec, "" if ok else f"star residual order {res.ord}")


def _a_check(t: EllTable, e: ExpressionEntry, src: _SeriesSource, extra: int) -> ResidualCheck:
    ell, v_a = t.ell, t.v_a
    W = e.prec + extra
    _, vm = ell_params(ell)
    _, head = _a_precisions(ell, v_a, W)
    f, _ = src.series(e.k, W)
    ser = _a_series(ell, t.hecke_r, W + ell * e.e_delta + 2 * vm + head)
    ay = t.a_poly.diff_y().evaluate_series(ser.a, ser.j)
    num = e.r1.evaluate_series(ser.a, ser.j)
    if e.r2.coeffs:
        num = num + _inv_mul(e.r2.evaluate_series(ser.a, ser.j), ser.g)
    recon = _inv_mul(num, ay)
    if recon.ring != f.ring:
        recon = recon.change_ring(f.ring)
    d = f - recon
    ok = d.is_zero() and d.prec >= W
    return ResidualCheck(e.name, ok, d.prec, "" if ok else f"residual order {d.ord}")


def _g2_check(t: EllTable, extra: int) -> ResidualCheck:
    ell, v_a = t.ell, t.v_a
    W = t.g2_prec + extra
    _, vm = ell_params(ell)
    _, head = _a_precisions(ell, v_a, W)
    ser = _a_series(ell, t.hecke_r, W + 2 * vm + head)
    ay = t.a_poly.diff_y().evaluate_series(ser.a, ser.j)
    d = series_mul(series_mul(ser.g, ser.g), ay) - t.g2.evaluate_series(ser.a, ser.j)
    ok = d.is_zero() and d.prec >= W
    return ResidualCheck("g2", ok, d.prec, "" if ok else f"residual order {d.ord}")


def table_order_structure(t: EllTable) -> bool:
    """Recorded monomials respect the paired-order window (a-basis) or 0 <= k < v (m-basis)."""
    if t.basis == "m":
        return all(0 <= k < t.v and i >= 0 for e in t.entries() for (i, k) in e.q.coeffs)
    polys = [p for e in t.entries() for p in (e.r1, e.r2)] + [t.g2]
    return all(i >= 0 and 0 <= k < 2 * t.v_a for p in polys for (i, k) in p.coeffs)
