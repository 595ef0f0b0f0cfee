"""ellgauss command line: precompute, inspect, count, verify, bench."""

from __future__ import annotations

import argparse
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

from .build import BuildConfig, build_table, m_basis_prec, verify_table
from .counter import (
    CurveContext,
    CurveError,
    InsufficientCoverage,
    count_points,
    naive_count,
)
from .gauss import CharSpec, OpCounter, descended_gauss_product, tau_exponents
from .qexp import ell_params
from .rings import CycElem
from .tables import TableError, default_table_dir, load_table_dir, read_table, table_filename, write_table


def _bits(c) -> tuple[int, int]:
    vals = c.coeffs if isinstance(c, CycElem) else (c,)
    num = max(abs(Fraction(x).numerator).bit_length() for x in vals)
    den = max(Fraction(x).denominator.bit_length() for x in vals)
    return num, den


def _poly_stats(name, poly) -> str:
    if poly is None:
        return f"  {name}: -"
    if not poly.coeffs:
        return f"  {name}: 0"
    bits = [_bits(c) for c in poly.coeffs.values()]
    nb = [b[0] for b in bits]
    return (f"  {name}: terms={len(poly.coeffs)} deg_X={poly.deg_x} deg_Y={poly.deg_y} "
            f"height bits max={max(nb)} mean={sum(nb) / len(nb):.1f} denom bits max={max(b[1] for b in bits)}")


def cmd_precompute(args) -> int:
    cfg = BuildConfig(args.ell, args.n, jacobi=args.jacobi, prec_margin_pct=args.prec_margin)
    rep = build_table(cfg)
    out = Path(args.out) if args.out else default_table_dir() / table_filename(args.ell, args.n)
    size = write_table(rep.table, out)
    t = rep.table
    print(f"wrote {out} ({size} bytes) l={t.ell} n={t.n} basis={t.basis} entries={len(t.entries())} "
          f"in {rep.seconds:.2f}s")
    return 0


def cmd_inspect(args) -> int:
    t = read_table(args.file)
    size = Path(args.file).stat().st_size
    print(f"file: {args.file} ({size} bytes)")
    print(f"l={t.ell} n={t.n} basis={t.basis} c={t.c} s={t.s} v={t.v} v_a={t.v_a} hecke_r={t.hecke_r}")
    print(f"coordinate dimension phi(n) = {t.phi_n}")
    print(f"tau multiplier = {t.tau.multiplier}")
    for e in t.entries():
        print(f"{e.name}: r={e.r} e_delta={e.e_delta} prec={e.prec} multiplier={e.multiplier}")
        if t.basis == "m":
            print(_poly_stats("Q", e.q) + f" k_shift={e.k_shift}")
        else:
            print(_poly_stats("R1", e.r1))
            print(_poly_stats("R2", e.r2))
    print(_poly_stats("M_l", t.m_poly))
    if t.basis == "a":
        print(_poly_stats("A_l", t.a_poly))
        print(_poly_stats("g2", t.g2))
    return 0


def cmd_count(args) -> int:
    try:
        E = CurveContext(args.p, args.a, args.b)
    except CurveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    tables = load_table_dir(args.tables or default_table_dir())
    ells = sorted({ell for ell, _ in tables}) if args.ell_list is None else args.ell_list
    try:
        res = count_points(E, ells, tables)
    except InsufficientCoverage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for w in res.witnesses:
        inds = ", ".join(f"{i} mod {n}" for n, i in w.indices)
        flag = " (double root)" if w.double_root else ""
        print(f"l={w.ell}: ind(lambda) = {inds}; lambda = {w.lam}; t = {w.t} mod {w.ell}{flag}")
    for ell, why in sorted(res.skipped.items()):
        print(f"l={ell}: skipped ({why})")
    print(f"t = {res.t} (modulus {res.modulus})")
    print(f"#E(F_{E.p}) = {res.count}")
    if args.verify_naive:
        ref = naive_count(E)
        if ref != res.count:
            print(f"MISMATCH: naive count {ref}", file=sys.stderr)
            return 1
        print(f"naive count agrees: {ref}")
    return 0


def cmd_verify(args) -> int:
    tables = load_table_dir(args.tables or default_table_dir())
    if not tables:
        print("no tables found", file=sys.stderr)
        return 1
    failed = 0
    for (ell, n), t in sorted(tables.items()):
        for chk in verify_table(t):
            status = "ok" if chk.ok else "FAIL"
            failed += not chk.ok
            print(f"l={ell} n={n} {chk.name}: {status} (checked to q^{chk.checked_to}) {chk.detail}".rstrip())
    return 1 if failed else 0


def cmd_bench(args) -> int:
    ell, n = args.ell, args.n
    spec = CharSpec(ell, n)
    _, v = ell_params(ell)
    r, e = tau_exponents(n)
    prec = ell * (e + v + 1)
    print(f"l={ell} n={n} v={v} e_delta={e} r={r} prec(l,n)={prec}")
    rows = []
    for P in (prec, 2 * prec):
        ctr = OpCounter()
        tic = time.perf_counter()
        descended_gauss_product(spec, P, ctr)
        rows.append((P, ctr["coeff_ops"], time.perf_counter() - tic))
        print(f"  descended product to q^{P}: coeff_ops={ctr['coeff_ops']} time={rows[-1][2]:.3f}s")
    (p0, c0, t0), (p1, c1, t1) = rows
    print(f"  measured op exponent in prec: {math.log(c1 / c0, p1 / p0):.2f} (predicted 1.00)")
    if t0 > 0:
        print(f"  measured time exponent in prec: {math.log(t1 / t0, p1 / p0):.2f}")
    tic = time.perf_counter()
    rep = build_table(BuildConfig(ell, n, jacobi=False))
    print(f"  table build (tau only): {rep.seconds:.2f}s basis={rep.table.basis} "
          f"elimination prec={rep.table.tau.prec} (m-basis bound {m_basis_prec(ell, e)})")
    return 0


def _ell_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {s!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellgauss", description="Elliptic Gauss sums and point counting tables")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("precompute", help="build the table for one (l, n)")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--jacobi", action="store_true", help="also store the Jacobi sum expressions")
    p.add_argument("--out", help="output file (default: $ELLGAUSS_TABLE_DIR/ellL_nN.json)")
    p.add_argument("--prec-margin", type=float, default=10.0, metavar="PCT",
                   help="extra series precision in percent (default 10)")
    p.set_defaults(func=cmd_precompute)

    p = sub.add_parser("inspect", help="print a table header and coefficient statistics")
    p.add_argument("file")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("count", help="count points on y^2 = x^3 + a x + b over F_p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--ell-list", type=_ell_list)
    p.add_argument("--tables", help="table directory (default: $ELLGAUSS_TABLE_DIR)")
    p.add_argument("--verify-naive", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", help="recheck all reconstruction residuals")
    p.add_argument("--tables", help="table directory (default: $ELLGAUSS_TABLE_DIR)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="operation counters and timings")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TableError) as exc:
        if isinstance(exc, TableError):
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"math failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
