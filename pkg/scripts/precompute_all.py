"""Build and verify tables for every prime-power n | l-1 over a range of l."""

import argparse
import time
from dataclasses import dataclass, field
from pathlib import Path

from ellgauss.build import BuildConfig, build_table, verify_table
from ellgauss.gauss import prime_power_parts
from ellgauss.qexp import is_prime
from ellgauss.tables import default_table_dir, table_filename, write_table


@dataclass
class PrecomputeConfig:
    ells: list[int] = field(default_factory=lambda: [5, 7, 11, 13, 17, 19, 23, 29, 31])
    out: Path = field(default_factory=default_table_dir)
    jacobi: bool = True
    verify: bool = True
    star: bool = False
    prec_margin_pct: float = 10.0


def run(cfg: PrecomputeConfig) -> int:
    failed = 0
    for ell in cfg.ells:
        if ell <= 3 or not is_prime(ell):
            print(f"skip l={ell}: not a prime > 3")
            continue
        for n in prime_power_parts(ell - 1):
            rep = build_table(BuildConfig(ell, n, jacobi=cfg.jacobi, prec_margin_pct=cfg.prec_margin_pct))
            size = write_table(rep.table, cfg.out / table_filename(ell, n))
            line = f"l={ell:>2} n={n:>2} basis={rep.table.basis} {size:>9} bytes build {rep.seconds:6.2f}s"
            if cfg.verify:
                tic = time.perf_counter()
                checks = verify_table(rep.table, star=cfg.star)
                bad = [c.name for c in checks if not c.ok]
                failed += len(bad)
                line += f" verify {time.perf_counter() - tic:6.2f}s " + ("ok" if not bad else "FAIL " + ",".join(bad))
            print(line, flush=True)
    return 1 if failed else 0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ells", default="5,7,11,13,17,19,23,29,31")
    ap.add_argument("--out", type=Path, default=default_table_dir())
    ap.add_argument("--no-jacobi", action="store_true")
    ap.add_argument("--no-verify", action="store_true")
    ap.add_argument("--star", action="store_true", help="also check the Fricke-image identity (slow for large l)")
    args = ap.parse_args()
    cfg = PrecomputeConfig(
        ells=[int(x) for x in args.ells.split(",")], out=args.out,
        jacobi=not args.no_jacobi, verify=not args.no_verify, star=args.star,
    )
    raise SystemExit(run(cfg))


if __name__ == "__main__":
    main()
