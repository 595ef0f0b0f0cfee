"""Operation counts, build times and table sizes as l grows, against the (v + e) n l^2 model."""

import argparse
import time
from dataclasses import dataclass, field

from ellgauss.build import BuildConfig, build_table
from ellgauss.gauss import CharSpec, OpCounter, descended_gauss_product, tau_exponents
from ellgauss.qexp import ell_params
from ellgauss.tables import save_table


@dataclass
class GrowthConfig:
    pairs: list[tuple[int, int]] = field(default_factory=lambda: [(7, 3), (11, 5), (13, 3), (19, 3), (23, 11), (31, 5)])
    jacobi: bool = False


def run(cfg: GrowthConfig):
    print(f"{'l':>3} {'n':>3} {'basis':>5} {'prec':>5} {'coeff_ops':>10} {'ops/(l*prec)':>12} "
          f"{'build s':>8} {'bytes':>9} {'bytes/model':>11}")
    for ell, n in cfg.pairs:
        _, v = ell_params(ell)
        _, e = tau_exponents(n)
        prec = ell * (v + e)
        ctr = OpCounter()
        descended_gauss_product(CharSpec(ell, n), prec, ctr)
        tic = time.perf_counter()
        t = build_table(BuildConfig(ell, n, jacobi=cfg.jacobi)).table
        dt = time.perf_counter() - tic
        size = len(save_table(t))
        model = (v + e) * n * ell ** 2
        print(f"{ell:>3} {n:>3} {t.basis:>5} {prec:>5} {ctr['coeff_ops']:>10} {ctr['coeff_ops'] / (ell * prec):>12.3f} "
              f"{dt:>8.2f} {size:>9} {size / model:>11.2f}", flush=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--jacobi", action="store_true")
    args = ap.parse_args()
    run(GrowthConfig(jacobi=args.jacobi))


if __name__ == "__main__":
    main()
