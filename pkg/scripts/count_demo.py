"""Count points on random curves with precomputed tables and compare against enumeration."""

import argparse
import random
import time
from dataclasses import dataclass
from pathlib import Path

from ellgauss.counter import CurveContext, CurveError, InsufficientCoverage, count_points, naive_count
from ellgauss.qexp import is_prime
from ellgauss.tables import default_table_dir, load_table_dir


@dataclass
class DemoConfig:
    tables: Path
    curves: int = 20
    p_min: int = 50
    p_max: int = 5000
    seed: int = 1


def random_curve(rng: random.Random, cfg: DemoConfig) -> CurveContext:
    while True:
        p = rng.randrange(cfg.p_min, cfg.p_max)
        if not is_prime(p):
            continue
        try:
            return CurveContext(p, rng.randrange(1, p), rng.randrange(1, p))
        except CurveError:
            pass


def run(cfg: DemoConfig) -> int:
    tables = load_table_dir(cfg.tables)
    ells = sorted({ell for ell, _ in tables})
    print(f"loaded {len(tables)} tables for l in {ells}")
    rng = random.Random(cfg.seed)
    wrong = uncovered = 0
    for _ in range(cfg.curves):
        E = random_curve(rng, cfg)
        tic = time.perf_counter()
        try:
            res = count_points(E, ells, tables)
        except InsufficientCoverage as exc:
            uncovered += 1
            print(f"p={E.p:>5} a={E.a:>5} b={E.b:>5}  not covered ({exc})")
            continue
        dt = time.perf_counter() - tic
        ref = naive_count(E)
        wrong += res.count != ref
        used = ",".join(str(w.ell) for w in res.witnesses)
        print(f"p={E.p:>5} a={E.a:>5} b={E.b:>5}  #E={res.count:>5} naive={ref:>5} "
              f"l used {used:<18} {dt * 1000:7.1f} ms{'  MISMATCH' if res.count != ref else ''}")
    print(f"{cfg.curves - uncovered} counted, {uncovered} uncovered, {wrong} mismatches")
    return 1 if wrong else 0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tables", type=Path, default=default_table_dir())
    ap.add_argument("--curves", type=int, default=20)
    ap.add_argument("--p-max", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    raise SystemExit(run(DemoConfig(args.tables, args.curves, p_max=args.p_max, seed=args.seed)))


if __name__ == "__main__":
    main()
