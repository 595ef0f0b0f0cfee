from hypothesis import given, settings
from hypothesis import strategies as st

from ellgauss.fp import (
    cyclotomic_factor_mod_p,
    multiplicative_order,
    pdivmod,
    pmul,
    roots_mod_p,
    root_multiplicity,
    sqrt_mod_p,
    trim,
)
from ellgauss.rings import cyclotomic_poly

PRIMES = [3, 5, 7, 11, 13, 29, 101, 103, 1009]


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(PRIMES), st.lists(st.integers(0, 2000), min_size=2, max_size=7), st.integers(0, 5))
def test_roots_vs_brute_force(p, f, seed):
    f = [c % p for c in f]
    if not any(f[1:]):
        f[-1] = 1
    ref = sorted(x for x in range(p) if sum(c * pow(x, i, p) for i, c in enumerate(f)) % p == 0)
    assert roots_mod_p(f, p, seed) == ref


def test_multiplicity():
    p = 13
    f = pmul(pmul([1, 1], [1, 1], p), [3, 1], p)
    assert roots_mod_p(f, p) == [10, 12]
    assert root_multiplicity(f, 12, p) == 2 and root_multiplicity(f, 10, p) == 1


@given(st.sampled_from(PRIMES), st.integers(0, 10 ** 6))
def test_sqrt(p, a):
    r = sqrt_mod_p(a, p)
    squares = {x * x % p for x in range(p)}
    if a % p in squares:
        assert r * r % p == a % p
    else:
        assert r is None


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(3, 7), (4, 7), (5, 11), (8, 17), (9, 37), (7, 29), (16, 97), (5, 101), (4, 103), (3, 5)]))
def test_cyclotomic_factor(np):
    n, p = np
    h = cyclotomic_factor_mod_p(n, p)
    assert len(h) - 1 == multiplicative_order(p, n)
    assert h[-1] == 1
    _, r = pdivmod([c % p for c in cyclotomic_poly(n)], h, p)
    assert trim(r) == []
