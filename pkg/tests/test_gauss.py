import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellgauss.gauss import (
    CharSpec,
    cyclotomic_gauss_sum,
    descended_gauss_product,
    jacobi_exponents,
    jacobi_ks,
    jacobi_series_batch,
    naive_gauss_product,
    prime_power_parts,
    primitive_root,
    tau_exponents,
    tau_series,
)
from ellgauss.rings import CycElem, tensor_descend


def test_prime_power_parts():
    assert prime_power_parts(12) == [4, 3]
    assert prime_power_parts(30) == [2, 3, 5]
    assert prime_power_parts(16) == [16]
    assert prime_power_parts(28) == [4, 7]


def test_primitive_roots():
    assert [primitive_root(p) for p in (5, 7, 11, 13, 17, 23)] == [2, 3, 2, 2, 3, 5]


@given(st.integers(2, 60))
def test_tau_exponent_balance(n):
    r, e = tau_exponents(n)
    w = 2 if n % 2 else 3
    assert 0 <= r < 6 and w * n + 2 * r == 12 * e


@given(st.integers(3, 60))
def test_jacobi_exponent_balance(n):
    for k in jacobi_ks(n):
        r, e = jacobi_exponents(n, k)
        w = 2 if n % 2 else 3
        assert w * (k + 1) + 2 * r == 12 * e


def test_jacobi_ks():
    assert jacobi_ks(8) == [1, 3, 5]
    assert jacobi_ks(9) == [1, 2, 4, 5, 7]
    assert jacobi_ks(2) == []


def test_charspec_validation():
    with pytest.raises(ValueError):
        CharSpec(7, 4)
    with pytest.raises(ValueError):
        CharSpec(7, 1)
    with pytest.raises(ValueError):
        CharSpec(9, 2)
    assert CharSpec(13, 4).kind == "y" and CharSpec(13, 3).kind == "x"


@pytest.mark.parametrize("ell,n", [(5, 4), (7, 3), (7, 6), (13, 4)])
def test_gauss_norm_identity(ell, n):
    spec = CharSpec(ell, n)
    prod = tensor_descend(cyclotomic_gauss_sum(spec, 1) * cyclotomic_gauss_sum(spec, -1))
    sign = -1 if 2 * spec.chi_minus_one() == n else 1
    assert prod == CycElem.from_rational(n, sign * ell)


@pytest.mark.parametrize("ell,n", [(5, 2), (7, 3), (11, 5)])
def test_descended_product_matches_naive(ell, n):
    spec = CharSpec(ell, n)
    assert descended_gauss_product(spec, 8).equals_to_precision(naive_gauss_product(spec, 8))


def test_tau_5_2_vanishes():
    # the quadratic y-sum mod 5 cancels identically, so tau_{5,2} = 0
    assert tau_series(CharSpec(5, 2), 12).series.is_zero()


def test_tau_7_3_leading():
    t = tau_series(CharSpec(7, 3), 3)
    assert t.series.ord == -1
    assert t.series[-1] == CycElem(3, [245, -147])
    assert t.multiplier == 12096


@pytest.mark.parametrize("ell,n", [(7, 3), (13, 4), (11, 5)])
def test_tau_integral_after_multiplier(ell, n):
    t = tau_series(CharSpec(ell, n), 10)
    assert all(c.scale(t.multiplier).is_integral() for c in t.series.coeffs)


def test_jacobi_batch_indices():
    out = jacobi_series_batch(CharSpec(13, 4), 6)
    assert [j.k for j in out] == [1]
    j = out[0]
    assert (j.r, j.e_delta) == jacobi_exponents(4, 1)
