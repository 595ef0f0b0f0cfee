import pytest

from ellgauss.modpoly import a_ell_order, select_hecke_prime
from ellgauss.qexp import (
    a_ell_series,
    delta_series,
    eisenstein_series,
    ell_params,
    eta_series,
    j_series,
    m_ell_series,
    m_ell_star_series,
    p1_from_table,
    p1_series,
    xy_coefficient_table,
)
from ellgauss.series import series_inv

ELLS = [5, 7, 11, 13, 17, 19, 23, 29, 31]


def naive_product(prec, ell=1, power=1):
    """prod (1 - q^(ell k))^power by repeated multiplication of truncated polynomials."""
    out = [1] + [0] * (prec - 1)
    for k in range(1, prec):
        step = ell * k
        if step >= prec:
            break
        for _ in range(abs(power)):
            if power > 0:
                for i in range(prec - 1, step - 1, -1):
                    out[i] -= out[i - step]
            else:
                for i in range(step, prec):
                    out[i] += out[i - step]
    return out


def test_delta_frozen():
    d = delta_series(9)
    assert [d[i] for i in range(1, 9)] == [1, -24, 252, -1472, 4830, -6048, -16744, 84480]
    assert d.ord == 1


def test_delta_vs_naive_product():
    prec = 30
    ref = naive_product(prec, power=24)
    d = delta_series(prec + 1)
    assert [d[i + 1] for i in range(prec)] == ref


def test_j_frozen():
    j = j_series(3)
    assert j.ord == -1
    assert [j[-1], j[0], j[1], j[2]] == [1, 744, 196884, 21493760]


def test_eisenstein_frozen():
    assert eisenstein_series(4, 3)[1] == 240
    assert eisenstein_series(6, 3)[1] == -504
    assert eisenstein_series(4, 3)[2] == 2160


def test_j_is_e4_cubed_over_delta():
    prec = 20
    e4 = eisenstein_series(4, prec + 2)
    ref = e4 * e4 * e4 * series_inv(delta_series(prec + 2))
    assert j_series(prec).equals_to_precision(ref.truncate(prec))


def test_eta_pentagonal():
    e = eta_series(10)
    assert e.denom_exp == 24
    # exponents (6k+1)^2 / 24 with sign (-1)^k
    ref = {(6 * k + 1) ** 2: (-1) ** k for k in range(-6, 6) if (6 * k + 1) ** 2 < 241}
    assert e.to_dict() == ref


def test_m5_frozen():
    m = m_ell_series(5, 4)
    assert m.to_dict() == {1: 125, 2: 750, 3: 3375}


@pytest.mark.parametrize("ell", ELLS)
def test_m_order_and_lead(ell):
    s, v = ell_params(ell)
    m = m_ell_series(ell, v + 5)
    assert m.ord == v
    assert m.lc() == ell ** s
    ms = m_ell_star_series(ell, 5)
    assert ms.ord == -v and ms.lc() == 1
    prod = (m * ms).truncate(5)
    assert prod.to_dict() == {0: ell ** s}


@pytest.mark.parametrize("ell", [5, 7, 13])
def test_m_vs_naive_eta_quotient(ell):
    s, v = ell_params(ell)
    prec = 15
    num = naive_product(prec, ell=ell, power=2 * s)
    den_inv = naive_product(prec, power=-2 * s)
    ref = [sum(num[i] * den_inv[k - i] for i in range(k + 1)) * ell ** s for k in range(prec)]
    m = m_ell_series(ell, prec + v)
    assert [m[v + k] for k in range(prec)] == ref


@pytest.mark.parametrize("ell", [5, 7, 11, 13])
def test_p1_table_equals_closed_form(ell):
    assert p1_from_table(ell, 15).equals_to_precision(p1_series(ell, 15))


def test_xy_table_shape():
    tab = xy_coefficient_table(7, "y", 6)
    assert len(tab.rows) == 6 and all(len(r) == 7 for r in tab.rows)


@pytest.mark.parametrize("ell", ELLS)
def test_a_ell_order_golden(ell):
    assert a_ell_order(ell) == (1 if ell in (29, 31) else 0)


def test_hecke_primes():
    assert {ell: select_hecke_prime(ell) for ell in (11, 29, 31)} == {11: 5, 29: 5, 31: 97}


@pytest.mark.parametrize("ell", [5, 7, 11, 13, 17, 19, 23])
def test_a_ell_constant_below_29(ell):
    a = a_ell_series(ell, select_hecke_prime(ell), 12)
    assert a.is_zero() or (a.ord == 0 and len(a.coeffs) == 1)


def test_a_29_leading_terms():
    a = a_ell_series(29, 5, 4)
    assert a.to_dict() == {-1: 1, 0: 2, 1: 3, 2: 4, 3: 7}
