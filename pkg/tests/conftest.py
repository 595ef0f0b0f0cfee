import pytest

from ellgauss.build import BuildConfig, build_table
from ellgauss.gauss import prime_power_parts
from ellgauss.tables import load_table, save_table

_CACHE = {}

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def get_table(ell, n, jacobi=True):
    """Built once per session; every table goes through a save/load round trip."""
    key = (ell, n, jacobi)
    if key not in _CACHE:
        t = build_table(BuildConfig(ell, n, jacobi=jacobi)).table
        _CACHE[key] = load_table(save_table(t))
    return _CACHE[key]


def get_tables(ells):
    return {(ell, n): get_table(ell, n) for ell in ells for n in prime_power_parts(ell - 1)}


@pytest.fixture(scope="session")
def small_tables():
    return get_tables([5, 7, 11, 13])


@pytest.fixture(scope="session")
def count_tables():
    return get_tables([5, 7, 11, 13, 17, 19])


@pytest.fixture(scope="session")
def a_basis_tables():
    return get_tables([29, 31])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
