import json
import os
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellgauss.tables import (
    ENV_TABLE_DIR,
    TableError,
    dec_poly,
    dec_rational,
    default_table_dir,
    enc_rational,
    load_table,
    load_table_dir,
    read_table,
    save_table,
    table_filename,
    write_table,
)
from conftest import get_table


@pytest.fixture(scope="module")
def table():
    return get_table(7, 3)


@pytest.fixture(scope="module")
def a_table():
    return get_table(29, 7)


@given(st.fractions())
def test_rational_round_trip(x):
    s = enc_rational(x)
    assert dec_rational(s) == x
    assert enc_rational(dec_rational(s)) == s


@pytest.mark.parametrize("bad", ["1/1", "2/4", "+3", "0/5", "x", "1/0", 7])
def test_noncanonical_rationals_rejected(bad):
    with pytest.raises(TableError):
        dec_rational(bad)


def test_round_trip_is_byte_identical(table, a_table):
    for t in (table, a_table):
        data = save_table(t)
        t2 = load_table(data)
        assert save_table(t2) == data
        assert t2.tau.q == t.tau.q and t2.tau.r1 == t.tau.r1
        assert t2.m_poly == t.m_poly and t2.g2 == t.g2


def test_layout(table):
    doc = json.loads(save_table(table))
    h = doc["header"]
    assert (h["ell"], h["n"], h["basis"], h["phi_n"]) == (7, 3, "m", 2)
    assert h["exponents"][0] == ["tau", 3, 1]
    for i, k, c in doc["body"]["entries"][0]["q"]:
        assert isinstance(c, list) and len(c) == 2 and all(isinstance(x, str) for x in c)


def test_truncated_file(table):
    data = save_table(table)
    for cut in (10, len(data) // 2, len(data) - 3):
        with pytest.raises(TableError):
            load_table(data[:cut])


def test_checksum_detects_edit(table):
    doc = json.loads(save_table(table))
    i, k, c = doc["body"]["entries"][0]["q"][0]
    c[0] = str(Fraction(c[0]) + 1)
    data = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode() + b"\n"
    with pytest.raises(TableError, match="checksum"):
        load_table(data)


def test_version_mismatch(table):
    data = save_table(table).replace(b'"version":1', b'"version":2')
    with pytest.raises(TableError, match="version"):
        load_table(data)


def test_not_a_table():
    with pytest.raises(TableError):
        load_table(b'{"hello": 1}')


@pytest.mark.parametrize("obj", [[[0, 0]], [[0, "0", "1"]], [[1, 0, "1"], [0, 0, "1"]], [[0, 0, "1"], [0, 0, "2"]], {}])
def test_malformed_polys(obj):
    with pytest.raises(TableError):
        dec_poly(obj)


def test_cyclotomic_length_checked():
    with pytest.raises(TableError):
        dec_poly([[0, 0, ["1", "2", "3"]]], 3)


def test_atomic_write_and_dir(tmp_path, table, a_table):
    p = tmp_path / "sub" / table_filename(7, 3)
    size = write_table(table, p)
    assert size == p.stat().st_size
    write_table(a_table, tmp_path / "sub" / table_filename(29, 7))
    assert sorted(os.listdir(tmp_path / "sub")) == ["ell29_n7.json", "ell7_n3.json"]
    assert save_table(read_table(p)) == save_table(table)
    assert set(load_table_dir(tmp_path / "sub")) == {(7, 3), (29, 7)}


def test_env_default_dir(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_TABLE_DIR, str(tmp_path))
    assert default_table_dir() == tmp_path
    monkeypatch.delenv(ENV_TABLE_DIR)
    assert str(default_table_dir()) == "tables"
