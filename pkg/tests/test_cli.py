import json

import pytest

from ellgauss.cli import main
from ellgauss.tables import table_filename, write_table
from conftest import get_tables


@pytest.fixture(scope="module")
def table_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("tables")
    for (ell, n), t in get_tables([5, 7, 11, 13, 17, 19]).items():
        write_table(t, d / table_filename(ell, n))
    return d


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["precompute", "--ell", "5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert main(["precompute", "--ell", "9", "--n", "2", "--out", "/dev/null"]) == 2
    assert main(["precompute", "--ell", "7", "--n", "4", "--out", "/dev/null"]) == 2


def test_precompute_and_inspect(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert main(["precompute", "--ell", "5", "--n", "2", "--out", str(out)]) == 0
    assert json.loads(out.read_bytes())["header"]["basis"] == "m"
    assert main(["inspect", str(out)]) == 0
    text = capsys.readouterr().out
    assert "basis=m" in text and "phi(n) = 1" in text


def test_precompute_default_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("ELLGAUSS_TABLE_DIR", str(tmp_path))
    assert main(["precompute", "--ell", "7", "--n", "3", "--jacobi"]) == 0
    doc = json.loads((tmp_path / "ell7_n3.json").read_bytes())
    assert [e[0] for e in doc["header"]["exponents"]] == ["tau", "jacobi_1"]


def test_count_verify_naive(table_dir, capsys):
    rc = main(["count", "--p", "1009", "--a", "3", "--b", "7", "--tables", str(table_dir), "--verify-naive"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "#E(F_1009) = 952" in out and "naive count agrees: 952" in out


def test_count_insufficient(table_dir, capsys):
    rc = main(["count", "--p", "101", "--a", "2", "--b", "3", "--tables", str(table_dir)])
    assert rc == 1
    assert "modulus" in capsys.readouterr().err


def test_count_bad_curve(table_dir):
    assert main(["count", "--p", "101", "--a", "98", "--b", "2", "--tables", str(table_dir)]) == 1


def test_count_bad_ell_list(table_dir):
    with pytest.raises(SystemExit) as exc:
        main(["count", "--p", "101", "--a", "2", "--b", "3", "--ell-list", "5,x"])
    assert exc.value.code == 2


def test_verify(tmp_path, capsys):
    d = tmp_path / "v"
    for (ell, n), t in get_tables([5, 7]).items():
        write_table(t, d / table_filename(ell, n))
    assert main(["verify", "--tables", str(d)]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "l=7 n=3 tau: ok" in out


def test_verify_corrupt_file(tmp_path, capsys):
    d = tmp_path / "bad"
    t = get_tables([5])[(5, 4)]
    p = d / table_filename(5, 4)
    write_table(t, p)
    data = p.read_bytes()
    p.write_bytes(data[: len(data) // 2])
    assert main(["verify", "--tables", str(d)]) == 1
    assert main(["inspect", str(p)]) == 1


def test_verify_empty_dir(tmp_path):
    assert main(["verify", "--tables", str(tmp_path)]) == 1


def test_bench(capsys):
    assert main(["bench", "--ell", "7", "--n", "3"]) == 0
    assert "measured op exponent" in capsys.readouterr().out
