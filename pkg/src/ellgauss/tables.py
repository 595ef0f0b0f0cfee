"""Table files: canonical JSON with decimal-string rationals and a body checksum."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .modpoly import BivariatePoly
from .rings import CycElem, euler_phi

FORMAT = "ellgauss-table"
VERSION = 1
ENV_TABLE_DIR = "ELLGAUSS_TABLE_DIR"


class TableError(ValueError):
    pass


@dataclass
class ExpressionEntry:
    """Rational expression for tau (k=None) or the Jacobi sum J_k."""

    k: int | None
    r: int
    e_delta: int
    multiplier: int
    prec: int
    q: BivariatePoly | None = None  # m-basis numerator
    k_shift: int = 0
    r1: BivariatePoly | None = None  # a-basis numerators
    r2: BivariatePoly | None = None

    @property
    def name(self) -> str:
        return "tau" if self.k is None else f"jacobi_{self.k}"


@dataclass
class EllTable:
    ell: int
    n: int
    c: int
    basis: str  # "m" or "a"
    s: int
    v: int
    v_a: int
    hecke_r: int | None
    m_poly: BivariatePoly
    a_poly: BivariatePoly | None = None
    g2: BivariatePoly | None = None
    g2_prec: int = 0
    tau: ExpressionEntry | None = None
    jacobi: dict[int, ExpressionEntry] = field(default_factory=dict)

    def entries(self) -> list[ExpressionEntry]:
        return [self.tau] + [self.jacobi[k] for k in sorted(self.jacobi)]

    @property
    def phi_n(self) -> int:
        return euler_phi(self.n)


# ---------------------------------------------------------------------------
# encoding


def enc_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dec_rational(s: str):
    if not isinstance(s, str):
        raise TableError(f"expected a decimal string, got {s!r}")
    try:
        x = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise TableError(f"bad rational {s!r}") from exc
    if enc_rational(x) != s:
        raise TableError(f"non-canonical rational {s!r}")
    return x.numerator if x.denominator == 1 else x


def enc_coeff(c):
    if isinstance(c, CycElem):
        return [enc_rational(x) for x in c.coeffs]
    return enc_rational(c)


def dec_coeff(obj, n: int | None):
    if isinstance(obj, list):
        if n is None or len(obj) != euler_phi(n):
            raise TableError(f"cyclotomic coordinate array of length {len(obj)} for n={n}")
        return CycElem(n, [dec_rational(x) for x in obj])
    return dec_rational(obj)


def enc_poly(p: BivariatePoly | None):
    if p is None:
        return None
    return [[i, k, enc_coeff(c)] for (i, k), c in sorted(p.coeffs.items())]


def dec_poly(obj, n: int | None = None) -> BivariatePoly | None:
    if obj is None:
        return None
    if not isinstance(obj, list):
        raise TableError("polynomial must be a list of triples")
    coeffs = {}
    prev = None
    for t in obj:
        if not (isinstance(t, list) and len(t) == 3 and isinstance(t[0], int) and isinstance(t[1], int)):
            raise TableError(f"malformed polynomial triple {t!r}")
        key = (t[0], t[1])
        if prev is not None and key <= prev:
            raise TableError(f"polynomial triples not strictly sorted at {key}")
        prev = key
        coeffs[key] = dec_coeff(t[2], n)
    return BivariatePoly(coeffs)


def _enc_entry(e: ExpressionEntry) -> dict:
    return {
        "k": e.k, "r": e.r, "e_delta": e.e_delta, "multiplier": str(e.multiplier), "prec": e.prec,
        "q": enc_poly(e.q), "k_shift": e.k_shift, "r1": enc_poly(e.r1), "r2": enc_poly(e.r2),
    }


def _dec_entry(d: dict, n: int) -> ExpressionEntry:
    try:
        return ExpressionEntry(
            k=d["k"], r=d["r"], e_delta=d["e_delta"], multiplier=int(d["multiplier"]), prec=d["prec"],
            q=dec_poly(d["q"], n), k_shift=d["k_shift"], r1=dec_poly(d["r1"], n), r2=dec_poly(d["r2"], n),
        )
    except KeyError as exc:
        raise TableError(f"missing field {exc}") from exc


def _canonical(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True).encode()


def _body(t: EllTable) -> dict:
    return {
        "m_poly": enc_poly(t.m_poly),
        "a_poly": enc_poly(t.a_poly),
        "g2": enc_poly(t.g2),
        "g2_prec": t.g2_prec,
        "entries": [_enc_entry(e) for e in t.entries()],
    }


def save_table(t: EllTable) -> bytes:
    body = _canonical(_body(t))
    header = {
        "format": FORMAT, "version": VERSION,
        "ell": t.ell, "n": t.n, "c": t.c, "basis": t.basis, "s": t.s, "v": t.v, "v_a": t.v_a,
        "hecke_r": t.hecke_r, "phi_n": t.phi_n,
        "multiplier": str(t.tau.multiplier),
        "exponents": [[e.name, e.r, e.e_delta] for e in t.entries()],
        "body_bytes": len(body),
        "body_sha256": hashlib.sha256(body).hexdigest(),
    }
    # the body is embedded verbatim so its checksum can be verified on the raw bytes
    return b'{"body":' + body + b',"header":' + _canonical(header) + b"}\n"


def load_table(data: bytes) -> EllTable:
    if not data.startswith(b'{"body":'):
        raise TableError("not a table file")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise TableError(f"checksum failure or truncated file: {exc}") from exc
    header = doc.get("header", {})
    if header.get("format") != FORMAT:
        raise TableError("not a table file")
    if header.get("version") != VERSION:
        raise TableError(f"unknown table version {header.get('version')!r}")
    try:
        return _decode(doc, header, data)
    except (KeyError, TypeError, AttributeError) as exc:
        raise TableError(f"malformed table: {exc!r}") from exc


def _decode(doc: dict, header: dict, data: bytes) -> EllTable:
    body_bytes = _canonical(doc["body"])
    if len(body_bytes) != header["body_bytes"] or hashlib.sha256(body_bytes).hexdigest() != header["body_sha256"]:
        raise TableError("checksum failure")
    n = header["n"]
    body = doc["body"]
    entries = [_dec_entry(d, n) for d in body["entries"]]
    if not entries or entries[0].k is not None:
        raise TableError("first entry must be tau")
    t = EllTable(
        ell=header["ell"], n=n, c=header["c"], basis=header["basis"], s=header["s"], v=header["v"],
        v_a=header["v_a"], hecke_r=header["hecke_r"],
        m_poly=dec_poly(body["m_poly"]), a_poly=dec_poly(body["a_poly"]), g2=dec_poly(body["g2"], n),
        g2_prec=body["g2_prec"], tau=entries[0], jacobi={e.k: e for e in entries[1:]},
    )
    if save_table(t) != data:
        raise TableError("file is not in canonical form")
    return t


# ---------------------------------------------------------------------------
# files


def table_filename(ell: int, n: int) -> str:
    return f"ell{ell}_n{n}.json"


def default_table_dir() -> Path:
    return Path(os.environ.get(ENV_TABLE_DIR, "tables"))


def write_table(t: EllTable, path: str | os.PathLike) -> int:
    """Atomic write (temp file + rename); returns the byte size."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = save_table(t)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return len(data)


def read_table(path: str | os.PathLike) -> EllTable:
    return load_table(Path(path).read_bytes())


def load_table_dir(directory: str | os.PathLike) -> dict[tuple[int, int], EllTable]:
    out = {}
    for p in sorted(Path(directory).glob("ell*_n*.json")):
        t = read_table(p)
        out[(t.ell, t.n)] = t
    return out
