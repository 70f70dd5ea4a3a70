"""JSON matrix interchange: exact entries as canonical strings, complex entries as [re, im]."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..opalg import DiffOp
from ..ring import LaurentPoly, MultiPoly, RingError, RingMatrix

KINDS = ("rational", "multipoly", "laurent_q", "complex", "diffop")


class SchemaError(ValueError):
    pass


def _diffop_str(x: DiffOp) -> str:
    return " | ".join(f"[{k}] {x.terms[k]}" for k in sorted(x.terms)) or "0"


def _diffop_parse(text: str, var: str) -> DiffOp:
    if text.strip() == "0":
        return DiffOp({}, var)
    terms = {}
    for chunk in text.split(" | "):
        head, _, body = chunk.strip().partition("] ")
        terms[int(head.lstrip("["))] = MultiPoly.parse(body)
    return DiffOp(terms, var)


def matrix_to_dict(M, family: str = "", spins=()) -> dict:
    if isinstance(M, np.ndarray):
        M = RingMatrix(M.astype(complex).tolist(), kind="complex")
    kind = M.kind
    if kind not in KINDS:
        raise SchemaError(f"ring kind {kind!r} has no interchange format")
    if kind == "complex":
        entries = [[[float(complex(x).real), float(complex(x).imag)] for x in r] for r in M.entries]
        symbols: list = []
    elif kind == "diffop":
        entries = [[_diffop_str(x) for x in r] for r in M.entries]
        symbols = sorted({s for r in M.entries for x in r for p in x.terms.values() for s in p.free_symbols()})
        symbols = [M.zero.var] + [s for s in symbols if s != M.zero.var]
    else:
        entries = [[str(x) for x in r] for r in M.entries]
        symbols = M.symbols()
    return {
        "family": family,
        "spins": list(spins),
        "dims": [list(M.row_dims), list(M.col_dims)],
        "ring": {"kind": kind, "symbols": symbols},
        "cleared_denominator_power": M.cleared_power,
        "basis": [list(M.row_basis), list(M.col_basis)],
        "entries": entries,
    }


def dict_to_matrix(d: dict) -> RingMatrix:
    for key in ("dims", "ring", "cleared_denominator_power", "basis", "entries"):
        if key not in d:
            raise SchemaError(f"missing key {key!r}")
    kind = d["ring"].get("kind")
    if kind not in KINDS:
        raise SchemaError(f"ring.kind: unknown kind {kind!r}")
    entries = d["entries"]
    if not isinstance(entries, list) or not entries:
        raise SchemaError("entries: expected a non-empty row-major array")
    rows = []
    for i, r in enumerate(entries):
        row = []
        for j, x in enumerate(r):
            where = f"entries[{i}][{j}]"
            try:
                row.append(_parse_entry(x, kind, d["ring"].get("symbols", [])))
            except (RingError, ValueError, TypeError) as exc:
                raise SchemaError(f"{where}: {exc}") from exc
        rows.append(row)
    rd, cd = d["dims"]
    rb, cb = d["basis"]
    zero = None
    if kind == "diffop":
        zero = DiffOp({}, d["ring"]["symbols"][0] if d["ring"]["symbols"] else "z")
    try:
        return RingMatrix(rows, row_dims=rd, col_dims=cd, row_basis=rb, col_basis=cb, kind=kind,
                          cleared_power=int(d["cleared_denominator_power"]), zero=zero)
    except RingError as exc:
        raise SchemaError(f"dims: {exc}") from exc


def _parse_entry(x, kind: str, symbols):
    if kind == "complex":
        if not (isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x)):
            raise ValueError(f"expected [re, im], got {x!r}")
        return complex(x[0], x[1])
    if not isinstance(x, str):
        raise ValueError(f"expected a canonical string, got {x!r}")
    if kind == "diffop":
        return _diffop_parse(x, symbols[0] if symbols else "z")
    if kind == "laurent_q":
        return LaurentPoly.parse(x)
    return MultiPoly.parse(x)


def export_matrix(M, path, family: str = "", spins=(), fmt: str = "json") -> Path:
    if fmt != "json":
        raise SchemaError(f"unsupported format {fmt!r}")
    path = Path(path)
    path.write_text(json.dumps(matrix_to_dict(M, family, spins), indent=1))
    return path


def import_matrix(path, fmt: str = "json") -> RingMatrix:
    if fmt != "json":
        raise SchemaError(f"unsupported format {fmt!r}")
    text = Path(path).read_text()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return dict_to_matrix(d)
