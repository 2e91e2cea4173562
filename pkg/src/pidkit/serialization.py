"""Canonical JSON documents for schemes.

Documents use 1-based message and server indices and integer residues. The
encoder is byte-stable (sorted keys, fixed separators), so a document can be
checked in as a golden fixture.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .design import DesignError, StorageDesign
from .field import FieldError, PrimeField
from .matrix import MatrixError, MatrixFp
from .schemes import Scheme, SchemeError

FORMAT_VERSION = 1


class DocumentError(ValueError):
    """Malformed document; ``location`` points at the offending field."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


def frac_doc(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def frac_from_doc(doc: Any, location: str = "$") -> Fraction:
    if not isinstance(doc, dict) or set(doc) != {"num", "den"}:
        raise DocumentError("expected {num, den}", location)
    num, den = doc["num"], doc["den"]
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (num, den)) or den <= 0:
        raise DocumentError("num/den must be integers with den > 0", location)
    return Fraction(num, den)


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc


def serialize_scheme(s: Scheme) -> dict:
    return {
        "version": FORMAT_VERSION,
        "construction": s.construction,
        "K": s.K,
        "M": s.M,
        "N": s.N,
        "p": s.p,
        "L": s.L,
        "storage": s.storage.to_lists(),
        "D": list(s.D),
        "G": s.G.to_lists(),
        "H": s.H.to_lists(),
        "F": {str(k): f.to_lists() for k, f in s.F.items()},
        "rate": frac_doc(s.rate),
        "eta": frac_doc(s.eta),
    }


def scheme_to_json(s: Scheme) -> str:
    return dumps(serialize_scheme(s))


def _int(doc: dict, key: str, location: str = "$") -> int:
    if key not in doc:
        raise DocumentError(f"missing field {key!r}", location)
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise DocumentError("expected an integer", f"{location}.{key}")
    return v


def _grid(field: PrimeField, doc: Any, shape: tuple[int, int], location: str) -> MatrixFp:
    if not isinstance(doc, list) or len(doc) != shape[0]:
        raise DocumentError(f"expected {shape[0]} rows", location)
    for i, row in enumerate(doc):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise DocumentError(f"expected {shape[1]} entries", f"{location}[{i}]")
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < field.p:
                raise DocumentError(f"entry {v!r} is not a residue mod {field.p}", f"{location}[{i}][{j}]")
    return MatrixFp(field, doc, shape=shape)


def deserialize_scheme(doc: Any) -> Scheme:
    if not isinstance(doc, dict):
        raise DocumentError("expected a JSON object")
    version = _int(doc, "version")
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported version {version}", "$.version")
    K, M, N, p, L = (_int(doc, key) for key in ("K", "M", "N", "p", "L"))
    try:
        field = PrimeField(p)
    except FieldError as exc:
        raise DocumentError(str(exc), "$.p") from exc

    storage_doc = doc.get("storage")
    if not isinstance(storage_doc, list) or len(storage_doc) != N:
        raise DocumentError(f"expected {N} storage sets", "$.storage")
    for n, s in enumerate(storage_doc):
        if not isinstance(s, list) or not all(isinstance(k, int) and not isinstance(k, bool) for k in s):
            raise DocumentError("expected a list of message indices", f"$.storage[{n}]")
    try:
        storage = StorageDesign(K, M, tuple(tuple(s) for s in storage_doc))
    except DesignError as exc:
        raise DocumentError(str(exc), "$.storage") from exc

    D = doc.get("D")
    if not isinstance(D, list) or len(D) != N or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 0 for d in D):
        raise DocumentError(f"expected {N} non-negative answer sizes", "$.D")
    total = sum(D)
    if total < L or L < 1:
        raise DocumentError(f"total download {total} inconsistent with L={L}", "$.D")

    G = _grid(field, doc.get("G"), (L, total), "$.G")
    H = _grid(field, doc.get("H"), (total, total - L), "$.H")
    F_doc = doc.get("F")
    if not isinstance(F_doc, dict) or sorted(F_doc) != sorted(str(k) for k in range(1, K + 1)):
        raise DocumentError(f"expected precoders for k = 1..{K}", "$.F")
    F = {int(k): _grid(field, v, (total, L), f"$.F.{k}") for k, v in F_doc.items()}

    construction = doc.get("construction", "custom")
    if not isinstance(construction, str):
        raise DocumentError("expected a string", "$.construction")
    try:
        s = Scheme(K, M, field, L, storage, tuple(D), G, H, F, construction=construction)
    except (SchemeError, MatrixError) as exc:
        raise DocumentError(str(exc)) from exc

    for key, value in (("rate", s.rate), ("eta", s.eta)):
        if key in doc and frac_from_doc(doc[key], f"$.{key}") != value:
            raise DocumentError(f"declared {key} disagrees with L and D (expected {value})", f"$.{key}")
    return s


def scheme_from_json(text: str) -> Scheme:
    return deserialize_scheme(loads(text))
