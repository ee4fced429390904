"""JSON documents: an envelope ``{"format_version", "kind", "payload"}`` whose
payload is validated against a per-kind schema before anything is built from it."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from itertools import combinations
from importlib import resources
from typing import Any

import jsonschema

from .core import SignedVector, SignMap, parse_sign, parse_subset_label, sign_char, subset_label
from .hyperfields import HSignMap, Hyperfield, builtin
from .oriented import SignMatrix, sign_matrix
from .triangulation import MatchingField, TreeSet

FORMAT_VERSION = "1.0"
KINDS = ("treeset", "matching_field", "sign_matrix", "sign_map", "signed_vector", "hmatrix", "report")


class DocumentError(ValueError):
    """Malformed input: bad JSON, schema violation or an inconsistent payload."""


def _schema(name: str) -> dict:
    text = resources.files("matchfield").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate_document(doc: Any, expect: str | tuple[str, ...] | None = None) -> dict:
    try:
        jsonschema.validate(doc, _schema("document"))
        jsonschema.validate(doc["payload"], _schema(doc["kind"]))
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise DocumentError(f"schema violation at '{path}': {exc.message}") from None
    if expect is not None:
        allowed = (expect,) if isinstance(expect, str) else expect
        if doc["kind"] not in allowed:
            raise DocumentError(f"expected a {' or '.join(allowed)} document, got {doc['kind']}")
    return doc


def load_document(path: str, expect: str | tuple[str, ...] | None = None) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None
    return validate_document(doc, expect)


def make_document(kind: str, payload: dict, **extra: Any) -> dict:
    doc = {"format_version": FORMAT_VERSION, "kind": kind, "payload": payload}
    doc.update(extra)
    return doc


# --- hyperfield values -------------------------------------------------------------


def encode_hvalue(H: Hyperfield, x: Any) -> dict:
    if H.name in ("phase", "tropical_phase"):
        return {"t": "phase", "v": None if x is None else str(x)}
    if H.name == "tropical":
        return {"t": "tropical", "v": "inf" if x == math.inf else str(x)}
    if H.name == "sign":
        return {"t": "sign", "v": sign_char(x)}
    if H.name == "complex":
        return {"t": "complex", "v": [str(Fraction(x.real)), str(Fraction(x.imag))]}
    return {"t": "element", "v": x}


def decode_hvalue(H: Hyperfield, value: Any) -> Any:
    """Tagged values ``{"t": ..., "v": ...}``; bare numbers and sign strings
    are accepted as shorthand."""
    if isinstance(value, dict):
        tag, v = value["t"], value.get("v")
    else:
        tag, v = None, value
    try:
        if tag == "phase" or (tag is None and H.name in ("phase", "tropical_phase")):
            return None if v is None else H.normalize(Fraction(str(v)))
        if tag == "tropical" or (tag is None and H.name == "tropical"):
            return math.inf if str(v) == "inf" else Fraction(str(v))
        if tag == "sign" or (tag is None and H.name == "sign"):
            return parse_sign(v)
        if tag == "complex":
            return complex(float(Fraction(v[0])), float(Fraction(v[1])))
        return H.normalize(int(v))
    except (TypeError, ValueError, KeyError) as exc:
        raise DocumentError(f"bad {H.name} value {value!r}: {exc}") from None


# --- payload <-> objects -------------------------------------------------------------


def treeset_from_payload(p: dict) -> TreeSet:
    try:
        return TreeSet.from_lists(p["d"], p["n"], p["trees"])
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def treeset_payload(ts: TreeSet) -> dict:
    return ts.to_dict()


def field_from_payload(p: dict) -> MatchingField:
    try:
        return MatchingField.from_targets(p["d"], p["n"], p["matchings"])
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def field_payload(mf: MatchingField) -> dict:
    return mf.to_dict()


def matrix_from_payload(p: dict) -> SignMatrix:
    try:
        A = sign_matrix(p["rows"])
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    if len({len(r) for r in A}) != 1:
        raise DocumentError("sign matrix rows have different lengths")
    return A


def matrix_payload(A: SignMatrix) -> dict:
    return {"rows": [[sign_char(x) for x in row] for row in A]}


def hmatrix_from_payload(p: dict) -> tuple[Hyperfield, list[list[Any]]]:
    try:
        H = builtin(p["hyperfield"])
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    rows = [[decode_hvalue(H, x) for x in row] for row in p["rows"]]
    if len({len(r) for r in rows}) != 1:
        raise DocumentError("matrix rows have different lengths")
    return H, rows


def signmap_from_payload(p: dict) -> SignMap | HSignMap:
    d, n = p["d"], p["n"]
    values = {}
    for label, v in p["values"].items():
        s = parse_subset_label(label)
        if len(s) != d or any(not 1 <= e <= n for e in s):
            raise DocumentError(f"bad subset label {label!r}")
        values[s] = v
    if "hyperfield" in p:
        H = builtin(p["hyperfield"])
        default = p.get("default")
        full = {}
        for s in _subsets(d, n):
            if s in values:
                full[s] = decode_hvalue(H, values[s])
            elif default is not None:
                full[s] = decode_hvalue(H, default)
            else:
                raise DocumentError(f"missing value on {subset_label(s)}")
        return HSignMap(d, n, H, full)
    try:
        default = parse_sign(p["default"]) if "default" in p else None
        return SignMap.from_labels(d, n, {subset_label(s): v for s, v in values.items()}, default=default)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def signmap_payload(chi: SignMap | HSignMap) -> dict:
    if isinstance(chi, HSignMap):
        return {
            "d": chi.d,
            "n": chi.n,
            "hyperfield": chi.H.name,
            "values": {subset_label(s): encode_hvalue(chi.H, v) for s, v in chi.items()},
        }
    return {"d": chi.d, "n": chi.n, "values": chi.to_labels()}


def vector_from_payload(p: dict) -> SignedVector:
    return SignedVector.parse(p["signs"])


def vector_payload(v: SignedVector) -> dict:
    return {"signs": [sign_char(x) for x in v.signs]}


def _subsets(d: int, n: int):
    return combinations(range(1, n + 1), d)


def parse(doc: dict) -> Any:
    """Build the object a validated document describes."""
    kind, p = doc["kind"], doc["payload"]
    if kind == "treeset":
        return treeset_from_payload(p)
    if kind == "matching_field":
        return field_from_payload(p)
    if kind == "sign_matrix":
        return matrix_from_payload(p)
    if kind == "sign_map":
        return signmap_from_payload(p)
    if kind == "signed_vector":
        return vector_from_payload(p)
    if kind == "hmatrix":
        return hmatrix_from_payload(p)
    return p


def serialize(obj: Any) -> dict:
    if isinstance(obj, TreeSet):
        return make_document("treeset", treeset_payload(obj))
    if isinstance(obj, MatchingField):
        return make_document("matching_field", field_payload(obj))
    if isinstance(obj, (SignMap, HSignMap)):
        return make_document("sign_map", signmap_payload(obj))
    if isinstance(obj, SignedVector):
        return make_document("signed_vector", vector_payload(obj))
    if isinstance(obj, tuple) and obj and isinstance(obj[0], tuple):
        return make_document("sign_matrix", matrix_payload(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")
