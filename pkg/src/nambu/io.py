"""JSON encodings for polynomials, fields and structures.

Polynomial::

    {"dim": d, "terms": [{"coeff": "p/q", "exps": [e1, ..., ed]}, ...]}

Multivector / form::

    {"dim": d, "degree": n, "kind": "multivector" | "form",
     "terms": [{"indices": [i1, ..., in], "coeff": <Polynomial>}, ...]}

Vector field::

    {"dim": d, "kind": "vector", "components": [<Polynomial>, ...]}

Term order in files is irrelevant; everything is canonicalized on load.
Coefficients may also be given as plain strings (``"x1*x2 - 1/2"``) for
hand-written inputs.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .exterior import DifferentialForm, MultiVectorField, VectorField
from .poly import Polynomial, as_rational


class FormatError(ValueError):
    """Raised for malformed JSON inputs."""


def rational_to_json(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def rational_from_json(s) -> Fraction:
    try:
        return as_rational(s)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}") from exc


def poly_to_json(p: Polynomial) -> dict:
    return {
        "dim": p.dim,
        "terms": [{"coeff": rational_to_json(c), "exps": list(e)} for e, c in p.sorted_terms()],
    }


def poly_from_json(obj, dim: int | None = None) -> Polynomial:
    if isinstance(obj, str):
        if dim is None:
            raise FormatError("a polynomial string needs a known dimension")
        try:
            return Polynomial.parse(obj, dim)
        except (ValueError, SyntaxError, IndexError) as exc:
            raise FormatError(f"cannot parse polynomial {obj!r}: {exc}") from exc
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        if dim is None or isinstance(obj, float):
            raise FormatError("bare numbers need a known dimension and must be integers")
        return Polynomial.constant(obj, dim)
    if not isinstance(obj, dict) or "terms" not in obj:
        raise FormatError(f"not a polynomial object: {obj!r}")
    d = obj.get("dim", dim)
    if d is None:
        raise FormatError("polynomial without dimension")
    if dim is not None and d != dim:
        raise FormatError(f"polynomial dimension {d} does not match {dim}")
    terms = {}
    for t in obj["terms"]:
        exps = tuple(int(e) for e in t["exps"])
        if len(exps) != d:
            raise FormatError(f"exponent vector {exps} has wrong length")
        c = rational_from_json(t["coeff"])
        terms[exps] = terms.get(exps, Fraction(0)) + c
    return Polynomial(d, terms)


def field_to_json(f) -> dict:
    if isinstance(f, VectorField):
        return {"dim": f.dim, "kind": "vector", "components": [poly_to_json(c) for c in f.components]}
    return {
        "dim": f.dim,
        "degree": f.degree,
        "kind": f.kind,
        "terms": [{"indices": list(idx), "coeff": poly_to_json(c)} for idx, c in f.items()],
    }


def field_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise FormatError("field object needs a 'kind'")
    kind = obj["kind"]
    try:
        dim = int(obj["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError("field object needs an integer 'dim'") from exc
    if kind == "vector":
        comps = [poly_from_json(c, dim) for c in obj["components"]]
        if len(comps) != dim:
            raise FormatError("vector field needs dim components")
        return VectorField(comps)
    cls = {"multivector": MultiVectorField, "form": DifferentialForm}.get(kind)
    if cls is None:
        raise FormatError(f"unknown field kind {kind!r}")
    degree = int(obj["degree"])
    coeffs = {}
    for t in obj["terms"]:
        idx = tuple(int(i) for i in t["indices"])
        if len(idx) != degree:
            raise FormatError(f"multi-index {idx} does not have degree {degree}")
        if list(idx) != sorted(set(idx)):
            raise FormatError(f"multi-index {idx} must be strictly increasing")
        if any(i < 1 or i > dim for i in idx):
            raise FormatError(f"multi-index {idx} out of range 1..{dim}")
        c = poly_from_json(t["coeff"], dim)
        coeffs[idx] = coeffs[idx] + c if idx in coeffs else c
    return cls(dim, degree, coeffs)


def value_to_json(v) -> Any:
    """Encode a polynomial, field or rational (used for witness residuals)."""
    if isinstance(v, Polynomial):
        return poly_to_json(v)
    if isinstance(v, (MultiVectorField, DifferentialForm, VectorField)):
        return field_to_json(v)
    if isinstance(v, (int, Fraction)):
        return rational_to_json(v)
    if isinstance(v, (list, tuple)):
        return [value_to_json(x) for x in v]
    raise TypeError(f"cannot encode {type(v).__name__}")


def value_from_json(obj, dim: int | None = None):
    if isinstance(obj, dict):
        if "kind" in obj:
            return field_from_json(obj)
        return poly_from_json(obj, dim)
    if isinstance(obj, list):
        return [value_from_json(x, dim) for x in obj]
    if isinstance(obj, str) and dim is None:
        return rational_from_json(obj)
    return poly_from_json(obj, dim)


def load_json(path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def dump_json(obj, path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_field(path):
    return field_from_json(load_json(path))


def load_multivector(path) -> MultiVectorField:
    f = load_field(path)
    if not isinstance(f, MultiVectorField):
        raise FormatError(f"{path}: expected a multivector, found {f.kind if hasattr(f, 'kind') else 'vector'}")
    return f


def parse_point(text: str, dim: int | None = None) -> tuple:
    try:
        pt = tuple(as_rational(v) for v in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad point {text!r}") from exc
    if dim is not None and len(pt) != dim:
        raise FormatError(f"point {text!r} has {len(pt)} coordinates, expected {dim}")
    return pt


def tuples_from_json(obj, dim: int) -> list:
    """A list of entry tuples; each entry a polynomial object or string."""
    if not isinstance(obj, list):
        raise FormatError("tuples file must hold a JSON list")
    return [tuple(poly_from_json(e, dim) for e in tup) for tup in obj]


def points_to_json(points: Sequence[Sequence]) -> list:
    return [[rational_to_json(v) for v in p] for p in points]
