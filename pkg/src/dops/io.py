"""JSON input validation and serialization; rationals travel as "p/q" strings."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

from .copoly import Perturbation
from .core import RecCoeffs
from .dsym import SymData
from .errors import DopsError

SCHEMAS = ("rational", "reccoeffs", "symdata", "perturbation")


class SchemaError(DopsError, ValueError):
    pass


@lru_cache(maxsize=None)
def _registry() -> Registry:
    reg = Registry()
    for name in SCHEMAS:
        text = resources.files("dops").joinpath("schemas", f"{name}.json").read_text()
        reg = reg.with_resource(f"{name}.json", Resource.from_contents(json.loads(text)))
    return reg


def schema(name: str) -> dict:
    return _registry().contents(f"{name}.json")


def validate(obj, name: str) -> None:
    v = jsonschema.Draft202012Validator(schema(name), registry=_registry())
    errs = sorted(v.iter_errors(obj), key=lambda e: list(e.path))
    if errs:
        e = errs[0]
        where = "/".join(str(p) for p in e.path) or "<root>"
        raise SchemaError(f"{name}: {where}: {e.message}")


def _build(cls, obj, name):
    validate(obj, name)
    try:
        return cls.from_json(obj)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{name}: {exc}") from exc


def coeffs_from_obj(obj) -> RecCoeffs | SymData:
    """SymData when a "rho" key is present, RecCoeffs otherwise."""
    if isinstance(obj, dict) and "rho" in obj:
        return _build(SymData, obj, "symdata")
    return _build(RecCoeffs, obj, "reccoeffs")


def perturbation_from_obj(obj) -> Perturbation:
    return _build(Perturbation, obj, "perturbation")


def read_json(path: str | Path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not JSON ({exc})") from exc


def load_coeffs(path: str | Path) -> RecCoeffs | SymData:
    return coeffs_from_obj(read_json(path))


def rat(v) -> str:
    return str(v)


def poly_json(p) -> list[str]:
    """Coefficient array low-to-high."""
    return [str(c) for c in p.coeffs]


def dumps(record: dict) -> str:
    """One JSON line; key order fixed so equal inputs give byte-identical output."""
    return json.dumps(record, sort_keys=True, separators=(",", ":"))
