"""JSON system descriptions.

Pisot form::

    {"mode": "pisot_form", "pisot": {"min_poly": [-1, -1, 0]},
     "maps": [{"n": 1, "mu": {"num": [0, 0, 0], "den": 1}}, ...],
     "p": ["1/2", "1/2"]}

Generic::

    {"mode": "generic", "maps": [{"r": 0.5, "b": 1.0}, ...], "p": [...]}

Rationals are written as "a/b" strings.  Probabilities may also be field
elements ``{"num": [...], "den": d}``.  An optional ``"decomposition"``
``{"b": ..., "c": ..., "a": [...]}`` feeds the uniqueness screen.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .errors import InvalidSystem
from .ifs import Decomposition, GenericSystem, PisotFormSystem, ProbabilityVector, canonicalize
from .numberfield import FieldElement, PisotField, verify_pisot

__all__ = ["load_system", "parse_system", "system_to_json", "system_hash"]

_TOP_KEYS = {"mode", "pisot", "maps", "p", "decomposition", "name"}
_PISOT_KEYS = {"min_poly"}


def _check_keys(obj: dict, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise InvalidSystem(f"{where} must be an object")
    extra = set(obj) - allowed
    if extra:
        raise InvalidSystem(f"unknown keys in {where}: {sorted(extra)}")


def _field_value(F: PisotField, v, where: str):
    try:
        if isinstance(v, dict):
            _check_keys(v, {"num", "den"}, where)
            return FieldElement.from_json(v, F.coeffs)
        if isinstance(v, bool):
            raise TypeError
        if isinstance(v, float):
            return F.rational(Fraction(repr(v)))
        return F.rational(Fraction(v))
    except (TypeError, ValueError, KeyError, ZeroDivisionError) as exc:
        raise InvalidSystem(f"bad value for {where}: {v!r}") from exc


def parse_system(data: dict, precision: int = 128):
    """Build ``(system, decomposition_or_None)`` from a decoded JSON object."""
    _check_keys(data, _TOP_KEYS, "system")
    mode = data.get("mode", "pisot_form")
    maps = data.get("maps")
    if not isinstance(maps, list) or len(maps) < 2:
        raise InvalidSystem("'maps' must list at least two maps")
    if "p" not in data or not isinstance(data["p"], list):
        raise InvalidSystem("'p' must be a list")
    if mode == "generic":
        pairs = []
        for i, m in enumerate(maps):
            _check_keys(m, {"r", "b"}, f"maps[{i}]")
            if "r" not in m or "b" not in m:
                raise InvalidSystem(f"maps[{i}] needs 'r' and 'b'")
            pairs.append((m["r"], m["b"]))
        try:
            system = GenericSystem.from_maps(pairs, ProbabilityVector(data["p"]))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidSystem(str(exc)) from exc
        return system, None
    if mode != "pisot_form":
        raise InvalidSystem(f"unknown mode {mode!r}")
    pisot = data.get("pisot")
    _check_keys(pisot, _PISOT_KEYS, "pisot")
    poly = pisot.get("min_poly")
    if not isinstance(poly, list) or not poly or not all(isinstance(c, int) and not isinstance(c, bool) for c in poly):
        raise InvalidSystem("'min_poly' must be a non-empty list of integers")
    F = verify_pisot(poly, precision)
    exps, mus = [], []
    for i, m in enumerate(maps):
        _check_keys(m, {"n", "mu"}, f"maps[{i}]")
        if not isinstance(m.get("n"), int) or isinstance(m.get("n"), bool):
            raise InvalidSystem(f"maps[{i}].n must be an integer")
        exps.append(m["n"])
        mus.append(_field_value(F, m.get("mu", 0), f"maps[{i}].mu"))
    if len(data["p"]) != len(maps):
        raise InvalidSystem("one probability per map is required")
    p = ProbabilityVector([_field_value(F, v, "p") if isinstance(v, dict) else v for v in data["p"]], F)
    system = canonicalize(F, exps, mus, p)
    dec = None
    if "decomposition" in data:
        d = data["decomposition"]
        _check_keys(d, {"b", "c", "a"}, "decomposition")
        try:
            dec = Decomposition(_field_value(F, d["b"], "decomposition.b"),
                                _field_value(F, d["c"], "decomposition.c"),
                                tuple(_field_value(F, v, "decomposition.a") for v in d["a"]))
        except KeyError as exc:
            raise InvalidSystem(f"decomposition is missing {exc}") from exc
    return system, dec


def load_system(path, precision: int = 128):
    try:
        text = Path(path).read_text()
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSystem(f"{path}: {exc}") from exc
    return parse_system(data, precision)


def system_to_json(system) -> dict:
    if isinstance(system, GenericSystem):
        return {"mode": "generic",
                "maps": [{"r": str(r), "b": str(b)} for r, b in zip(system.r, system.b)],
                "p": system.p.to_json()}
    return {"mode": "pisot_form",
            "pisot": {"min_poly": list(system.field.coeffs)},
            "maps": [{"n": n, "mu": mu.to_json()} for n, mu in zip(system.exps, system.mus)],
            "p": system.p.to_json()}


def system_hash(system) -> str:
    blob = json.dumps(system_to_json(system), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]
