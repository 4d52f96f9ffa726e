"""YAML model files: schema validation and construction of scenarios.

A model file names a factory and its parameters, optionally overrides the
kernel coefficients and the magnetic data, and carries window, spectral
and propagation options. Validation errors report the line and column of
the offending node.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import yaml

from . import models
from .errors import ModelFileError

__all__ = ["SCHEMA", "ModelSpec", "load_model_file", "parse_model_text", "shipped_model_files"]

SCHEMA_VERSION = 1

_number = {"type": "number"}
_complex = {"oneOf": [_number, {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}]}
_coeffs = {
    "type": "object",
    "patternProperties": {r"^-?\d+(,-?\d+)*$": _complex},
    "additionalProperties": False,
}
_int_list = {"type": "array", "items": {"type": "integer"}}

_PARAMS = {
    "two_limit_line": {
        "v_minus": _number,
        "v_plus": _number,
        "perturbation": _coeffs,
    },
    "hofstadter": {
        "p": {"type": "integer"},
        "q": {"type": "integer", "minimum": 1, "maximum": 16},
        "anisotropy": _number,
    },
    "wiener_hopf_line": {"edge_limit": _number},
    "group_bundle": {"m": {"type": "integer", "minimum": 1}, "twist": _complex},
    "pair_model": {"n": {"type": "integer", "minimum": 1}, "seed": {"type": "integer"}},
    "twisted_z2": {},
    "heisenberg_wiener_hopf": {"window": {"type": "integer", "minimum": 1}},
    "partial_action_complement": {
        "base": {"$ref": "#/$defs/scenario"},
        "K": _int_list,
    },
}


def _params_schema(name):
    return {"type": "object", "properties": _PARAMS[name], "additionalProperties": False}


SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "scenario"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "scenario": {"$ref": "#/$defs/scenario"},
        "kernel": {"$ref": "#/$defs/kernel"},
        "cocycle": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "flux": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                "edge_phase": {"type": "array", "items": _number, "minItems": 1},
            },
        },
        "windows": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}},
        },
        "spectral": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "angles": {"type": "integer", "minimum": 8},
                "symbol_grid": {"type": "integer", "minimum": 8},
                "bloch_grid": {"type": "integer", "minimum": 2},
                "hausdorff_tol": {"type": "number", "exclusiveMinimum": 0},
                "cluster_tol": {"type": "number", "exclusiveMinimum": 0},
                "stability_fraction": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "edge_fraction": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.5},
                "edge_mass": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
            },
        },
        "propagation": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kappa"],
            "properties": {
                "kappa": {"type": "array", "items": _number, "minItems": 2, "maxItems": 2},
                "plateau": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                "eps": {"type": "number", "exclusiveMinimum": 0},
                "side": {"enum": ["+", "-"]},
                "window": {"type": "integer", "minimum": 4},
                "t_max": {"type": "number", "minimum": 0},
                "t_count": {"type": "integer", "minimum": 1},
                "trials": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
            },
        },
    },
    "$defs": {
        "kernel": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"coefficients": _coeffs, "s": _complex},
        },
        "scenario": {
            "type": "object",
            "additionalProperties": False,
            "required": ["factory"],
            "properties": {
                "factory": {"enum": sorted(_PARAMS)},
                "params": {"type": "object"},
                "kernel": {"$ref": "#/$defs/kernel"},
            },
            "allOf": [
                {"if": {"properties": {"factory": {"const": k}}},
                 "then": {"properties": {"params": _params_schema(k)}}}
                for k in sorted(_PARAMS)
            ],
        },
    },
}


@dataclass
class ModelSpec:
    model: models.ScenarioModel
    name: str
    windows: tuple = ()
    spectral: dict = field(default_factory=dict)
    propagation: dict = field(default_factory=dict)
    source: str = ""


def _node_mark(root, path):
    node = root
    mark = getattr(root, "start_mark", None)
    for key in path:
        if isinstance(node, yaml.MappingNode):
            nxt = None
            for k, v in node.value:
                if k.value == str(key):
                    nxt = v
                    break
            if nxt is None:
                break
            node = nxt
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
        else:
            break
        mark = node.start_mark
    return mark


def _where(source, mark) -> str:
    if mark is None:
        return source
    return f"{source}:{mark.line + 1}:{mark.column + 1}"


def _complex_value(v) -> complex:
    if isinstance(v, list):
        return complex(v[0], v[1])
    return v


def _key(k: str):
    parts = [int(c) for c in k.split(",")]
    return parts[0] if len(parts) == 1 else tuple(parts)


def _coeff_map(block: dict) -> dict:
    return {_key(k): _complex_value(v) for k, v in block.items()}


def _build(scn: dict, kernel: dict | None, cocycle: dict | None) -> models.ScenarioModel:
    factory = scn["factory"]
    params = dict(scn.get("params") or {})
    kernel = dict(scn.get("kernel") or kernel or {})
    coeffs = _coeff_map(kernel["coefficients"]) if "coefficients" in kernel else None
    cocycle = cocycle or {}
    if factory == "partial_action_complement":
        base = _build(params["base"], kernel or None, cocycle)
        return models.partial_action_complement(base, params.get("K", []))
    if factory == "two_limit_line":
        if "perturbation" in params:
            params["perturbation"] = _coeff_map(params["perturbation"])
        return models.two_limit_line(hopping=coeffs, **params)
    if factory == "hofstadter":
        if "flux" in cocycle:
            params["p"], params["q"] = cocycle["flux"]
        return models.hofstadter(hopping=coeffs, **params)
    if factory == "wiener_hopf_line":
        phases = cocycle.get("edge_phase")
        edge = None if phases is None else (lambda j, ph=tuple(phases): ph[j % len(ph)])
        return models.wiener_hopf_line(coeffs, edge_phase=edge, **params)
    if factory == "group_bundle":
        if "twist" in params:
            params["twist"] = _complex_value(params["twist"])
        return models.group_bundle(coeffs=coeffs, **params)
    if factory == "pair_model":
        return models.pair_model(s=_complex_value(kernel.get("s", 0.0)), **params)
    if factory == "twisted_z2":
        return models.twisted_z2(coeffs)
    if factory == "heisenberg_wiener_hopf":
        return models.heisenberg_wiener_hopf(coeffs, **params)
    raise ModelFileError(f"unknown factory {factory!r}")


def parse_model_text(text: str, source: str = "<model>") -> ModelSpec:
    try:
        root = yaml.compose(text)
        doc = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        raise ModelFileError(f"{_where(source, exc.problem_mark)}: {exc.problem}") from exc
    if not isinstance(doc, dict):
        raise ModelFileError(f"{source}: a model file must be a mapping")
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        path = list(err.absolute_path)
        loc = "/".join(str(p) for p in path) or "<root>"
        raise ModelFileError(f"{_where(source, _node_mark(root, path))}: {loc}: {err.message}")
    try:
        model = _build(doc["scenario"], doc.get("kernel"), doc.get("cocycle"))
    except (TypeError, ValueError) as exc:
        mark = _node_mark(root, ["scenario"])
        raise ModelFileError(f"{_where(source, mark)}: scenario: {exc}") from exc
    return ModelSpec(
        model=model,
        name=doc.get("name", model.name),
        windows=tuple((doc.get("windows") or {}).get("sizes", ())),
        spectral=dict(doc.get("spectral") or {}),
        propagation=dict(doc.get("propagation") or {}),
        source=source,
    )


def load_model_file(path) -> ModelSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModelFileError(f"{path}: {exc.strerror}") from exc
    return parse_model_text(text, str(path))


def shipped_model_files() -> list:
    """Model files bundled with the package, sorted by name."""
    root = resources.files("groupoid_spectra") / "data"
    return sorted((p for p in root.iterdir() if p.name.endswith(".yaml")), key=lambda p: p.name)
