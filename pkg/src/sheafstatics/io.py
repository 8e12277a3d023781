"""Diagram files (JSON) and result serialization."""
from __future__ import annotations

import json
import math
from pathlib import Path

import jsonschema
import numpy as np

from .complex import CellComplex, Diagram
from .errors import SchemaError

_POINT = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_IDS = {"type": "array", "items": {"type": "string"}, "uniqueItems": True}

DIAGRAM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["dimension", "closed", "cells", "incidence", "realization"],
    "properties": {
        "dimension": {"const": 2},
        "closed": {"type": "boolean"},
        "cells": {
            "type": "object",
            "additionalProperties": False,
            "required": ["vertices", "edges", "faces"],
            "properties": {"vertices": _IDS, "edges": _IDS, "faces": _IDS},
        },
        "incidence": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [{"type": "string"}, {"type": "string"}, {"enum": [-1, 1]}],
                "items": False,
                "minItems": 3,
            },
        },
        "realization": {"type": "object", "additionalProperties": _POINT},
        "open_edge_directions": {"type": "object", "additionalProperties": _POINT},
        "spring_constants": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}


def diagram_from_dict(doc: dict) -> Diagram:
    try:
        jsonschema.validate(doc, DIAGRAM_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {exc.message}") from None
    cells = doc["cells"]
    missing = [v for v in cells["vertices"] if v not in doc["realization"]]
    if missing:
        raise SchemaError(f"realization is missing vertices {missing}")
    cx = CellComplex(cells["vertices"], cells["edges"], cells["faces"],
                     [tuple(t) for t in doc["incidence"]], closed=doc["closed"])
    return Diagram(cx, doc["realization"], doc.get("open_edge_directions"), doc.get("spring_constants"))


def diagram_to_dict(diagram: Diagram) -> dict:
    cx = diagram.complex
    doc = {
        "dimension": 2,
        "closed": cx.closed,
        "cells": {"vertices": list(cx.vertices), "edges": list(cx.edges), "faces": list(cx.faces)},
        "incidence": [[lo, hi, s] for (lo, hi), s in cx.incidence.items()],
        "realization": {v: [float(x) for x in diagram.point(v)] for v in cx.vertices},
    }
    if diagram.directions:
        doc["open_edge_directions"] = {e: [float(x) for x in d] for e, d in diagram.directions.items()}
    if diagram.springs:
        doc["spring_constants"] = dict(diagram.springs)
    return doc


def read_diagram(path) -> Diagram:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None
    return diagram_from_dict(doc)


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(x, (dict, list, tuple, np.ndarray)) for x in seq):
            return "[" + ", ".join(_encode(x, indent, level) for x in seq) + "]"
        return "[\n" + ",\n".join(pad + _encode(x, indent, level + 1) for x in seq) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        text = "%.17g" % x
        return text if any(c in text for c in ".en") else text + ".0"
    return json.dumps(obj)


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def write_json(obj, path=None) -> str:
    text = dumps(obj)
    if path is not None:
        Path(path).write_text(text)
    return text
