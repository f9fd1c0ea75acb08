"""JSON Schemas for the CLI's ``--format json`` output.

Every document is an envelope ``{"command", "base", "result"}``; the
``result`` shape depends on the command.
"""
from __future__ import annotations

_DECIMAL = {"type": "string", "pattern": r"^-?\d+(\.\d+)?$"}
_RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_COEFFS = {"type": "array", "items": _RATIONAL, "minItems": 1}
_WORD = {"type": "string", "pattern": r"^[01()^inf]*$"}

_COUNT = {
    "type": "object",
    "required": ["kind", "label"],
    "properties": {
        "kind": {"enum": ["exact", "infinite", "inconclusive"]},
        "label": {"type": "string"},
        "n": {"type": "integer", "minimum": 0},
        "certificates": {"type": "array", "items": _WORD},
        "witness": {"type": "object"},
        "depth": {"type": "integer"},
    },
}

RESULT_SCHEMAS: dict[str, dict] = {
    "value": {
        "type": "object",
        "required": ["word", "coeffs", "decimal"],
        "properties": {"word": _WORD, "coeffs": _COEFFS, "decimal": _DECIMAL},
    },
    "orbit": {
        "type": "object",
        "required": ["start", "word", "order", "steps", "landing", "coeffs"],
        "properties": {
            "start": _DECIMAL, "word": _WORD, "order": {"enum": ["paper", "forward"]},
            "steps": {"type": "array", "items": {
                "type": "object", "required": ["digit", "decimal", "in_switch"],
                "properties": {"digit": {"enum": [0, 1]}, "decimal": _DECIMAL, "in_switch": {"type": "boolean"}},
            }},
            "landing": _DECIMAL, "coeffs": _COEFFS,
        },
    },
    "count": {
        "type": "object",
        "required": ["x", "count"],
        "properties": {"x": _DECIMAL, "count": _COUNT, "tree": {"type": ["object", "string"]}},
    },
    "classify": {
        "type": "object",
        "required": ["x", "branch_class", "M1", "M2", "in_J"],
        "properties": {
            "x": _DECIMAL,
            "branch_class": {"type": "object", "required": ["kind", "evidence"],
                             "properties": {"kind": {"enum": ["A1", "A2", "A3", "NotInSwitch"]}}},
            "M1": {"type": ["string", "null"]},
            "M2": {"type": ["array", "null"], "items": _WORD},
            "in_J": {"type": "boolean"},
            "A2_in_J": {"type": "object"},
        },
    },
    "escape": {
        "type": "object",
        "required": ["start", "word", "order", "landing", "landing_coeffs", "in_J", "not_in_A2", "source", "verified"],
        "properties": {
            "start": {"type": "object", "required": ["label", "word", "decimal"]},
            "word": _WORD, "order": {"const": "paper"}, "landing": _DECIMAL, "landing_coeffs": _COEFFS,
            "in_J": {"type": "array", "items": {"enum": [0, 1]}, "minItems": 2, "maxItems": 2},
            "in_H": {"type": ["string", "null"]},
            "not_in_A2": {"type": "array", "items": {"type": "object", "required": ["family", "status"]}},
            "source": {"enum": ["paper", "search", "reflected"]},
            "verified": {"const": True},
        },
    },
    "table1": {
        "type": "object",
        "required": ["J", "H"],
        "properties": {
            "J": {"type": "array", "items": _DECIMAL, "minItems": 2, "maxItems": 2},
            "H": {"type": "array", "minItems": 8, "maxItems": 8, "items": {
                "type": "object", "required": ["m", "column", "lo", "hi", "lo_word", "hi_word"],
            }},
        },
    },
    "verify": {
        "type": "object",
        "required": ["bounds", "summary", "checks"],
        "properties": {
            "bounds": {"type": "object"},
            "summary": {"type": "object", "required": ["pass", "fail", "inconclusive"]},
            "checks": {"type": "object", "additionalProperties": {
                "type": "object", "required": ["status", "details"],
                "properties": {"status": {"enum": ["pass", "fail", "inconclusive"]}, "details": {"type": "object"}},
            }},
        },
    },
    "constants": {
        "type": "object",
        "required": ["constants"],
        "properties": {"constants": {"type": "array", "items": {
            "type": "object", "required": ["name", "minpoly", "interval", "decimal"],
            "properties": {"name": {"type": "string"}, "minpoly": {"type": "array", "items": {"type": "integer"}},
                           "interval": {"type": "array", "items": _RATIONAL}, "decimal": _DECIMAL},
        }}},
    },
}


def envelope_schema(command: str) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["command", "base", "result"],
        "properties": {
            "command": {"const": command},
            "base": {"type": "string"},
            "result": RESULT_SCHEMAS[command],
        },
    }
