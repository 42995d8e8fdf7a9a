"""Consolidated JSON reports: schema, validation, canonical serialization.

Reports are deterministic for a fixed configuration: keys sorted, lists in
canonical order, rationals as "p/q" strings.  The only run-dependent field
is generated_at, which comparisons are expected to strip.
"""

import json
import os
import tempfile
from datetime import datetime, timezone
from fractions import Fraction

import jsonschema

SCHEMA_VERSION = 1

CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["verdict", "steps", "witnesses", "axioms"],
    "properties": {
        "verdict": {"enum": ["PASS", "FAIL", "CONDITIONAL"]},
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["claim", "evidence"],
                "properties": {
                    "claim": {"type": "string"},
                    "evidence": {"type": "string"},
                },
            },
        },
        "witnesses": {"type": "array"},
        "axioms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "statement"],
                "properties": {
                    "name": {"type": "string"},
                    "statement": {"type": "string"},
                },
            },
        },
    },
}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "$id": "https://quartic-cremona/report.schema.json",
    "type": "object",
    "required": [
        "schema_version",
        "tool",
        "command",
        "config",
        "sections",
        "overall_verdict",
        "generated_at",
    ],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "tool": {"type": "string"},
        "command": {"type": "string"},
        "config": {"type": "object"},
        "generated_at": {"type": "string"},
        "overall_verdict": {"enum": ["PASS", "FAIL", "CONDITIONAL"]},
        "sections": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "verdict"],
                "properties": {
                    "name": {"type": "string"},
                    "verdict": {"enum": ["PASS", "FAIL", "CONDITIONAL", "INFO"]},
                    "certificate": CERTIFICATE_SCHEMA,
                    "data": {"type": "object"},
                },
            },
        },
    },
}


def jsonable(value):
    """Recursively convert exact values (Fractions, tuples) to JSON types."""
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else str(value.numerator)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def report_schema_validate(doc) -> bool:
    try:
        jsonschema.validate(doc, REPORT_SCHEMA)
        return True
    except jsonschema.ValidationError:
        return False


def validation_errors(doc):
    validator = jsonschema.Draft7Validator(REPORT_SCHEMA)
    return [e.message for e in validator.iter_errors(doc)]


def build_report(command: str, config: dict, sections, overall: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "qcremona",
        "command": command,
        "config": jsonable(config),
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "sections": sections,
        "overall_verdict": overall,
    }


def render_report(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_report_atomic(doc: dict, path: str):
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".report-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(render_report(doc))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
