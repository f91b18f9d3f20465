"""Wire-protocol contract, read from the scoring client's published schema.

The service derives its criterion list and level range from the same
``wire.json`` the client enforces, so the two components cannot drift: if
the schema changes, both sides change together.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema


@lru_cache(maxsize=1)
def wire_schema() -> dict:
    text = resources.files("aqua").joinpath("schemas/wire.json").read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=1)
def criteria() -> tuple[str, ...]:
    """Canonical criterion order, as published in the schema."""
    return tuple(wire_schema()["$defs"]["criterion_scores"]["required"])


@lru_cache(maxsize=1)
def max_level() -> int:
    properties = wire_schema()["$defs"]["criterion_scores"]["properties"]
    levels = {spec["maximum"] for spec in properties.values()}
    assert len(levels) == 1, "criteria disagree on level range"
    return levels.pop()


def validator(part: str) -> jsonschema.Draft202012Validator:
    schema = wire_schema()
    return jsonschema.Draft202012Validator(
        {"$defs": schema["$defs"], "$ref": f"#/$defs/{part}"})
