"""Access to the published JSON schemas for CLI output and scenario files."""

from __future__ import annotations

import json
from importlib import resources

SCHEMA_NAMES = ("scenario", "analyze", "simulate", "signal", "fit", "models")


def load_schema(name: str) -> dict:
    """Load one of the published schemas by short name."""
    if name not in SCHEMA_NAMES:
        raise KeyError(f"unknown schema {name!r}; choose from {SCHEMA_NAMES}")
    ref = resources.files("bell_lab") / "schemas" / f"{name}.schema.json"
    return json.loads(ref.read_text())
