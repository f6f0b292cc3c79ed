"""Run manifests embedded in every report for reproducibility auditing."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Optional


def _digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def build_manifest(
    subcommand: str,
    config: dict,
    inputs: dict[str, str],
    seed: Optional[int] = None,
) -> dict:
    """No timestamps on purpose: identical inputs must yield identical reports."""
    from . import __version__

    return {
        "subcommand": subcommand,
        "config": config,
        "input_digests": {name: _digest(path) for name, path in inputs.items()},
        "tool_version": __version__,
        "seed": seed,
    }


def dump_report(payload: dict, path=None) -> str:
    """Serialize a report deterministically; write it when a path is given."""
    text = json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text
