"""Deterministic file output: 17-significant-digit CSV and provenance sidecars.

Every float is written as ``%.16e`` (17 significant digits), lossless for
binary64, so identical configs produce byte-identical files and plots can
round-trip values exactly.  Each output file gets a ``<name>.prov.json``
sidecar echoing the tool version, command and fully resolved config; the
sidecar contains nothing volatile, preserving byte determinism.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import __version__


def fmt_float(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.16e}"


def write_csv(path, header, rows) -> None:
    """Rows are iterables of str/float/None; floats get the fixed format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            else:
                cells.append(fmt_float(cell))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def write_provenance(path, command: str, config: dict) -> None:
    side = Path(str(path) + ".prov.json")
    payload = {
        "tool": "frontspec",
        "version": __version__,
        "command": command,
        "config": config,
    }
    side.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def write_json(path, payload: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
