"""Run manifests: input hashes, configuration, and produced files.

Every CLI output directory gets exactly one ``manifest.json``; the hashes
let a reviewer confirm which inputs produced which outputs.
"""
from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

from . import __version__

MANIFEST_NAME = "manifest.json"


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(
    out_dir: str | Path,
    command: str,
    inputs: list[str | Path],
    config: dict,
    outputs: list[str],
    duration_seconds: float,
) -> Path:
    doc = {
        "tool": "accesswalk",
        "version": __version__,
        "command": command,
        "created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "inputs": [
            {"path": str(p), "sha256": sha256_file(p)} for p in inputs
        ],
        "config": config,
        "outputs": outputs,
        "duration_seconds": round(duration_seconds, 3),
    }
    path = Path(out_dir) / MANIFEST_NAME
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path


def verify_manifest(out_dir: str | Path) -> bool:
    """True when every recorded input hash matches the file on disk."""
    doc = json.loads((Path(out_dir) / MANIFEST_NAME).read_text(encoding="utf-8"))
    return all(
        sha256_file(entry["path"]) == entry["sha256"] for entry in doc["inputs"]
    )
