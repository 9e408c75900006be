"""Run manifests and atomic file output helpers.

Every successful CLI run records a manifest (command, resolved arguments,
input digests, seed list, version, timestamps) sufficient to re-execute it
and reproduce byte-identical CSV artifacts.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from pathlib import Path

from .errors import DataFormatError, ValidationError

TOOLKIT_VERSION = "0.1.0"

MANIFEST_NAME = "manifest.json"


def atomic_write_bytes(path, payload: bytes) -> None:
    """Write ``payload`` to ``path`` via a temp file + rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def file_digest(path) -> str:
    """SHA-256 hex digest of a file's contents."""
    path = Path(path)
    if not path.is_file():
        raise DataFormatError(f"cannot digest missing file: {path}")
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def build_manifest(command: str, args: dict, inputs: list, seeds=()) -> dict:
    """Assemble a manifest dict; ``finished_at`` is stamped by write_manifest."""
    return {
        "command": command,
        "args": dict(args),
        "inputs": {str(p): file_digest(p) for p in inputs},
        "seeds": list(seeds),
        "version": TOOLKIT_VERSION,
        "started_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }


def write_manifest(manifest: dict, path) -> Path:
    """Stamp ``finished_at`` and write the manifest JSON to ``path``."""
    manifest = dict(manifest)
    manifest["finished_at"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    path = Path(path)
    atomic_write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def load_manifest(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise DataFormatError(f"manifest not found: {path}")
    try:
        with open(path, encoding="utf-8") as handle:
            manifest = json.load(handle)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: invalid manifest JSON ({exc})")
    for key in ("command", "args", "inputs", "version"):
        if key not in manifest:
            raise DataFormatError(f"{path}: manifest missing key {key!r}")
    return manifest


def verify_inputs(manifest: dict) -> None:
    """Recompute input digests; mismatch means the run is not reproducible."""
    for path, recorded in manifest["inputs"].items():
        actual = file_digest(path)
        if actual != recorded:
            raise ValidationError(
                f"input {path} changed since the recorded run "
                f"(digest {actual[:12]}... != {recorded[:12]}...)"
            )
