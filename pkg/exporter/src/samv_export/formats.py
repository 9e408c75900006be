"""Interchange formats: SAMV binary vectors and the JSONL corpus.

These mirror the toolkit's documented contracts so exported files load
anywhere the formats are understood: SAMV is magic ``SAMV`` + version
u16 = 1 + n u64 + d u64 + row-major little-endian float32; the corpus is
one JSON object per line with ``id``, ``label`` and optional ``text``.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAGIC = b"SAMV"
VERSION = 1
_HEADER = struct.Struct("<4sHQQ")


class ExportError(Exception):
    """Unresolvable resources or malformed inputs."""


@dataclass(frozen=True)
class Corpus:
    ids: tuple[str, ...]
    labels: tuple[str, ...]
    texts: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.ids)


def read_corpus(path) -> Corpus:
    """Read the JSONL corpus; a missing ``text`` field becomes an empty string."""
    path = Path(path)
    if not path.is_file():
        raise ExportError(f"corpus file not found: {path}")
    ids, labels, texts = [], [], []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ExportError(f"{path}: line {lineno}: invalid JSON ({exc})")
            if "id" not in record or "label" not in record:
                raise ExportError(f"{path}: line {lineno}: needs 'id' and 'label'")
            ids.append(str(record["id"]))
            labels.append(str(record["label"]))
            texts.append(str(record.get("text") or ""))
    if not ids:
        raise ExportError(f"{path}: empty corpus")
    return Corpus(ids=tuple(ids), labels=tuple(labels), texts=tuple(texts))


def write_samv(X: np.ndarray, path) -> None:
    """Write a 2-D finite float matrix as SAMV (float32 on disk)."""
    X = np.asarray(X)
    if X.ndim != 2:
        raise ExportError(f"expected a 2-D matrix, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise ExportError("matrix contains non-finite values")
    data = np.ascontiguousarray(X, dtype="<f4")
    n, d = data.shape
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as handle:
        handle.write(_HEADER.pack(MAGIC, VERSION, n, d))
        handle.write(data.tobytes())
    tmp.replace(path)


def write_label_sidecar(corpus: Corpus, path) -> None:
    """id/label TSV aligned with the exported rows."""
    path = Path(path)
    lines = ["id\tlabel"]
    lines.extend(f"{i}\t{l}" for i, l in zip(corpus.ids, corpus.labels))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
