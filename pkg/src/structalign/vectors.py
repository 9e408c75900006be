"""Dense vector matrix interchange: SAMV binary format and headered CSV.

Binary layout (all integers little-endian): magic ``SAMV`` (4 bytes),
version u16 = 1, n u64, d u64, then n*d IEEE-754 binary32 values row-major.
The 32-bit container is the canonical interchange precision; matrices load
back bit-exactly when saved from float32.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import DataFormatError, NumericError, ValidationError
from .manifest import atomic_write_bytes, atomic_write_text

MAGIC = b"SAMV"
VERSION = 1
_HEADER = struct.Struct("<4sHQQ")

__all__ = ["save_vectors", "load_vectors", "save_vectors_csv", "check_matrix"]


def check_matrix(X, dtype=None) -> np.ndarray:
    """Validate a 2-D finite matrix, reporting the first offending row."""
    X = np.asarray(X, dtype=dtype)
    if X.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise ValidationError(f"matrix must be non-empty, got shape {X.shape}")
    finite_rows = np.isfinite(X).all(axis=1)
    if not finite_rows.all():
        row = int(np.flatnonzero(~finite_rows)[0])
        raise NumericError(f"non-finite value in matrix row {row}")
    return X


def save_vectors(X, path) -> None:
    """Write ``X`` in the SAMV binary format (values stored as float32)."""
    X = check_matrix(X)
    data = np.ascontiguousarray(X, dtype="<f4")
    n, d = data.shape
    payload = _HEADER.pack(MAGIC, VERSION, n, d) + data.tobytes()
    atomic_write_bytes(path, payload)


def _load_binary(path: Path, raw: bytes) -> np.ndarray:
    if len(raw) < _HEADER.size:
        raise DataFormatError(f"{path}: truncated header")
    magic, version, n, d = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise DataFormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise DataFormatError(f"{path}: unsupported version {version}")
    expected = _HEADER.size + 4 * n * d
    if len(raw) != expected:
        raise DataFormatError(
            f"{path}: payload length {len(raw)} does not match "
            f"declared {n}x{d} matrix ({expected} bytes)"
        )
    data = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(n, d)
    return check_matrix(np.array(data, dtype=np.float32))


def _load_csv(path: Path) -> np.ndarray:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n")
        columns = header.split(",")
        if len(columns) < 2 or columns[0] != "id" or columns[1] != "v0":
            raise DataFormatError(
                f"{path}: expected CSV header 'id,v0,...', got {header[:60]!r}"
            )
        d = len(columns) - 1
        rows = []
        for lineno, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != d + 1:
                raise DataFormatError(
                    f"{path}: line {lineno}: expected {d + 1} columns, got {len(parts)}"
                )
            try:
                rows.append([float(v) for v in parts[1:]])
            except ValueError as exc:
                raise DataFormatError(f"{path}: line {lineno}: {exc}")
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return check_matrix(np.asarray(rows, dtype=np.float64))


def load_vectors(path) -> np.ndarray:
    """Load a vector matrix from a SAMV binary file or a headered CSV."""
    path = Path(path)
    if not path.is_file():
        raise DataFormatError(f"vectors file not found: {path}")
    raw = path.read_bytes()
    if raw[:4] == MAGIC:
        return _load_binary(path, raw)
    try:
        raw.decode("utf-8")
    except UnicodeDecodeError:
        raise DataFormatError(
            f"{path}: bad magic {raw[:4]!r}, expected {MAGIC!r} (not a text file either)"
        )
    return _load_csv(path)


def save_vectors_csv(X, path, ids=None) -> None:
    """Write the CSV form with header ``id,v0,...,v{d-1}``.

    Floats are serialized with repr (full round-trip precision).
    """
    X = check_matrix(X)
    n, d = X.shape
    if ids is None:
        ids = [str(i) for i in range(n)]
    if len(ids) != n:
        raise ValidationError(f"{len(ids)} ids for {n} rows")
    lines = ["id," + ",".join(f"v{j}" for j in range(d))]
    for sample_id, row in zip(ids, X):
        lines.append(str(sample_id) + "," + ",".join(repr(float(v)) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")
