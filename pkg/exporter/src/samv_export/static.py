"""Static word-vector tables and mean pooling over document tokens.

The tokenizer matches the toolkit's bag-of-words rule (lowercase, split
on runs of non-alphanumeric characters) so both featurization paths see
identical token streams.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path

import numpy as np

from .formats import ExportError

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def load_word_vectors(path):
    """Parse a text word-vector table: ``token v1 ... vd`` per line.

    A first line of exactly two integers (the fastText convention) is
    treated as a count/dimension header and skipped. Returns a token ->
    row index dict and the (|vocab|, d) float64 table.
    """
    path = Path(path)
    if not path.is_file():
        raise ExportError(f"word-vector file not found: {path}")
    index: dict[str, int] = {}
    rows: list[np.ndarray] = []
    dim = None
    with open(path, encoding="utf-8") as handle:
        first = handle.readline().rstrip("\n")
        parts = first.split(" ")
        header = len(parts) == 2 and all(p.isdigit() for p in parts)
        lines = [] if header else [first]
        for line in lines + handle.read().splitlines():
            if not line:
                continue
            pieces = line.rstrip().split(" ")
            token, values = pieces[0], pieces[1:]
            if dim is None:
                dim = len(values)
                if dim < 1:
                    raise ExportError(f"{path}: no vector values on first row")
            elif len(values) != dim:
                raise ExportError(
                    f"{path}: token {token!r} has {len(values)} values, expected {dim}"
                )
            if token in index:
                continue  # keep the first occurrence, like common loaders
            try:
                vector = np.asarray([float(v) for v in values], dtype=np.float64)
            except ValueError as exc:
                raise ExportError(f"{path}: token {token!r}: {exc}")
            index[token] = len(rows)
            rows.append(vector)
    if not rows:
        raise ExportError(f"{path}: empty word-vector table")
    return index, np.vstack(rows)


def pool_static(texts, index, table) -> tuple[np.ndarray, dict]:
    """Mean of each document's in-vocabulary token vectors.

    Documents with no in-vocabulary tokens (or no text) become zero rows
    and are logged; the returned stats count them.
    """
    out = np.zeros((len(texts), table.shape[1]), dtype=np.float64)
    stats = {"empty_text": 0, "zero_vector": 0}
    for i, text in enumerate(texts):
        if not text.strip():
            stats["empty_text"] += 1
            logger.warning("document %d: empty text, emitting a zero vector", i)
            continue
        hits = [index[t] for t in tokenize(text) if t in index]
        if not hits:
            stats["zero_vector"] += 1
            logger.warning(
                "document %d: no in-vocabulary tokens, emitting a zero vector", i
            )
            continue
        out[i] = table[hits].mean(axis=0)
    return out.astype(np.float32), stats
