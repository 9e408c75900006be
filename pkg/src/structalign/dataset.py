"""Labeled dataset container and file loaders (JSONL, TSV, label sidecar)."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataFormatError, ValidationError

__all__ = [
    "LabeledDataset",
    "load_dataset",
    "read_label_sidecar",
    "write_label_sidecar",
]


@dataclass(frozen=True)
class LabeledDataset:
    """Immutable sample collection: unique string ids, class labels, optional texts.

    Invariants enforced at construction: ids are unique, there are at least
    two samples and at least two distinct labels, and ``texts`` (when given)
    is parallel to ``ids``.
    """

    ids: tuple[str, ...]
    labels: tuple[str, ...]
    texts: tuple[str, ...] | None = None
    label_set: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        if len(self.ids) != len(self.labels):
            raise ValidationError(
                f"ids and labels length mismatch: {len(self.ids)} != {len(self.labels)}"
            )
        if len(self.ids) < 2:
            raise ValidationError("dataset needs at least 2 samples")
        if self.texts is not None and len(self.texts) != len(self.ids):
            raise ValidationError(
                f"texts length {len(self.texts)} does not match {len(self.ids)} ids"
            )
        seen = set()
        for sample_id in self.ids:
            if sample_id in seen:
                raise ValidationError(f"duplicate sample id {sample_id!r}")
            seen.add(sample_id)
        distinct = sorted(set(self.labels))
        if len(distinct) < 2:
            raise ValidationError(
                f"dataset needs at least 2 distinct labels, got {distinct}"
            )
        object.__setattr__(self, "label_set", tuple(distinct))

    @property
    def n(self) -> int:
        return len(self.ids)

    def prevalence(self, label: str) -> float:
        """Empirical fraction of ``label`` among the samples."""
        if label not in self.label_set:
            raise ValidationError(f"label {label!r} not in label set {self.label_set}")
        return sum(1 for l in self.labels if l == label) / self.n


def _load_jsonl(path: Path) -> LabeledDataset:
    ids, labels, texts = [], [], []
    any_text = False
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"{path}: line {lineno}: invalid JSON ({exc})")
            if not isinstance(record, dict):
                raise DataFormatError(f"{path}: line {lineno}: expected an object")
            if "id" not in record:
                raise DataFormatError(f"{path}: line {lineno}: missing 'id' field")
            if "label" not in record:
                raise DataFormatError(f"{path}: line {lineno}: missing 'label' field")
            ids.append(str(record["id"]))
            labels.append(str(record["label"]))
            text = record.get("text")
            if text is not None:
                any_text = True
            texts.append("" if text is None else str(text))
    return _finish(ids, labels, texts if any_text else None)


def _load_tsv(path: Path) -> LabeledDataset:
    ids, labels, texts = [], [], []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle, delimiter="\t")
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file")
        if header[:2] != ["id", "label"]:
            raise DataFormatError(
                f"{path}: expected header starting with id\\tlabel, got {header!r}"
            )
        has_text = len(header) >= 3 and header[2] == "text"
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 2:
                raise DataFormatError(f"{path}: line {lineno}: missing label column")
            ids.append(row[0])
            labels.append(row[1])
            texts.append(row[2] if has_text and len(row) > 2 else "")
    return _finish(ids, labels, texts if any(texts) else None)


def _finish(ids, labels, texts) -> LabeledDataset:
    return LabeledDataset(
        ids=tuple(ids),
        labels=tuple(labels),
        texts=None if texts is None else tuple(texts),
    )


def load_dataset(path, format: str | None = None) -> LabeledDataset:
    """Load a labeled dataset from JSONL or TSV.

    Parameters
    ----------
    path : str or Path
        Input file. JSONL: one object per line with keys ``id``, ``label``
        and optional ``text``. TSV: header row ``id\\tlabel[\\ttext]``.
    format : {'jsonl', 'tsv'}, optional
        Forces a format; by default it is inferred from the file suffix.
    """
    path = Path(path)
    if not path.is_file():
        raise DataFormatError(f"dataset file not found: {path}")
    if format is None:
        suffix = path.suffix.lower()
        if suffix in (".jsonl", ".json"):
            format = "jsonl"
        elif suffix in (".tsv", ".txt"):
            format = "tsv"
        else:
            raise DataFormatError(
                f"cannot infer format from suffix {suffix!r}; pass format="
            )
    if format == "jsonl":
        return _load_jsonl(path)
    if format == "tsv":
        return _load_tsv(path)
    raise DataFormatError(f"unknown dataset format {format!r}")


def read_label_sidecar(path) -> LabeledDataset:
    """Read an id/label TSV sidecar aligned by row order with a vectors file."""
    path = Path(path)
    if not path.is_file():
        raise DataFormatError(f"label sidecar not found: {path}")
    ids, labels = [], []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle, delimiter="\t")
        for lineno, row in enumerate(reader, start=1):
            if not row:
                continue
            if lineno == 1 and row[:2] == ["id", "label"]:
                continue  # optional header
            if len(row) < 2:
                raise DataFormatError(f"{path}: line {lineno}: expected id\\tlabel")
            ids.append(row[0])
            labels.append(row[1])
    return _finish(ids, labels, None)


def write_label_sidecar(dataset: LabeledDataset, path) -> None:
    """Write the id/label TSV sidecar for ``dataset`` in row order."""
    path = Path(path)
    lines = ["id\tlabel"]
    lines.extend(f"{i}\t{l}" for i, l in zip(dataset.ids, dataset.labels))
    from .manifest import atomic_write_text

    atomic_write_text(path, "\n".join(lines) + "\n")
