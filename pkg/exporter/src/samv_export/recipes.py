"""Export recipes and their validation."""

from __future__ import annotations

from dataclasses import dataclass, asdict

from .formats import ExportError

KINDS = ("bert-avg", "bert-cls", "static-avg")


@dataclass(frozen=True)
class ExportRecipe:
    """What to run: pooling kind, source model or vector table, limits.

    ``layer`` indexes the transformer's hidden-state list (embeddings
    first, then one entry per encoder layer); -2 is the second-to-last
    encoder layer, the default for both bert kinds.
    """

    kind: str
    model: str | None = None
    vectors: str | None = None
    layer: int = -2
    batch_size: int = 32
    max_length: int = 512

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ExportError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "static-avg":
            if not self.vectors:
                raise ExportError("static-avg requires a word-vector file (--vectors)")
        else:
            if not self.model:
                raise ExportError(f"{self.kind} requires a model id or path (--model)")
        if self.batch_size < 1:
            raise ExportError(f"batch size must be positive, got {self.batch_size}")
        if self.max_length < 1:
            raise ExportError(f"max length must be positive, got {self.max_length}")

    def to_dict(self) -> dict:
        return asdict(self)
