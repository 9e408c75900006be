"""Export orchestration: run a recipe over a corpus, write SAMV + sidecar."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .formats import Corpus, ExportError, read_corpus, write_label_sidecar, write_samv
from .recipes import ExportRecipe
from .static import load_word_vectors, pool_static


@dataclass(frozen=True)
class ExportReport:
    """What was written and what happened along the way."""

    out_path: str
    n: int
    dim: int
    stats: dict
    sidecar_path: str


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _versions(recipe: ExportRecipe) -> dict:
    versions = {"numpy": np.__version__}
    if recipe.kind != "static-avg":
        import torch
        import transformers

        versions["torch"] = torch.__version__
        versions["transformers"] = transformers.__version__
    return versions


def export(recipe: ExportRecipe, corpus_path, out_path, labels_sidecar=True) -> ExportReport:
    """Encode the corpus with ``recipe`` and write the SAMV vector file.

    Rows follow corpus order exactly. A ``<out>.meta.json`` sidecar
    records the recipe, library versions, input/output digests, and
    per-run counts (empty texts, zero vectors, truncations). static-avg
    reruns are bit-exact; transformer kinds are reproducible up to
    backend numeric variation, which the sidecar's version pins document.
    """
    corpus: Corpus = read_corpus(corpus_path)
    if recipe.kind == "static-avg":
        index, table = load_word_vectors(recipe.vectors)
        X, stats = pool_static(corpus.texts, index, table)
    else:
        from .bert import pool_transformer

        X, stats = pool_transformer(
            corpus.texts,
            recipe.model,
            kind=recipe.kind,
            layer=recipe.layer,
            batch_size=recipe.batch_size,
            max_length=recipe.max_length,
        )
    if X.shape[0] != len(corpus):
        raise ExportError(
            f"internal row mismatch: {X.shape[0]} vectors for {len(corpus)} documents"
        )
    out_path = Path(out_path)
    write_samv(X, out_path)
    if labels_sidecar:
        write_label_sidecar(corpus, out_path.with_name(out_path.name + ".labels.tsv"))

    sidecar = {
        "recipe": recipe.to_dict(),
        "versions": _versions(recipe),
        "digests": {
            "input": _sha256(corpus_path),
            "output": _sha256(out_path),
        },
        "counts": {"documents": len(corpus), **stats},
        "n": int(X.shape[0]),
        "dim": int(X.shape[1]),
    }
    if recipe.vectors:
        sidecar["digests"]["vectors"] = _sha256(recipe.vectors)
    sidecar_path = out_path.with_name(out_path.name + ".meta.json")
    sidecar_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return ExportReport(
        out_path=str(out_path),
        n=int(X.shape[0]),
        dim=int(X.shape[1]),
        stats=dict(stats),
        sidecar_path=str(sidecar_path),
    )
