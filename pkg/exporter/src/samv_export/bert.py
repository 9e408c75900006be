"""Transformer hidden-state extraction: mean over tokens or the
classifier token alone, at a configurable layer.

torch and transformers are imported lazily so the static-avg path has no
heavy dependencies.
"""

from __future__ import annotations

import logging

import numpy as np

from .formats import ExportError

logger = logging.getLogger(__name__)


def _load_backend(model_path: str):
    try:
        import torch
        from transformers import AutoModel, AutoTokenizer
    except ImportError as exc:
        raise ExportError(
            f"transformer export needs the 'bert' extra (torch, transformers): {exc}"
        )
    try:
        tokenizer = AutoTokenizer.from_pretrained(model_path)
        model = AutoModel.from_pretrained(model_path)
    except Exception as exc:
        raise ExportError(f"cannot resolve model {model_path!r}: {exc}")
    model.eval()
    return torch, tokenizer, model


def pool_transformer(texts, model_path, kind, layer=-2, batch_size=32, max_length=512):
    """Encode documents and pool hidden states at ``layer``.

    ``bert-avg`` averages the states of all non-padding positions
    (special tokens included); ``bert-cls`` takes position 0. Empty texts
    bypass the model and become zero rows with a warning. Returns the
    (n, hidden) float32 matrix and processing stats.
    """
    torch, tokenizer, model = _load_backend(model_path)
    stats = {"empty_text": 0, "truncated": 0}
    non_empty = [i for i, t in enumerate(texts) if t.strip()]
    stats["empty_text"] = len(texts) - len(non_empty)
    if stats["empty_text"]:
        logger.warning(
            "%d empty documents will be emitted as zero vectors", stats["empty_text"]
        )

    hidden = int(model.config.hidden_size)
    out = np.zeros((len(texts), hidden), dtype=np.float32)
    n_states = int(getattr(model.config, "num_hidden_layers", 0)) + 1
    if not -n_states <= layer < n_states:
        raise ExportError(
            f"layer {layer} out of range for {n_states} hidden-state entries"
        )

    with torch.no_grad():
        for start in range(0, len(non_empty), batch_size):
            batch_rows = non_empty[start : start + batch_size]
            batch = [texts[i] for i in batch_rows]
            full = tokenizer(batch, truncation=False)["input_ids"]
            stats["truncated"] += sum(1 for ids in full if len(ids) > max_length)
            enc = tokenizer(
                batch,
                padding=True,
                truncation=True,
                max_length=max_length,
                return_tensors="pt",
            )
            states = model(**enc, output_hidden_states=True).hidden_states[layer]
            if kind == "bert-cls":
                pooled = states[:, 0]
            else:
                mask = enc["attention_mask"].unsqueeze(-1).to(states.dtype)
                pooled = (states * mask).sum(dim=1) / mask.sum(dim=1)
            out[batch_rows] = pooled.cpu().numpy().astype(np.float32)
    if stats["truncated"]:
        logger.warning("%d documents were truncated to %d tokens", stats["truncated"], max_length)
    return out, stats
