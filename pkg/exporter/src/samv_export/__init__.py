"""Sentence-vector exporter for the SAMV interchange format.

Turns a labeled JSONL corpus into a dense vector file, one row per
document in corpus order, using one of three recipes: mean-pooled
transformer states (bert-avg), the classifier-token state (bert-cls), or
mean-pooled static word vectors (static-avg).
"""

from .export import ExportReport, export
from .formats import ExportError, read_corpus, write_samv
from .recipes import ExportRecipe

__version__ = "0.1.0"

__all__ = [
    "ExportError",
    "ExportRecipe",
    "ExportReport",
    "export",
    "read_corpus",
    "write_samv",
]
