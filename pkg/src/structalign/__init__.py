"""Structural alignment metric and annotation-budget analysis toolkit.

Measures how well a labeled corpus's vector representation is aligned with
its class structure (area under the cluster-alignment curve, SAM) and
validates that measurement against low-annotation-budget learning
performance (area under the learning curve, ALC).
"""

from .alignment import (
    AlignmentCurve,
    StructuralAlignment,
    alignment_curve,
    alignment_score,
    average_precision,
    cluster_label_scores,
    curve_area,
    default_grid,
)
from .budget import ExperimentConfig, LearningCurve, evaluate, learning_curve, pearson
from .cluster import Dendrogram, WardClustering, cut, ward_linkage
from .dataset import LabeledDataset, load_dataset, read_label_sidecar, write_label_sidecar
from .errors import DataFormatError, NumericError, StructAlignError, ValidationError
from .features import BagOfWordsVectorizer, average_pool, build_bow, tokenize
from .maxent import MaxEntClassifier
from .quality import DbiCurve, davies_bouldin, dbi_curve
from .vectors import load_vectors, save_vectors, save_vectors_csv

__version__ = "0.1.0"

__all__ = [
    "AlignmentCurve",
    "BagOfWordsVectorizer",
    "DataFormatError",
    "DbiCurve",
    "Dendrogram",
    "ExperimentConfig",
    "LabeledDataset",
    "LearningCurve",
    "MaxEntClassifier",
    "NumericError",
    "StructAlignError",
    "StructuralAlignment",
    "ValidationError",
    "WardClustering",
    "alignment_curve",
    "alignment_score",
    "average_pool",
    "average_precision",
    "build_bow",
    "cluster_label_scores",
    "curve_area",
    "cut",
    "davies_bouldin",
    "dbi_curve",
    "default_grid",
    "evaluate",
    "learning_curve",
    "load_dataset",
    "load_vectors",
    "pearson",
    "read_label_sidecar",
    "save_vectors",
    "save_vectors_csv",
    "tokenize",
    "ward_linkage",
    "write_label_sidecar",
]
