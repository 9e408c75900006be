"""Unsupervised cluster-quality baseline: Davies-Bouldin index curves."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .alignment import curve_area, default_grid
from .cluster import Dendrogram
from .errors import NumericError, ValidationError
from .manifest import atomic_write_text
from .vectors import check_matrix

__all__ = ["davies_bouldin", "dbi_curve", "DbiCurve"]

logger = logging.getLogger(__name__)


def davies_bouldin(X, labels) -> float:
    """Davies-Bouldin index of a partition; lower means better clusters.

    DBI = (1/k) * sum_i max_{j != i} (S_i + S_j) / M_ij where S_i is the
    mean Euclidean distance of cluster i's members to its centroid and
    M_ij the distance between centroids i and j.
    """
    X = check_matrix(X, dtype=np.float64)
    labels = np.asarray(labels)
    n = X.shape[0]
    if labels.shape != (n,):
        raise ValidationError(f"labels shape {labels.shape} does not match n={n}")
    k = int(labels.max()) + 1
    if k < 2:
        raise ValidationError(f"Davies-Bouldin needs k >= 2 clusters, got k={k}")
    sizes = np.bincount(labels, minlength=k).astype(np.float64)
    if np.any(sizes == 0):
        raise ValidationError("every cluster index in 0..k-1 must be used")
    centroids = np.zeros((k, X.shape[1]), dtype=np.float64)
    np.add.at(centroids, labels, X)
    centroids /= sizes[:, None]
    member_dists = np.linalg.norm(X - centroids[labels], axis=1)
    dispersion = np.bincount(labels, weights=member_dists, minlength=k) / sizes
    diff = centroids[:, None, :] - centroids[None, :, :]
    separation = np.linalg.norm(diff, axis=2)
    off_diag = ~np.eye(k, dtype=bool)
    if np.any(separation[off_diag] == 0.0):
        raise NumericError(
            "degenerate partition: coincident centroids give an undefined index"
        )
    np.fill_diagonal(separation, np.inf)  # self-ratio contributes 0 to the max
    ratio = (dispersion[:, None] + dispersion[None, :]) / separation
    return float(np.mean(ratio.max(axis=1)))


@dataclass(frozen=True)
class DbiCurve:
    """Davies-Bouldin values per cluster count and the normalized area."""

    ks: np.ndarray
    values: np.ndarray
    area: float = field(default=np.nan)
    skipped: tuple[int, ...] = ()

    def __post_init__(self):
        ks = np.asarray(self.ks, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if np.any(np.diff(ks) <= 0):
            raise ValidationError("curve k values must be strictly increasing")
        if np.any(values < 0):
            raise ValidationError("Davies-Bouldin values are nonnegative")
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "values", values)
        if np.isnan(self.area):
            object.__setattr__(self, "area", curve_area(ks, values))

    def to_csv(self, path) -> None:
        lines = ["k,dbi"]
        lines.extend(
            f"{int(k)},{repr(float(v))}" for k, v in zip(self.ks, self.values)
        )
        atomic_write_text(path, "\n".join(lines) + "\n")

    def summary(self, n=None, dataset=None, representation=None) -> dict:
        return {
            "kind": "dbi",
            "area": self.area,
            "grid": {
                "k_min": int(self.ks[0]),
                "k_max": int(self.ks[-1]),
                "points": int(len(self.ks)),
                "skipped": list(self.skipped),
            },
            "n": n,
            "dataset": dataset,
            "representation": representation,
        }


def dbi_curve(X, dendrogram: Dendrogram, grid=None) -> DbiCurve:
    """Davies-Bouldin index over dendrogram cuts for each grid k.

    Degenerate ks (coincident centroids) are skipped with a logged warning
    so the area stays finite; at least two valid points are required.
    """
    X = check_matrix(X, dtype=np.float64)
    n = dendrogram.n_leaves
    if grid is None:
        grid = default_grid(n, k_min=2, k_max=n) if n > 2 else [2]
    grid = np.unique(np.asarray(list(grid), dtype=np.int64))
    if grid[0] < 2 or grid[-1] > n:
        raise ValidationError(f"grid values must lie in [2, {n}], got {grid[0]}..{grid[-1]}")
    ks, values, skipped = [], [], []
    for k in grid:
        try:
            values.append(davies_bouldin(X, dendrogram.cut(int(k))))
            ks.append(int(k))
        except NumericError:
            logger.warning("skipping degenerate partition at k=%d", k)
            skipped.append(int(k))
    if len(ks) < 2:
        raise ValidationError(
            f"needs at least 2 valid curve points for an area, got {len(ks)}"
        )
    return DbiCurve(
        ks=np.asarray(ks), values=np.asarray(values), skipped=tuple(skipped)
    )
