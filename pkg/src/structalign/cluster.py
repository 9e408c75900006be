"""Agglomerative Ward clustering: dendrogram construction and partition cuts.

The merge tree is built with the nearest-neighbor-chain algorithm over a
materialized squared-distance matrix, O(n^2) time and memory. Merge costs
follow the Ward objective via the Lance-Williams recurrence computed on
squared form in float64; recorded heights are

    h(i, j) = sqrt(2 * n_i * n_j / (n_i + n_j) * ||c_i - c_j||^2)

with c the cluster centroids, matching the convention of standard linkage
tools so dendrograms are directly comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .errors import DataFormatError, ValidationError
from .manifest import atomic_write_text
from .vectors import check_matrix

__all__ = ["Dendrogram", "ward_linkage", "cut", "WardClustering"]


@dataclass(frozen=True)
class Dendrogram:
    """Ordered merge list over ``n_leaves`` samples.

    ``merges`` has one row per merge: (left id, right id, height, size) with
    left < right. Leaves are clusters 0..n-1; merge i creates cluster n+i.
    Heights are nondecreasing (Ward admits no inversions).
    """

    merges: np.ndarray
    n_leaves: int

    def __post_init__(self):
        merges = np.asarray(self.merges, dtype=np.float64)
        n = self.n_leaves
        if merges.shape != (n - 1, 4):
            raise ValidationError(
                f"expected {n - 1} merges of 4 fields, got shape {merges.shape}"
            )
        if n >= 2 and int(merges[-1, 3]) != n:
            raise ValidationError("final merge must contain all leaves")
        if np.any(np.diff(merges[:, 2]) < 0):
            raise ValidationError("merge heights must be nondecreasing")
        object.__setattr__(self, "merges", merges)

    @property
    def heights(self) -> np.ndarray:
        return self.merges[:, 2]

    def cut(self, k: int) -> np.ndarray:
        """Partition into ``k`` clusters by undoing the last k-1 merges.

        Returns a length-n int array of cluster indices in 0..k-1, assigned
        in order of each cluster's smallest member row.
        """
        return cut(self, k)

    def to_csv(self, path) -> None:
        """Write merges as CSV with columns left,right,height,size."""
        lines = ["left,right,height,size"]
        for left, right, height, size in self.merges:
            lines.append(f"{int(left)},{int(right)},{repr(float(height))},{int(size)}")
        atomic_write_text(path, "\n".join(lines) + "\n")


def _pairwise_sq_dists(X: np.ndarray) -> np.ndarray:
    sq = np.einsum("ij,ij->i", X, X)
    D = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(D, 0.0, out=D)
    np.fill_diagonal(D, np.inf)
    return D


class _UnionFind:
    """Union-find that assigns fresh cluster ids n, n+1, ... to merges."""

    def __init__(self, n: int):
        self.parent = np.arange(2 * n - 1)
        self.size = np.ones(2 * n - 1, dtype=np.int64)
        self.next_label = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def merge(self, x_root: int, y_root: int) -> int:
        label = self.next_label
        self.next_label += 1
        self.parent[x_root] = self.parent[y_root] = label
        self.size[label] = self.size[x_root] + self.size[y_root]
        return int(self.size[label])


def _relabel(raw: np.ndarray, n: int) -> np.ndarray:
    """Convert leaf-slot merge records into cluster-id records, sorted by cost."""
    order = np.argsort(raw[:, 2], kind="stable")
    raw = raw[order]
    merges = np.empty((n - 1, 4), dtype=np.float64)
    uf = _UnionFind(n)
    for i in range(n - 1):
        left = uf.find(int(raw[i, 0]))
        right = uf.find(int(raw[i, 1]))
        if left > right:
            left, right = right, left
        size = uf.merge(left, right)
        merges[i] = (left, right, np.sqrt(max(raw[i, 2], 0.0)), size)
    return merges


def ward_linkage(X) -> Dendrogram:
    """Build the Ward dendrogram of the rows of ``X``.

    Nearest-neighbor-chain merging on the squared-cost matrix. Ties in the
    nearest-neighbor scans resolve to the smallest cluster slot, giving
    deterministic output across runs and platforms.

    Parameters
    ----------
    X : (n, d) array
        Finite sample matrix, n >= 2. Computations run in float64.
    """
    X = check_matrix(X, dtype=np.float64)
    n = X.shape[0]
    if n < 2:
        raise ValidationError(f"clustering needs n >= 2 samples, got {n}")

    # Squared Ward costs between current clusters; slot j holds the cluster
    # that most recently absorbed leaf slot j.
    D = _pairwise_sq_dists(X)
    size = np.ones(n, dtype=np.float64)
    active = np.ones(n, dtype=bool)
    raw = np.empty((n - 1, 3), dtype=np.float64)

    chain = np.empty(n, dtype=np.int64)
    chain_len = 0
    for step in range(n - 1):
        if chain_len == 0:
            chain[0] = int(np.flatnonzero(active)[0])
            chain_len = 1
        while True:
            x = chain[chain_len - 1]
            row = D[x]
            if chain_len > 1:
                y = chain[chain_len - 2]
                current_min = row[y]
            else:
                y = -1
                current_min = np.inf
            # Strict < keeps the previous chain element on ties, terminating
            # the chain; otherwise argmin picks the smallest active slot.
            candidate = int(np.argmin(np.where(active, row, np.inf)))
            if row[candidate] < current_min:
                current_min = row[candidate]
                y = candidate
            if chain_len > 1 and y == chain[chain_len - 2]:
                break
            chain[chain_len] = y
            chain_len += 1
        chain_len -= 2

        if x > y:
            x, y = y, x
        nx, ny = size[x], size[y]
        raw[step] = (x, y, current_min)

        # Lance-Williams update (squared Ward form) into slot y.
        t = 1.0 / (nx + ny + size)
        merged = ((size + nx) * D[x] + (size + ny) * D[y] - size * current_min) * t
        merged[~active] = np.inf
        D[y] = merged
        D[:, y] = merged
        D[y, y] = np.inf
        active[x] = False
        D[x] = np.inf
        D[:, x] = np.inf
        size[y] = nx + ny
        size[x] = 0.0

    return Dendrogram(merges=_relabel(raw, n), n_leaves=n)


def cut(dendrogram: Dendrogram, k: int) -> np.ndarray:
    """Extract the k-cluster partition from a dendrogram.

    Applies the first n-k merges; cluster indices are assigned in order of
    each cluster's smallest member row, so every k in [1, n] yields exactly
    k non-empty, deterministically numbered clusters.
    """
    n = dendrogram.n_leaves
    if not 1 <= k <= n:
        raise ValidationError(f"k must be in [1, {n}], got {k}")
    parent = np.arange(n + (n - k))
    for i in range(n - k):
        left, right = int(dendrogram.merges[i, 0]), int(dendrogram.merges[i, 1])
        parent[left] = parent[right] = n + i

    def find(v: int) -> int:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    labels = np.empty(n, dtype=np.int64)
    relabel: dict[int, int] = {}
    for leaf in range(n):
        root = find(leaf)
        if root not in relabel:
            relabel[root] = len(relabel)
        labels[leaf] = relabel[root]
    return labels


def load_dendrogram_csv(path, n_leaves: int) -> Dendrogram:
    """Read back a dendrogram written by :meth:`Dendrogram.to_csv`."""
    rows = []
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip()
        if header != "left,right,height,size":
            raise DataFormatError(f"{path}: unexpected header {header!r}")
        for line in handle:
            line = line.strip()
            if line:
                left, right, height, size = line.split(",")
                rows.append((float(left), float(right), float(height), float(size)))
    return Dendrogram(merges=np.asarray(rows, dtype=np.float64), n_leaves=n_leaves)


class WardClustering(BaseEstimator):
    """Estimator wrapper: fit builds the dendrogram, labels_ holds the cut.

    Parameters
    ----------
    n_clusters : int, default=2
        Partition size extracted into ``labels_`` after fitting.
    """

    def __init__(self, n_clusters: int = 2):
        self.n_clusters = n_clusters

    def fit(self, X, y=None):
        self.dendrogram_ = ward_linkage(X)
        self.labels_ = self.dendrogram_.cut(self.n_clusters)
        self.n_features_in_ = np.asarray(X).shape[1]
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def cut(self, k: int) -> np.ndarray:
        check_is_fitted(self, "dendrogram_")
        return self.dendrogram_.cut(k)
