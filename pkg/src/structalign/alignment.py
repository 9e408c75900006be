"""Cluster-conditional label scores, alignment curves, and their area (SAM).

For a k-cluster partition, each sample receives per-class scores equal to
its cluster's label distribution. Ranking samples by those scores gives a
precision-recall curve per class; the partition's alignment is the area
under it (tie-grouped average precision). Sweeping k over the dendrogram
produces the alignment curve, and the normalized area under that curve is
the structural alignment metric (SAM).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from .cluster import Dendrogram, ward_linkage
from .errors import ValidationError
from .manifest import atomic_write_text

__all__ = [
    "cluster_label_scores",
    "average_precision",
    "alignment_score",
    "alignment_curve",
    "curve_area",
    "default_grid",
    "AlignmentCurve",
    "StructuralAlignment",
]

MODES = ("balanced", "target")

# Above this many grid points the auto policy switches from every k to a
# mixed dense-then-geometric grid; each curve point costs O(n log n).
FULL_GRID_LIMIT = 2000
_DENSE_HEAD = 100
_GEOMETRIC_POINTS = 300


def cluster_label_scores(assignment, y, classes=None):
    """Per-sample class scores from cluster label distributions.

    Entry (i, c) is the fraction of samples in i's cluster carrying class
    c, so every row sums to 1.

    Returns
    -------
    scores : (n, n_classes) float64 array
    classes : sorted class array (computed from ``y`` when not given)
    """
    assignment = np.asarray(assignment)
    y = np.asarray(y)
    if assignment.shape != y.shape or assignment.ndim != 1:
        raise ValidationError(
            f"assignment length {assignment.shape} does not match labels {y.shape}"
        )
    if classes is None:
        classes = np.unique(y)
    y_idx = np.searchsorted(classes, y)
    if np.any(y_idx >= len(classes)) or np.any(classes[y_idx] != y):
        raise ValidationError("labels contain classes outside the class list")
    k = int(assignment.max()) + 1
    if assignment.min() < 0:
        raise ValidationError("cluster indices must be nonnegative")
    counts = np.zeros((k, len(classes)), dtype=np.float64)
    np.add.at(counts, (assignment, y_idx), 1.0)
    sizes = counts.sum(axis=1)
    if np.any(sizes == 0):
        raise ValidationError("every cluster index in 0..k-1 must be used")
    scores = counts[assignment] / sizes[assignment, None]
    return scores, classes


def average_precision(scores, gold) -> float:
    """Area under the precision-recall curve, tie-grouped form.

    Samples are sorted by descending score; tied scores form a single
    threshold step, and the result is sum(delta_recall * precision) over
    steps. Constant scores therefore give exactly the positive prevalence.
    """
    scores = np.asarray(scores, dtype=np.float64)
    gold = np.asarray(gold, dtype=bool)
    if scores.shape != gold.shape or scores.ndim != 1:
        raise ValidationError(f"scores {scores.shape} vs gold {gold.shape}")
    total_pos = int(gold.sum())
    if total_pos == 0:
        raise ValidationError("average precision undefined with zero positives")
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_gold = gold[order]
    # last index of each tied block
    boundary = np.flatnonzero(
        np.append(sorted_scores[1:] != sorted_scores[:-1], True)
    )
    tp = np.cumsum(sorted_gold)[boundary].astype(np.float64)
    count = (boundary + 1).astype(np.float64)
    precision = tp / count
    recall = tp / total_pos
    delta = np.diff(recall, prepend=0.0)
    return float(np.sum(delta * precision))


def _check_mode(mode, target, classes):
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "target":
        if target is None:
            raise ValidationError("target mode requires a target label")
        if target not in classes:
            raise ValidationError(
                f"target label {target!r} absent from dataset classes {list(classes)}"
            )


def alignment_score(assignment, y, mode="balanced", target=None) -> float:
    """Alignment of one partition with the labels.

    ``balanced``: unweighted mean of per-class average precisions.
    ``target``: average precision of the target class only.
    """
    y = np.asarray(y)
    scores, classes = cluster_label_scores(assignment, y)
    _check_mode(mode, target, classes)
    if mode == "target":
        col = int(np.searchsorted(classes, target))
        return average_precision(scores[:, col], y == target)
    per_class = [
        average_precision(scores[:, col], y == cls)
        for col, cls in enumerate(classes)
    ]
    return float(np.mean(per_class))


def curve_area(ks, values) -> float:
    """Trapezoidal integral over k, normalized by the k-range."""
    ks = np.asarray(ks, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if ks.ndim != 1 or ks.shape != values.shape or len(ks) < 2:
        raise ValidationError("area needs at least 2 curve points")
    if np.any(np.diff(ks) <= 0):
        raise ValidationError("curve k values must be strictly increasing")
    return float(np.trapezoid(values, ks) / (ks[-1] - ks[0]))


def default_grid(n, k_min=1, k_max=None, policy="auto") -> np.ndarray:
    """Cluster-count grid between ``k_min`` and ``k_max`` (default n).

    ``full`` evaluates every k. ``auto`` does the same for ranges up to
    2000 values, otherwise keeps every k up to 100 and continues with ~300
    geometrically spaced values, endpoints always included.
    """
    if k_max is None:
        k_max = n
    if not 1 <= k_min < k_max <= n:
        raise ValidationError(
            f"need 1 <= k_min < k_max <= n, got k_min={k_min}, k_max={k_max}, n={n}"
        )
    span = k_max - k_min + 1
    if policy == "full" or (policy == "auto" and span <= FULL_GRID_LIMIT):
        return np.arange(k_min, k_max + 1, dtype=np.int64)
    if policy != "auto":
        raise ValidationError(f"grid policy must be 'full' or 'auto', got {policy!r}")
    head_end = min(_DENSE_HEAD, k_max)
    head = np.arange(k_min, head_end + 1, dtype=np.int64)
    tail = np.unique(
        np.rint(
            np.geomspace(max(head_end, 1), k_max, _GEOMETRIC_POINTS)
        ).astype(np.int64)
    )
    grid = np.unique(np.concatenate([head, tail, [k_min, k_max]]))
    return grid[(grid >= k_min) & (grid <= k_max)]


@dataclass(frozen=True)
class AlignmentCurve:
    """Sampled (k, alignment) pairs plus the aggregate area."""

    ks: np.ndarray
    values: np.ndarray
    mode: str
    target: str | None
    sam: float = field(default=np.nan)

    def __post_init__(self):
        ks = np.asarray(self.ks, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if np.any(np.diff(ks) <= 0):
            raise ValidationError("curve k values must be strictly increasing")
        if np.any((values < 0) | (values > 1)):
            raise ValidationError("alignment values must lie in [0, 1]")
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "values", values)
        area = curve_area(ks, values)
        if np.isnan(self.sam):
            object.__setattr__(self, "sam", area)
        elif abs(self.sam - area) > 1e-9:
            raise ValidationError(
                f"stored sam {self.sam} does not match curve area {area}"
            )

    @property
    def k_min(self) -> int:
        return int(self.ks[0])

    @property
    def k_max(self) -> int:
        return int(self.ks[-1])

    def to_csv(self, path) -> None:
        lines = ["k,a"]
        lines.extend(
            f"{int(k)},{repr(float(v))}" for k, v in zip(self.ks, self.values)
        )
        atomic_write_text(path, "\n".join(lines) + "\n")

    def summary(self, n=None, seed=None, dataset=None, representation=None) -> dict:
        return {
            "kind": "sam",
            "mode": self.mode,
            "target": self.target,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "sam": self.sam,
            "n": n,
            "seed": seed,
            "dataset": dataset,
            "representation": representation,
        }


def _validate_grid(grid, n) -> np.ndarray:
    grid = np.unique(np.asarray(list(grid), dtype=np.int64))
    if len(grid) < 2:
        raise ValidationError("grid needs at least 2 distinct k values")
    if grid[0] < 1 or grid[-1] > n:
        raise ValidationError(f"grid values must lie in [1, {n}], got {grid[0]}..{grid[-1]}")
    return grid


def alignment_curve(
    dendrogram: Dendrogram,
    y,
    grid=None,
    mode="balanced",
    target=None,
    k_min=1,
    k_max=None,
) -> AlignmentCurve:
    """Alignment score at every grid k, swept incrementally over the tree.

    Rather than re-cutting per k, merges are replayed bottom-up while
    per-cluster label histograms are folded together (smaller member list
    into larger), so the whole curve costs one O(n log n) sweep plus the
    per-grid-point scoring work.
    """
    n = dendrogram.n_leaves
    y = np.asarray(y)
    if y.shape != (n,):
        raise ValidationError(f"labels shape {y.shape} does not match n={n}")
    if grid is None:
        grid = default_grid(n, k_min=k_min, k_max=k_max)
    grid = _validate_grid(grid, n)
    classes = np.unique(y)
    _check_mode(mode, target, classes)
    y_idx = np.searchsorted(classes, y)
    if mode == "target":
        wanted = [int(np.searchsorted(classes, target))]
        gold = [y == target]
    else:
        wanted = list(range(len(classes)))
        gold = [y == cls for cls in classes]

    grid_set = set(int(k) for k in grid)
    slot_of = np.arange(n)
    counts = np.zeros((n, len(classes)), dtype=np.float64)
    counts[np.arange(n), y_idx] = 1.0
    sizes = np.ones(n, dtype=np.float64)
    members: list[list[int]] = [[i] for i in range(n)]
    slot_for_cluster = {i: i for i in range(n)}

    results: dict[int, float] = {}

    def record(k: int):
        cluster_sizes = sizes[slot_of]
        per_class = [
            average_precision(counts[slot_of, col] / cluster_sizes, gold_col)
            for col, gold_col in zip(wanted, gold)
        ]
        results[k] = float(np.mean(per_class))

    if n in grid_set:
        record(n)
    for i in range(n - 1):
        left = int(dendrogram.merges[i, 0])
        right = int(dendrogram.merges[i, 1])
        a = slot_for_cluster.pop(left)
        b = slot_for_cluster.pop(right)
        if len(members[a]) < len(members[b]):
            a, b = b, a
        for m in members[b]:
            slot_of[m] = a
        members[a].extend(members[b])
        members[b] = []
        counts[a] += counts[b]
        sizes[a] += sizes[b]
        slot_for_cluster[n + i] = a
        k = n - i - 1
        if k in grid_set:
            record(k)

    ks = np.asarray(sorted(results), dtype=np.int64)
    values = np.asarray([results[int(k)] for k in ks], dtype=np.float64)
    return AlignmentCurve(ks=ks, values=values, mode=mode, target=target)


class StructuralAlignment(BaseEstimator):
    """Estimator facade: fit(X, y) measures how well X's latent cluster
    structure matches the labels.

    Parameters
    ----------
    mode : {'balanced', 'target'}
        Per-class mean of average precisions, or the target class alone.
    target : str, optional
        Positive class for target mode.
    k_min, k_max : int, optional
        Integration bounds over cluster counts; defaults 1 and n.
    grid : {'auto', 'full'} or sequence of int
        Which cluster counts to evaluate.

    Attributes
    ----------
    dendrogram_ : Dendrogram
    curve_ : AlignmentCurve
    sam_ : float
        Normalized area under the alignment curve, in [0, 1].
    """

    def __init__(self, mode="balanced", target=None, k_min=1, k_max=None, grid="auto"):
        self.mode = mode
        self.target = target
        self.k_min = k_min
        self.k_max = k_max
        self.grid = grid

    def fit(self, X, y):
        X = np.asarray(X)
        y = np.asarray(y)
        self.dendrogram_ = ward_linkage(X)
        n = self.dendrogram_.n_leaves
        if isinstance(self.grid, str):
            grid = default_grid(
                n, k_min=self.k_min, k_max=self.k_max, policy=self.grid
            )
        else:
            grid = self.grid
        self.classes_ = np.unique(y)
        self.curve_ = alignment_curve(
            self.dendrogram_, y, grid=grid, mode=self.mode, target=self.target
        )
        self.sam_ = self.curve_.sam
        self.n_features_in_ = X.shape[1]
        return self
