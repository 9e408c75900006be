"""Annotation-budget learning curves: budgets, cross-validated l2 choice,
seed averaging, and the aggregate area (ALC).

For each (seed, budget) cell: draw the budget uniformly from the training
pool (resampling when a class is missing entirely), pick the l2 strength
by 5-fold cross validation on the drawn sample, refit on the whole sample,
and score on the fixed held-out test set. Cells are independent jobs over
immutable arrays; ALC is the unweighted mean of the per-budget means.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, asdict

import numpy as np
from joblib import Parallel, delayed

from .alignment import average_precision
from .errors import NumericError, ValidationError
from .manifest import atomic_write_text
from .maxent import MaxEntClassifier

__all__ = [
    "ExperimentConfig",
    "LearningCurve",
    "evaluate",
    "learning_curve",
    "pearson",
]

logger = logging.getLogger(__name__)

METRICS = ("accuracy", "f1", "aprc")

DEFAULT_L2_GRID = (1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0)


@dataclass(frozen=True)
class ExperimentConfig:
    """Learning-curve protocol parameters."""

    budgets: tuple[int, ...] = tuple(range(100, 1001, 100))
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    folds: int = 5
    l2_grid: tuple[float, ...] = DEFAULT_L2_GRID
    metric: str = "accuracy"
    target: str | None = None
    representation: str = ""
    dataset: str = ""
    max_resample: int = 20

    def __post_init__(self):
        if not self.budgets:
            raise ValidationError("budgets must be non-empty")
        if any(b2 <= b1 for b1, b2 in zip(self.budgets, self.budgets[1:])):
            raise ValidationError("budgets must be strictly increasing")
        if self.budgets[0] < 1:
            raise ValidationError("budgets must be positive")
        if self.folds < 2:
            raise ValidationError(f"folds must be >= 2, got {self.folds}")
        if not self.l2_grid:
            raise ValidationError("l2 grid must be non-empty")
        if any(l2 <= 0 for l2 in self.l2_grid):
            raise ValidationError("l2 values must be positive")
        if not self.seeds:
            raise ValidationError("seed list must be non-empty")
        if self.metric not in METRICS:
            raise ValidationError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.metric in ("f1", "aprc") and self.target is None:
            raise ValidationError(f"metric {self.metric!r} requires a target label")

    def validate_pool(self, pool_size: int) -> None:
        for budget in self.budgets:
            if budget > pool_size:
                raise ValidationError(
                    f"budget {budget} exceeds the training pool size {pool_size}"
                )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        kwargs = {}
        for key, value in raw.items():
            if key not in known:
                continue
            if isinstance(value, list):
                value = tuple(value)
            kwargs[key] = value
        return cls(**kwargs)


@dataclass(frozen=True)
class LearningCurve:
    """Per-budget score means/stds over seeds and the aggregate ALC."""

    budgets: tuple[int, ...]
    means: np.ndarray
    stds: np.ndarray
    metric: str
    cells: tuple[dict, ...] = ()
    alc: float = field(default=np.nan)

    def __post_init__(self):
        means = np.asarray(self.means, dtype=np.float64)
        stds = np.asarray(self.stds, dtype=np.float64)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stds", stds)
        if np.isnan(self.alc):
            object.__setattr__(self, "alc", float(means.mean()))

    def to_csv(self, path) -> None:
        lines = ["N,mean,std"]
        lines.extend(
            f"{n},{repr(float(m))},{repr(float(s))}"
            for n, m, s in zip(self.budgets, self.means, self.stds)
        )
        atomic_write_text(path, "\n".join(lines) + "\n")

    def summary(self, dataset=None, representation=None) -> dict:
        return {
            "kind": "lc",
            "alc": self.alc,
            "metric": self.metric,
            "dataset": dataset,
            "representation": representation,
            "budgets": list(self.budgets),
        }


def _accuracy(y_true, y_pred) -> float:
    return float(np.mean(y_true == y_pred))


def _f1_target(y_true, y_pred, target) -> float:
    predicted = y_pred == target
    actual = y_true == target
    tp = float(np.sum(predicted & actual))
    fp = float(np.sum(predicted & ~actual))
    fn = float(np.sum(~predicted & actual))
    if tp == 0.0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2.0 * precision * recall / (precision + recall)


def evaluate(model: MaxEntClassifier, X, y, metric: str, target=None) -> float:
    """Score a fitted model: accuracy, target-class F1, or target APRC."""
    y = np.asarray(y)
    if metric not in METRICS:
        raise ValidationError(f"metric must be one of {METRICS}, got {metric!r}")
    unseen = np.setdiff1d(np.unique(y), model.classes_)
    if unseen.size:
        raise ValidationError(f"labels {list(unseen)} were not seen during training")
    if metric == "accuracy":
        return _accuracy(y, model.predict(X))
    if target is None:
        raise ValidationError(f"metric {metric!r} requires a target label")
    if target not in model.classes_:
        raise ValidationError(f"target {target!r} not among model classes")
    if metric == "f1":
        return _f1_target(y, model.predict(X), target)
    col = int(np.searchsorted(model.classes_, target))
    return average_precision(model.predict_proba(X)[:, col], y == target)


def _cv_choose_l2(X, y, config: ExperimentConfig, rng) -> tuple[float, float]:
    """Pick the l2 with best mean validation score over unstratified folds."""
    n = len(y)
    perm = rng.permutation(n)
    folds = np.array_split(perm, config.folds)
    grid_scores = []
    for l2 in config.l2_grid:
        fold_scores = []
        for f, val_idx in enumerate(folds):
            train_idx = np.concatenate([folds[g] for g in range(config.folds) if g != f])
            if len(np.unique(y[train_idx])) < 2:
                logger.warning("skipping fold %d: single-class training split", f)
                continue
            model = MaxEntClassifier(l2=l2).fit(X[train_idx], y[train_idx])
            try:
                fold_scores.append(
                    evaluate(model, X[val_idx], y[val_idx], config.metric, config.target)
                )
            except ValidationError:
                logger.warning("skipping fold %d: metric undefined on validation split", f)
        grid_scores.append(np.mean(fold_scores) if fold_scores else -np.inf)
    if not np.isfinite(np.max(grid_scores)):
        raise ValidationError("cross validation failed on every fold")
    best = int(np.argmax(grid_scores))
    return float(config.l2_grid[best]), float(grid_scores[best])


def _run_cell(X_pool, y_pool, X_test, y_test, config: ExperimentConfig, seed, budget):
    rng = np.random.default_rng([seed, budget])
    pool_classes = np.unique(y_pool)
    sample_idx = None
    for _ in range(config.max_resample):
        candidate = rng.choice(len(y_pool), size=budget, replace=False)
        if len(np.unique(y_pool[candidate])) == len(pool_classes):
            sample_idx = candidate
            break
        logger.warning(
            "seed %d budget %d: draw missed a class entirely, resampling", seed, budget
        )
    if sample_idx is None:
        raise ValidationError(
            f"budget {budget} draw missed a class in {config.max_resample} attempts"
        )
    X_budget, y_budget = X_pool[sample_idx], y_pool[sample_idx]
    chosen_l2, cv_score = _cv_choose_l2(X_budget, y_budget, config, rng)
    model = MaxEntClassifier(l2=chosen_l2).fit(X_budget, y_budget)
    test_score = evaluate(model, X_test, y_test, config.metric, config.target)
    return {
        "seed": int(seed),
        "N": int(budget),
        "chosen_l2": chosen_l2,
        "cv_score": cv_score,
        "test_score": test_score,
    }


def learning_curve(
    config: ExperimentConfig, X_pool, y_pool, X_test, y_test, n_jobs=1
) -> LearningCurve:
    """Run the full protocol and aggregate scores over seeds.

    Deterministic for a fixed config: every cell derives its generator
    from (seed, budget), so results do not depend on execution order or
    the number of workers.
    """
    X_pool = np.asarray(X_pool, dtype=np.float64)
    y_pool = np.asarray(y_pool)
    X_test = np.asarray(X_test, dtype=np.float64)
    y_test = np.asarray(y_test)
    if len(y_pool) != X_pool.shape[0] or len(y_test) != X_test.shape[0]:
        raise ValidationError("label lengths do not match matrix rows")
    config.validate_pool(X_pool.shape[0])
    jobs = [(seed, budget) for seed in config.seeds for budget in config.budgets]
    cells = Parallel(n_jobs=n_jobs)(
        delayed(_run_cell)(X_pool, y_pool, X_test, y_test, config, seed, budget)
        for seed, budget in jobs
    )
    means, stds = [], []
    for budget in config.budgets:
        scores = np.asarray(
            [c["test_score"] for c in cells if c["N"] == budget], dtype=np.float64
        )
        means.append(scores.mean())
        stds.append(scores.std())
    return LearningCurve(
        budgets=tuple(config.budgets),
        means=np.asarray(means),
        stds=np.asarray(stds),
        metric=config.metric,
        cells=tuple(cells),
    )


def pearson(xs, ys) -> float:
    """Sample Pearson correlation coefficient."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise ValidationError(f"shape mismatch: {xs.shape} vs {ys.shape}")
    if len(xs) < 3:
        raise ValidationError(f"correlation needs at least 3 points, got {len(xs)}")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sx = float(np.sum(dx * dx))
    sy = float(np.sum(dy * dy))
    if sx == 0.0 or sy == 0.0:
        raise NumericError("correlation undefined: zero variance input")
    return float(np.sum(dx * dy) / np.sqrt(sx * sy))
