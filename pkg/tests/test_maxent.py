import numpy as np
import pytest

from structalign import MaxEntClassifier, NumericError, ValidationError
from structalign.maxent import loss_and_gradient
from oracles import finite_difference_gradient


def _random_problem(rng, n=50, d=10, n_classes=3):
    X = rng.standard_normal((n, d))
    y_idx = rng.integers(0, n_classes, size=n)
    y_idx[:n_classes] = np.arange(n_classes)
    return X, y_idx


def test_separable_data_perfect_training_accuracy():
    X = np.array([[-1.0], [-0.8], [-1.2], [1.0], [0.8], [1.2]])
    y = np.array(["neg", "neg", "neg", "pos", "pos", "pos"])
    model = MaxEntClassifier(l2=1e-6).fit(X, y)
    assert np.all(model.predict(X) == y)
    assert model.converged_


def test_huge_l2_collapses_weights_to_priors():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((60, 4))
    y = np.array(["a"] * 45 + ["b"] * 15)
    model = MaxEntClassifier(l2=1e6).fit(X, y)
    assert np.linalg.norm(model.coef_) < 1e-2
    proba = model.predict_proba(X)
    assert np.allclose(proba.mean(axis=0), [0.75, 0.25], atol=1e-3)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(5)
    for _ in range(10):
        n_classes = int(rng.integers(2, 4))
        d = int(rng.integers(2, 8))
        X, y_idx = _random_problem(rng, n=30, d=d, n_classes=n_classes)
        l2 = float(10.0 ** rng.uniform(-4, 0))
        point = rng.standard_normal(n_classes * d + n_classes) * 0.5

        def objective(flat):
            w = flat[: n_classes * d].reshape(n_classes, d)
            b = flat[n_classes * d:]
            return loss_and_gradient(w, b, X, y_idx, l2)[0]

        w = point[: n_classes * d].reshape(n_classes, d)
        b = point[n_classes * d:]
        _, grad_w, grad_b = loss_and_gradient(w, b, X, y_idx, l2)
        analytic = np.concatenate([grad_w.ravel(), grad_b])
        numeric = finite_difference_gradient(objective, point)
        scale = np.maximum(np.abs(numeric), 1e-8)
        assert np.max(np.abs(analytic - numeric) / scale) < 1e-5


def test_loss_not_above_zero_init():
    rng = np.random.default_rng(7)
    for _ in range(10):
        X, y_idx = _random_problem(rng)
        y = np.array([f"c{i}" for i in y_idx])
        model = MaxEntClassifier(l2=1e-2).fit(X, y)
        w0 = np.zeros_like(model.coef_)
        b0 = np.zeros_like(model.intercept_)
        zero_loss = loss_and_gradient(w0, b0, X, y_idx, 1e-2)[0]
        assert model.loss_ <= zero_loss + 1e-12


def test_probabilities_sum_to_one():
    rng = np.random.default_rng(9)
    X, y_idx = _random_problem(rng)
    y = np.array([f"c{i}" for i in y_idx])
    model = MaxEntClassifier().fit(X, y)
    proba = model.predict_proba(rng.standard_normal((25, 10)))
    assert np.max(np.abs(proba.sum(axis=1) - 1.0)) < 1e-9


def test_deterministic_fit():
    rng = np.random.default_rng(11)
    X, y_idx = _random_problem(rng)
    y = np.array([f"c{i}" for i in y_idx])
    a = MaxEntClassifier(l2=0.1).fit(X, y)
    b = MaxEntClassifier(l2=0.1).fit(X, y)
    assert np.array_equal(a.coef_, b.coef_)
    assert np.array_equal(a.intercept_, b.intercept_)


def test_validation_errors():
    X = np.ones((3, 2))
    with pytest.raises(ValidationError, match="2 classes"):
        MaxEntClassifier().fit(X, np.array(["a", "a", "a"]))
    with pytest.raises(ValidationError, match="does not match"):
        MaxEntClassifier().fit(X, np.array(["a", "b"]))
    with pytest.raises(ValidationError):
        MaxEntClassifier(l2=-1.0).fit(X, np.array(["a", "b", "a"]))
    with pytest.raises(NumericError):
        MaxEntClassifier().fit(np.array([[np.inf, 0.0], [0.0, 1.0]]), np.array(["a", "b"]))


def test_sklearn_estimator_conventions():
    model = MaxEntClassifier(l2=0.5, max_iter=100)
    params = model.get_params()
    assert params == {"l2": 0.5, "tol": 1e-6, "max_iter": 100}
    clone = MaxEntClassifier(**params)
    assert clone.get_params() == params
