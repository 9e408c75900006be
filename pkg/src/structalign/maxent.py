"""L2-regularized multinomial max-entropy classifier.

Training minimizes mean negative log-likelihood plus l2/2 * ||W||^2 (bias
unregularized) with a deterministic full-batch limited-memory quasi-Newton
loop and Armijo backtracking, so identical inputs always reproduce
identical parameters. Convergence: gradient infinity-norm <= tol.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .errors import NumericError, ValidationError
from .vectors import check_matrix

__all__ = ["MaxEntClassifier", "loss_and_gradient"]


def _log_softmax(Z: np.ndarray) -> np.ndarray:
    shifted = Z - Z.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def loss_and_gradient(weights, bias, X, y_idx, l2):
    """Objective and analytic gradients of the regularized mean NLL.

    Parameters
    ----------
    weights : (n_classes, d) array
    bias : (n_classes,) array
    X : (n, d) array
    y_idx : (n,) int array of class indices
    l2 : float
        Regularization strength applied to weights only.

    Returns
    -------
    loss : float
    grad_weights : (n_classes, d) array
    grad_bias : (n_classes,) array
    """
    n = X.shape[0]
    logits = X @ weights.T + bias
    log_prob = _log_softmax(logits)
    nll = -float(log_prob[np.arange(n), y_idx].mean())
    loss = nll + 0.5 * l2 * float(np.sum(weights * weights))
    residual = np.exp(log_prob)
    residual[np.arange(n), y_idx] -= 1.0
    residual /= n
    grad_weights = residual.T @ X + l2 * weights
    grad_bias = residual.sum(axis=0)
    return loss, grad_weights, grad_bias


def _lbfgs_direction(grad, s_list, y_list, rho_list):
    q = grad.copy()
    alphas = []
    for s, y_vec, rho in zip(reversed(s_list), reversed(y_list), reversed(rho_list)):
        alpha = rho * float(s @ q)
        q -= alpha * y_vec
        alphas.append(alpha)
    if s_list:
        s, y_vec = s_list[-1], y_list[-1]
        q *= float(s @ y_vec) / float(y_vec @ y_vec)
    for (s, y_vec, rho), alpha in zip(
        zip(s_list, y_list, rho_list), reversed(alphas)
    ):
        beta = rho * float(y_vec @ q)
        q += (alpha - beta) * s
    return -q


def _minimize(fun, x0, tol=1e-6, max_iter=500, memory=10):
    """Limited-memory quasi-Newton descent with Armijo backtracking.

    ``fun(x) -> (loss, grad)``. Accepted steps never increase the loss.
    Returns (x, loss, grad, n_iter, converged).
    """
    x = x0.copy()
    loss, grad = fun(x)
    if not np.isfinite(loss):
        raise NumericError("non-finite loss at the starting point")
    s_list: list[np.ndarray] = []
    y_list: list[np.ndarray] = []
    rho_list: list[float] = []
    iteration = 0
    while iteration < max_iter:
        grad_norm = float(np.abs(grad).max())
        if grad_norm <= tol:
            return x, loss, grad, iteration, True
        direction = _lbfgs_direction(grad, s_list, y_list, rho_list)
        slope = float(grad @ direction)
        if slope >= 0.0:  # fall back when curvature info is unusable
            direction = -grad
            slope = -float(grad @ grad)
        step = 1.0
        accepted = False
        for _ in range(40):
            candidate = x + step * direction
            cand_loss, cand_grad = fun(candidate)
            if np.isfinite(cand_loss) and cand_loss <= loss + 1e-4 * step * slope:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            return x, loss, grad, iteration, False
        s = candidate - x
        y_vec = cand_grad - grad
        sy = float(s @ y_vec)
        if sy > 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y_vec)):
            s_list.append(s)
            y_list.append(y_vec)
            rho_list.append(1.0 / sy)
            if len(s_list) > memory:
                s_list.pop(0)
                y_list.pop(0)
                rho_list.pop(0)
        x, loss, grad = candidate, cand_loss, cand_grad
        iteration += 1
    return x, loss, grad, iteration, float(np.abs(grad).max()) <= tol


class MaxEntClassifier(ClassifierMixin, BaseEstimator):
    """Multinomial logistic regression with L2-regularized weights.

    Parameters
    ----------
    l2 : float, default=1e-3
        Strength of the quadratic penalty on the weight matrix.
    tol : float, default=1e-6
        Convergence threshold on the gradient infinity-norm.
    max_iter : int, default=500

    Attributes
    ----------
    classes_ : sorted class labels seen in fit
    coef_ : (n_classes, d) weight matrix
    intercept_ : (n_classes,) unregularized bias
    loss_ : objective value at the solution
    n_iter_ : accepted optimizer steps
    converged_ : whether the gradient tolerance was reached
    """

    def __init__(self, l2=1e-3, tol=1e-6, max_iter=500):
        self.l2 = l2
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y):
        X = check_matrix(X, dtype=np.float64)
        y = np.asarray(y)
        if y.shape != (X.shape[0],):
            raise ValidationError(f"y shape {y.shape} does not match X rows {X.shape[0]}")
        if self.l2 <= 0:
            raise ValidationError(f"l2 must be positive, got {self.l2}")
        classes = np.unique(y)
        if len(classes) < 2:
            raise ValidationError("training labels must contain at least 2 classes")
        y_idx = np.searchsorted(classes, y)
        n_classes, d = len(classes), X.shape[1]

        def fun(flat):
            weights = flat[: n_classes * d].reshape(n_classes, d)
            bias = flat[n_classes * d :]
            loss, grad_w, grad_b = loss_and_gradient(weights, bias, X, y_idx, self.l2)
            return loss, np.concatenate([grad_w.ravel(), grad_b])

        x0 = np.zeros(n_classes * d + n_classes)
        solution, loss, _, n_iter, converged = _minimize(
            fun, x0, tol=self.tol, max_iter=self.max_iter
        )
        if not np.isfinite(loss):
            raise NumericError("non-finite training loss")
        self.classes_ = classes
        self.coef_ = solution[: n_classes * d].reshape(n_classes, d)
        self.intercept_ = solution[n_classes * d :]
        self.loss_ = loss
        self.n_iter_ = n_iter
        self.converged_ = converged
        self.n_features_in_ = d
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "coef_")
        X = check_matrix(X, dtype=np.float64)
        return X @ self.coef_.T + self.intercept_

    def predict_proba(self, X) -> np.ndarray:
        return np.exp(_log_softmax(self.decision_function(X)))

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]
