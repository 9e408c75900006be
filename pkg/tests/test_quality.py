import logging

import numpy as np
import pytest

from structalign import NumericError, ValidationError, davies_bouldin, dbi_curve, ward_linkage
from oracles import naive_davies_bouldin


def test_hand_computed_two_cluster_case():
    X = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
    labels = np.array([0, 0, 1, 1])
    # S = 0.5 for both clusters, centroid gap 10 -> (0.5+0.5)/10 = 0.1
    assert davies_bouldin(X, labels) == pytest.approx(0.1, abs=1e-12)


def test_singleton_clusters_zero_dispersion():
    X = np.array([[0.0, 0.0], [5.0, 0.0]])
    assert davies_bouldin(X, np.array([0, 1])) == 0.0


def test_matches_naive_oracle():
    rng = np.random.default_rng(3)
    for _ in range(20):
        X = rng.standard_normal((50, 4))
        labels = rng.integers(0, 5, size=50)
        labels[:5] = np.arange(5)
        got = davies_bouldin(X, labels)
        assert got == pytest.approx(naive_davies_bouldin(X, labels), abs=1e-9)


def test_matches_sklearn():
    from sklearn.metrics import davies_bouldin_score

    rng = np.random.default_rng(5)
    X = rng.standard_normal((80, 3))
    labels = rng.integers(0, 4, size=80)
    labels[:4] = np.arange(4)
    assert davies_bouldin(X, labels) == pytest.approx(
        float(davies_bouldin_score(X, labels)), abs=1e-9
    )


def test_scale_invariance():
    rng = np.random.default_rng(7)
    X = rng.standard_normal((40, 3))
    labels = rng.integers(0, 3, size=40)
    labels[:3] = np.arange(3)
    base = davies_bouldin(X, labels)
    for c in (0.1, 3.0, 1e4):
        assert davies_bouldin(c * X, labels) == pytest.approx(base, rel=1e-9)


def test_shrinking_clusters_improves_index():
    rng = np.random.default_rng(9)
    centers = np.array([[0.0, 0.0], [4.0, 0.0], [0.0, 4.0]])
    labels = np.repeat(np.arange(3), 30)
    noise = rng.standard_normal((90, 2))
    loose = centers[labels] + 0.8 * noise
    tight = centers[labels] + 0.2 * noise
    assert davies_bouldin(tight, labels) < davies_bouldin(loose, labels)


def test_validation_errors():
    X = np.ones((4, 2))
    with pytest.raises(ValidationError, match="k >= 2"):
        davies_bouldin(X, np.zeros(4, dtype=int))
    with pytest.raises(ValidationError):
        davies_bouldin(X, np.array([0, 1, 1]))


def test_coincident_centroids_degenerate():
    X = np.array([[0.0, 1.0], [0.0, -1.0], [0.0, 2.0], [0.0, -2.0]])
    labels = np.array([0, 0, 1, 1])  # both centroids at the origin
    with pytest.raises(NumericError, match="degenerate"):
        davies_bouldin(X, labels)


def test_curve_minimum_at_true_blob_count():
    rng = np.random.default_rng(11)
    centers = np.array([[0, 0], [8, 0], [0, 8], [8, 8]], dtype=float)
    labels = np.repeat(np.arange(4), 25)
    X = centers[labels] + 0.3 * rng.standard_normal((100, 2))
    curve = dbi_curve(X, ward_linkage(X), grid=range(2, 13))
    assert curve.ks[int(np.argmin(curve.values))] == 4


def test_curve_constant_on_symmetric_lattice():
    # equispaced 1-D lattice: the tree is dyadic, and at every dyadic level
    # the dispersion-to-gap ratio is scale-free, so dbi = 0.5 exactly
    X = np.arange(16, dtype=np.float64).reshape(-1, 1)
    curve = dbi_curve(X, ward_linkage(X), grid=[2, 4, 8])
    assert np.array_equal(curve.values, [0.5, 0.5, 0.5])
    assert curve.area == pytest.approx(0.5, abs=1e-15)


def test_curve_grid_validation(two_blobs):
    X, _ = two_blobs
    d = ward_linkage(X)
    with pytest.raises(ValidationError):
        dbi_curve(X, d, grid=[1, 2, 3])
    with pytest.raises(ValidationError, match="2 valid"):
        dbi_curve(X, d, grid=[2])


def test_curve_skips_degenerate_k(caplog):
    # duplicated points: cuts below the duplicate merges produce
    # coincident-centroid twins, which must be skipped with a warning
    X = np.array([[0.0, 0.0], [0.0, 0.0], [5.0, 0.0], [5.0, 0.0], [10.0, 0.0]])
    d = ward_linkage(X)
    with caplog.at_level(logging.WARNING):
        curve = dbi_curve(X, d, grid=[2, 3, 4, 5])
    assert curve.skipped == (4, 5)
    assert list(curve.ks) == [2, 3]
    assert any("degenerate" in r.message for r in caplog.records)
