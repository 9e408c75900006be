import numpy as np
import pytest

from structalign import Dendrogram, NumericError, ValidationError, WardClustering, cut, ward_linkage
from structalign.cluster import load_dendrogram_csv
from oracles import naive_ward, naive_ward_labels


def test_two_points_merge_at_distance():
    d = ward_linkage(np.array([[0.0], [3.0]]))
    assert d.merges.shape == (1, 4)
    left, right, height, size = d.merges[0]
    assert (left, right, size) == (0, 1, 2)
    assert height == pytest.approx(3.0, abs=1e-12)


def test_three_points_hand_heights():
    d = ward_linkage(np.array([[0.0], [1.0], [10.0]]))
    assert list(d.merges[0, :2]) == [0, 1]
    assert d.merges[0, 2] == pytest.approx(1.0, abs=1e-12)
    assert list(d.merges[1, :2]) == [2, 3]
    # sqrt(2*2*1/3 * 9.5^2), centroid of {0,1} at 0.5 against the point at 10
    assert d.merges[1, 2] == pytest.approx(10.969655114602888, abs=1e-9)


def test_two_blobs_merge_structure():
    rng = np.random.default_rng(41)
    X = np.vstack([
        rng.normal(0.0, 0.05, size=(5, 2)),
        rng.normal(9.0, 0.05, size=(5, 2)),
    ])
    d = ward_linkage(X)
    oracle = naive_ward(X)
    assert np.array_equal(d.merges[:, :2], oracle[:, :2])
    np.testing.assert_allclose(d.merges[:, 2], oracle[:, 2], atol=1e-9)
    # first 8 merges stay inside blobs: both children descend from one blob
    blob = lambda leaf: 0 if leaf < 5 else 1

    side = {}
    for i in range(9):
        left, right = int(d.merges[i, 0]), int(d.merges[i, 1])
        sides = {side.get(c, blob(c)) if c < 10 else side[c] for c in (left, right)}
        if i < 8:
            assert len(sides) == 1, f"merge {i} crossed blobs"
        else:
            assert len(sides) == 2
        side[10 + i] = sides.pop() if len(sides) == 1 else -1
    # cut at k=2 recovers blob membership
    labels = d.cut(2)
    assert np.array_equal(labels, np.array([0] * 5 + [1] * 5))


def test_matches_naive_oracle_on_random_data():
    rng = np.random.default_rng(13)
    for _ in range(25):
        n = int(rng.integers(2, 32))
        dim = int(rng.integers(1, 6))
        X = rng.standard_normal((n, dim))
        d = ward_linkage(X)
        oracle = naive_ward(X)
        assert np.array_equal(d.merges[:, :2], oracle[:, :2])
        np.testing.assert_allclose(d.merges[:, 2], oracle[:, 2], atol=1e-9)
        assert np.array_equal(d.merges[:, 3], oracle[:, 3])


def test_height_monotonicity_random():
    rng = np.random.default_rng(19)
    for _ in range(50):
        n = int(rng.integers(2, 40))
        X = rng.standard_normal((n, 3))
        d = ward_linkage(X)
        assert np.all(np.diff(d.merges[:, 2]) >= 0)


def test_cut_endpoints(two_blobs):
    X, _ = two_blobs
    d = ward_linkage(X)
    n = len(X)
    assert np.array_equal(d.cut(n), np.arange(n))
    assert np.array_equal(d.cut(1), np.zeros(n, dtype=np.int64))


def test_cut_matches_oracle_labels():
    rng = np.random.default_rng(43)
    X = rng.standard_normal((18, 2))
    d = ward_linkage(X)
    for k in (2, 3, 5, 9):
        assert np.array_equal(d.cut(k), naive_ward_labels(X, k))


def test_cuts_are_nested():
    rng = np.random.default_rng(23)
    X = rng.standard_normal((30, 4))
    d = ward_linkage(X)
    for k in range(1, 30):
        coarse = d.cut(k)
        fine = d.cut(k + 1)
        # the k-partition merges exactly two clusters of the (k+1)-partition
        pairs = {(c, f) for c, f in zip(coarse, fine)}
        fine_to_coarse = {}
        for c, f in pairs:
            fine_to_coarse.setdefault(f, set()).add(c)
        assert all(len(v) == 1 for v in fine_to_coarse.values())
        merged = [c for c in set(coarse) if sum(1 for f, cs in fine_to_coarse.items() if c in cs) == 2]
        assert len(merged) == 1


def test_permutation_invariance_up_to_relabeling():
    rng = np.random.default_rng(31)
    X = rng.standard_normal((24, 3))
    perm = rng.permutation(24)
    d = ward_linkage(X)
    d_perm = ward_linkage(X[perm])
    for k in (2, 4, 7):
        base = d.cut(k)
        permuted = d_perm.cut(k)
        # same grouping after mapping rows through the permutation
        regrouped = np.empty(24, dtype=np.int64)
        regrouped[perm] = permuted
        pairing = {}
        for a, b in zip(base, regrouped):
            assert pairing.setdefault(a, b) == b
        assert len(set(pairing.values())) == k


def test_input_validation():
    with pytest.raises(ValidationError):
        ward_linkage(np.ones((1, 2)))
    with pytest.raises(NumericError):
        ward_linkage(np.array([[0.0], [np.nan]]))
    d = ward_linkage(np.array([[0.0], [1.0]]))
    with pytest.raises(ValidationError):
        d.cut(0)
    with pytest.raises(ValidationError):
        d.cut(3)


def test_dendrogram_construction_invariants():
    with pytest.raises(ValidationError, match="merges"):
        Dendrogram(merges=np.zeros((2, 4)), n_leaves=2)
    good = np.array([[0.0, 1.0, 1.0, 2.0], [2.0, 3.0, 0.5, 3.0]])
    with pytest.raises(ValidationError, match="nondecreasing"):
        Dendrogram(merges=good, n_leaves=3)


def test_csv_round_trip(tmp_path, two_blobs):
    X, _ = two_blobs
    d = ward_linkage(X)
    path = tmp_path / "dendro.csv"
    d.to_csv(path)
    assert path.read_text().splitlines()[0] == "left,right,height,size"
    back = load_dendrogram_csv(path, n_leaves=d.n_leaves)
    assert np.array_equal(back.merges, d.merges)


def test_module_level_cut_alias(two_blobs):
    X, _ = two_blobs
    d = ward_linkage(X)
    assert np.array_equal(cut(d, 2), d.cut(2))


def test_ward_estimator(two_blobs):
    X, _ = two_blobs
    est = WardClustering(n_clusters=2).fit(X)
    assert sorted(set(est.labels_)) == [0, 1]
    assert est.get_params() == {"n_clusters": 2}
    assert np.array_equal(est.cut(4), est.dendrogram_.cut(4))
