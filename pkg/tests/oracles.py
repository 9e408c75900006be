"""Independent reference implementations used to verify the package.

Each oracle deliberately avoids the algorithmic shortcuts of the code it
checks: clustering recomputes centroids from member rows at every step
(no Lance-Williams), average precision enumerates every threshold, the
Davies-Bouldin formula runs as plain loops, and gradients come from
central finite differences.
"""

import numpy as np


def naive_ward(X):
    """O(n^3) agglomerative Ward clustering, recomputed from scratch.

    At each step all pairwise merge costs 2*na*nb/(na+nb)*||ca - cb||^2
    are evaluated from freshly computed centroids; the minimum-cost pair
    wins, ties resolved to the lexicographically smallest (min id, max id).
    Returns an (n-1, 4) array of (left, right, height, size) with leaves
    0..n-1 and merge i creating id n+i.
    """
    X = np.asarray(X, dtype=np.float64)
    n = len(X)
    members = {i: [i] for i in range(n)}
    next_id = n
    merges = []
    while len(members) > 1:
        ids = sorted(members)
        centroids = np.stack([X[members[i]].mean(axis=0) for i in ids])
        sizes = np.array([len(members[i]) for i in ids], dtype=np.float64)
        diff = centroids[:, None, :] - centroids[None, :, :]
        sq = np.einsum("ijk,ijk->ij", diff, diff)
        weight = 2.0 * sizes[:, None] * sizes[None, :] / (sizes[:, None] + sizes[None, :])
        cost = weight * sq
        cost[np.tril_indices(len(ids))] = np.inf
        # row-major argmin = first minimum = lexicographically smallest pair
        flat = int(np.argmin(cost))
        a_pos, b_pos = divmod(flat, len(ids))
        a, b = ids[a_pos], ids[b_pos]
        merged = members.pop(a) + members.pop(b)
        merges.append((a, b, np.sqrt(cost[a_pos, b_pos]), len(merged)))
        members[next_id] = merged
        next_id += 1
    return np.asarray(merges, dtype=np.float64)


def naive_ward_labels(X, k):
    """Cluster labels at k clusters from the naive merge list, numbered by
    each cluster's smallest member row."""
    X = np.asarray(X, dtype=np.float64)
    n = len(X)
    merges = naive_ward(X)
    groups = {i: [i] for i in range(n)}
    for step in range(n - k):
        left, right = int(merges[step, 0]), int(merges[step, 1])
        groups[n + step] = groups.pop(left) + groups.pop(right)
    labels = np.empty(n, dtype=np.int64)
    for members in groups.values():
        labels[members] = min(members)
    # order by smallest member row == first occurrence scanning rows
    order = []
    for v in labels:
        if v not in order:
            order.append(v)
    remap = {old: new for new, old in enumerate(order)}
    return np.asarray([remap[v] for v in labels], dtype=np.int64)


def brute_force_average_precision(scores, gold):
    """All-thresholds enumeration of tie-grouped average precision."""
    scores = np.asarray(scores, dtype=np.float64)
    gold = np.asarray(gold, dtype=bool)
    total = int(gold.sum())
    ap = 0.0
    prev_recall = 0.0
    for threshold in sorted(set(scores.tolist()), reverse=True):
        predicted = scores >= threshold
        tp = int((predicted & gold).sum())
        precision = tp / int(predicted.sum())
        recall = tp / total
        ap += (recall - prev_recall) * precision
        prev_recall = recall
    return ap


def naive_davies_bouldin(X, labels):
    """Direct Davies-Bouldin formula with plain Python loops."""
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels)
    k = int(labels.max()) + 1
    centroids = []
    dispersions = []
    for c in range(k):
        rows = X[labels == c]
        centroid = rows.mean(axis=0)
        centroids.append(centroid)
        dispersions.append(float(np.mean(np.sqrt(((rows - centroid) ** 2).sum(axis=1)))))
    total = 0.0
    for i in range(k):
        worst = -np.inf
        for j in range(k):
            if i == j:
                continue
            gap = float(np.sqrt(((centroids[i] - centroids[j]) ** 2).sum()))
            worst = max(worst, (dispersions[i] + dispersions[j]) / gap)
        total += worst
    return total / k


def finite_difference_gradient(fun, x, step=1e-6):
    """Central finite differences of a scalar function."""
    x = np.asarray(x, dtype=np.float64)
    grad = np.empty_like(x)
    for i in range(len(x)):
        forward = x.copy()
        backward = x.copy()
        forward[i] += step
        backward[i] -= step
        grad[i] = (fun(forward) - fun(backward)) / (2.0 * step)
    return grad
