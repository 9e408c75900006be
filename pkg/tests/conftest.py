import json

import numpy as np
import pytest


@pytest.fixture
def two_blobs():
    """Two tight, well-separated 2-D blobs of 20 points each with pure labels."""
    rng = np.random.default_rng(7)
    X = np.vstack([
        rng.normal(0.0, 0.15, size=(20, 2)),
        rng.normal(6.0, 0.15, size=(20, 2)),
    ])
    y = np.asarray(["a"] * 20 + ["b"] * 20)
    return X, y


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")
    return path
