"""Text featurization: term-frequency bag-of-words and token-vector pooling."""

from __future__ import annotations

import re

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dataset import LabeledDataset
from .errors import ValidationError

__all__ = ["tokenize", "BagOfWordsVectorizer", "build_bow", "average_pool"]

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on runs of non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


class BagOfWordsVectorizer(TransformerMixin, BaseEstimator):
    """Raw term-frequency bag-of-words over the full corpus vocabulary.

    No weighting, no cutoff: entry (i, j) of the transformed matrix is the
    count of vocabulary term j in document i. Vocabulary indices follow
    first occurrence in corpus scan order, so fitted matrices are
    reproducible for a fixed document order.

    Attributes
    ----------
    vocabulary_ : dict[str, int]
        Term to column index.
    terms_ : list[str]
        Terms in column order.
    """

    def fit(self, raw_documents, y=None):
        vocabulary: dict[str, int] = {}
        n_docs = 0
        for doc in raw_documents:
            n_docs += 1
            for token in tokenize(doc):
                if token not in vocabulary:
                    vocabulary[token] = len(vocabulary)
        if n_docs == 0:
            raise ValidationError("cannot fit on an empty document collection")
        if not vocabulary:
            raise ValidationError("corpus is empty after tokenization")
        self.vocabulary_ = vocabulary
        self.terms_ = list(vocabulary)
        return self

    def transform(self, raw_documents) -> np.ndarray:
        check_is_fitted(self, "vocabulary_")
        docs = list(raw_documents)
        X = np.zeros((len(docs), len(self.vocabulary_)), dtype=np.float32)
        for i, doc in enumerate(docs):
            for token in tokenize(doc):
                j = self.vocabulary_.get(token)
                if j is not None:
                    X[i, j] += 1.0
        return X

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        check_is_fitted(self, "vocabulary_")
        return np.asarray(self.terms_, dtype=object)


def build_bow(dataset: LabeledDataset):
    """Fit a bag-of-words matrix over ``dataset.texts``.

    Returns the (n, |vocab|) float32 count matrix and the term list in
    column order.
    """
    if dataset.texts is None:
        raise ValidationError("dataset has no texts; cannot build bag-of-words")
    vectorizer = BagOfWordsVectorizer().fit(dataset.texts)
    return vectorizer.transform(dataset.texts), vectorizer.terms_


def average_pool(token_vectors) -> np.ndarray:
    """Arithmetic mean of each document's token vectors.

    Parameters
    ----------
    token_vectors : sequence of (m_i, d) arrays
        One matrix per document, all with the same width d and m_i >= 1.

    Returns
    -------
    (n, d) float64 array of per-document means.
    """
    matrices = [np.asarray(m, dtype=np.float64) for m in token_vectors]
    if not matrices:
        raise ValidationError("no documents to pool")
    dim = None
    rows = []
    for i, m in enumerate(matrices):
        if m.ndim != 2 or m.shape[0] < 1:
            raise ValidationError(f"document {i}: expected a non-empty (m, d) matrix")
        if dim is None:
            dim = m.shape[1]
        elif m.shape[1] != dim:
            raise ValidationError(
                f"document {i}: dimension {m.shape[1]} does not match {dim}"
            )
        rows.append(m.mean(axis=0))
    return np.vstack(rows)
