"""Scikit-learn compatible front-ends for the clustering and POD machinery.

These estimators operate directly on an (m, n_h) array of snapshots, so the
pipeline composes with the wider sklearn ecosystem (clone, grid search,
pipelines). The functional modules remain the source of truth; the classes
here only adapt calling conventions.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .clustering import kmeans_baseline, pam
from .dictionary import build_dictionary, evaluate
from .dissimilarity import DissimilarityMatrix, dissim_matrix
from .pod import snapshot_pod
from .snapshots import InnerProduct, SnapshotSet


def _as_snapshots(X):
    X = check_array(X, dtype=np.float64, ensure_min_samples=1)
    return SnapshotSet(X)


def _inner_product(weight):
    return weight if isinstance(weight, InnerProduct) else InnerProduct(weight)


class SineKMedoids(ClusterMixin, BaseEstimator):
    """PAM k-medoids under the squared sine dissimilarity.

    Parameters
    ----------
    n_clusters : number of clusters K.
    metric : "sine" to compute dissimilarities from the snapshots, or
        "precomputed" when X is already a squared sine-dissimilarity matrix.
    weight : inner-product weight (None, diagonal vector, or SPD matrix);
        only used with metric="sine".
    random_state : seed for the restart initializations.
    n_restarts, max_iter : PAM search budget.
    """

    def __init__(
        self,
        n_clusters=2,
        metric="sine",
        weight=None,
        random_state=0,
        n_restarts=5,
        max_iter=100,
    ):
        self.n_clusters = n_clusters
        self.metric = metric
        self.weight = weight
        self.random_state = random_state
        self.n_restarts = n_restarts
        self.max_iter = max_iter

    def fit(self, X, y=None):
        if self.metric == "precomputed":
            D = DissimilarityMatrix(
                check_array(X, dtype=np.float64), squared=True
            )
        elif self.metric == "sine":
            D = dissim_matrix(
                _as_snapshots(X), _inner_product(self.weight), squared=True
            )
        else:
            raise ValueError("metric must be 'sine' or 'precomputed'")
        outcome = pam(
            D,
            self.n_clusters,
            seed=self.random_state,
            restarts=self.n_restarts,
            max_iter=self.max_iter,
        )
        self.labels_ = outcome.partition.labels
        self.medoid_indices_ = outcome.partition.medoids
        self.inertia_ = outcome.cost
        self.n_iter_converged_ = outcome.converged
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_


class HNormKMeans(ClusterMixin, BaseEstimator):
    """Lloyd k-means in the weighted norm; the magnitude-sensitive baseline."""

    def __init__(
        self, n_clusters=2, weight=None, random_state=0, n_restarts=5, max_iter=100
    ):
        self.n_clusters = n_clusters
        self.weight = weight
        self.random_state = random_state
        self.n_restarts = n_restarts
        self.max_iter = max_iter

    def fit(self, X, y=None):
        outcome = kmeans_baseline(
            _as_snapshots(X),
            _inner_product(self.weight),
            self.n_clusters,
            seed=self.random_state,
            restarts=self.n_restarts,
            max_iter=self.max_iter,
        )
        self.labels_ = outcome.partition.labels
        self.inertia_ = outcome.cost
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_


class SnapshotPOD(TransformerMixin, BaseEstimator):
    """Snapshot-POD basis as a linear transformer.

    ``transform`` returns the basis coefficients of each snapshot;
    ``inverse_transform`` reconstructs snapshots from coefficients.
    """

    def __init__(self, n_components=1, weight=None, normalized=True):
        self.n_components = n_components
        self.weight = weight
        self.normalized = normalized

    def fit(self, X, y=None):
        snapshots = _as_snapshots(X)
        ip = _inner_product(self.weight)
        basis = snapshot_pod(
            snapshots,
            np.arange(snapshots.m),
            ip,
            self.n_components,
            normalized=self.normalized,
        )
        self.basis_ = basis
        self.components_ = basis.vectors
        self.energies_ = basis.energy
        self.n_components_ = basis.dim
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = check_array(X, dtype=np.float64)
        ip = _inner_product(self.weight)
        return X @ ip.weigh_rows(self.components_).T

    def inverse_transform(self, coeffs):
        check_is_fitted(self, "components_")
        return np.asarray(coeffs) @ self.components_


class LocalRomDictionary(BaseEstimator):
    """Two-step dictionary builder: sine-PAM partition plus local PODs.

    After ``fit``, ``labels_`` holds the partition, ``bases_`` the local
    orthonormal bases, and ``score`` returns the negative dictionary cost
    (higher is better, sklearn convention).
    """

    def __init__(
        self,
        n_clusters=2,
        n_components=1,
        weight=None,
        random_state=0,
        n_restarts=5,
    ):
        self.n_clusters = n_clusters
        self.n_components = n_components
        self.weight = weight
        self.random_state = random_state
        self.n_restarts = n_restarts

    def fit(self, X, y=None):
        snapshots = _as_snapshots(X)
        ip = _inner_product(self.weight)
        dct = build_dictionary(
            snapshots,
            ip,
            self.n_clusters,
            self.n_components,
            seed=self.random_state,
            restarts=self.n_restarts,
        )
        report = evaluate(snapshots, ip, dct)
        self.dictionary_ = dct
        self.labels_ = dct.partition.labels
        self.medoid_indices_ = dct.partition.medoids
        self.bases_ = dct.bases
        self.cost_ = report.total_cost
        return self

    def report(self, X, baselines=("global_pod", "kmeans_dict")):
        check_is_fitted(self, "dictionary_")
        snapshots = _as_snapshots(X)
        ip = _inner_product(self.weight)
        return evaluate(snapshots, ip, self.dictionary_, baselines=baselines)

    def score(self, X, y=None):
        check_is_fitted(self, "cost_")
        return -self.cost_
