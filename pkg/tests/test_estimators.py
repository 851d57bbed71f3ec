import numpy as np
import pytest
from sklearn.base import clone

import romdict as rd


def test_sine_kmedoids_fit_predict():
    S = rd.two_direction_manifold(n_h=8, m=10)
    est = rd.SineKMedoids(n_clusters=2, n_restarts=5)
    labels = est.fit_predict(S.data)
    assert np.array_equal(labels, np.arange(10) % 2)
    assert est.inertia_ <= 1e-12
    assert est.medoid_indices_.shape == (2,)


def test_sine_kmedoids_precomputed():
    D = rd.dissim_matrix(
        rd.two_direction_manifold(n_h=8, m=10), rd.InnerProduct(), squared=True
    )
    est = rd.SineKMedoids(n_clusters=2, metric="precomputed").fit(D.values)
    assert est.inertia_ <= 1e-12
    with pytest.raises(ValueError):
        rd.SineKMedoids(metric="cosine").fit(D.values)


def test_estimators_clone_and_params():
    est = rd.SineKMedoids(n_clusters=3, random_state=4)
    params = est.get_params()
    assert params["n_clusters"] == 3
    cloned = clone(est)
    assert cloned.get_params() == params
    cloned.set_params(n_clusters=2)
    assert cloned.n_clusters == 2


def test_hnorm_kmeans_matches_functional():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((12, 5))
    est = rd.HNormKMeans(n_clusters=3, random_state=1, n_restarts=4).fit(X)
    out = rd.kmeans_baseline(
        rd.SnapshotSet(X), rd.InnerProduct(), 3, seed=1, restarts=4
    )
    assert np.array_equal(est.labels_, out.partition.labels)
    assert est.inertia_ == pytest.approx(out.cost)


def test_snapshot_pod_transformer_roundtrip():
    rng = np.random.default_rng(1)
    basis = np.linalg.qr(rng.standard_normal((7, 2)))[0].T
    X = rng.standard_normal((9, 2)) @ basis
    est = rd.SnapshotPOD(n_components=2).fit(X)
    assert est.components_.shape == (2, 7)
    recon = est.inverse_transform(est.transform(X))
    assert np.allclose(recon, X, atol=1e-10)


def test_snapshot_pod_respects_weight():
    rng = np.random.default_rng(2)
    w = rng.uniform(0.5, 2.0, 6)
    X = rng.standard_normal((8, 6))
    est = rd.SnapshotPOD(n_components=3, weight=w).fit(X)
    G = est.components_ @ (est.components_ * w).T
    assert np.abs(G - np.eye(3)).max() <= 1e-8


def test_local_rom_dictionary_estimator():
    S = rd.two_direction_manifold(n_h=8, m=12)
    est = rd.LocalRomDictionary(n_clusters=2, n_components=1, n_restarts=5).fit(S.data)
    assert est.cost_ <= 1e-20
    assert est.score(S.data) == -est.cost_
    report = est.report(S.data, baselines=("global_pod",))
    assert report.baseline_costs["global_pod"] > est.cost_
    assert len(est.bases_) == 2
