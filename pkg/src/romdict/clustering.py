"""Partitioning the snapshot set.

PAM k-medoids on squared sine dissimilarities is the workhorse; a Euclidean
(weighted-norm) k-means serves as the intensity-sensitive baseline, and an
exhaustive medoid search acts as the exact oracle on small instances.
"""

import csv
from dataclasses import dataclass
from itertools import combinations

import numpy as np

BRUTE_FORCE_LIMIT = 15
_SWAP_TOL = 1e-14


@dataclass(frozen=True)
class Partition:
    """Assignment of each snapshot to one of K non-empty clusters."""

    labels: np.ndarray
    n_clusters: int
    medoids: np.ndarray | None = None

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.intp)
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 1:
            raise ValueError("labels must be a 1-D array")
        counts = np.bincount(labels, minlength=self.n_clusters)
        if counts.size > self.n_clusters or np.any(counts == 0):
            raise ValueError("every cluster id in [0, K) must appear at least once")
        if self.medoids is not None:
            medoids = np.asarray(self.medoids, dtype=np.intp)
            object.__setattr__(self, "medoids", medoids)
            if medoids.shape != (self.n_clusters,):
                raise ValueError("need exactly one medoid per cluster")
            if np.any(labels[medoids] != np.arange(self.n_clusters)):
                raise ValueError("medoid k must carry label k")

    @property
    def m(self):
        return self.labels.shape[0]

    def members(self, k):
        return np.nonzero(self.labels == k)[0]

    def to_csv(self, path):
        medoid_set = set() if self.medoids is None else set(self.medoids.tolist())
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["snapshot_index", "cluster_id", "is_medoid"])
            for i, k in enumerate(self.labels):
                writer.writerow([i, int(k), int(i in medoid_set)])


def load_partition_csv(path):
    labels = {}
    medoids = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            i = int(row["snapshot_index"])
            k = int(row["cluster_id"])
            labels[i] = k
            if int(row["is_medoid"]):
                medoids[k] = i
    label_arr = np.array([labels[i] for i in range(len(labels))], dtype=np.intp)
    K = label_arr.max() + 1
    medoid_arr = None
    if medoids:
        medoid_arr = np.array([medoids[k] for k in range(K)], dtype=np.intp)
    return Partition(label_arr, K, medoids=medoid_arr)


@dataclass(frozen=True)
class ClusteringOutcome:
    partition: Partition
    cost: float
    restarts_used: int
    converged: bool


def _check_pam_input(D, K):
    D.check()
    if not D.squared:
        raise ValueError("PAM consumes squared dissimilarities; set squared=True")
    if K < 1:
        raise ValueError("need at least one cluster")
    if K > D.m:
        raise ValueError(f"K={K} exceeds the number of snapshots m={D.m}")


def _canonical_from_medoids(D, medoids):
    """Labels from a medoid set, clusters ordered by smallest member index."""
    medoids = np.sort(np.asarray(medoids, dtype=np.intp))
    assign = np.argmin(D[:, medoids], axis=1)
    # a medoid always owns itself, even when tied with a collinear medoid
    assign[medoids] = np.arange(len(medoids))
    order = np.argsort([np.nonzero(assign == k)[0][0] for k in range(len(medoids))])
    medoids = medoids[order]
    labels = np.argmin(D[:, medoids], axis=1)
    labels[medoids] = np.arange(len(medoids))
    cost = float(D[np.arange(D.shape[0]), medoids[labels]].sum())
    return Partition(labels, len(medoids), medoids=medoids), cost


def _pam_build(D, K):
    m = D.shape[0]
    first = int(np.argmin(D.sum(axis=0)))
    medoids = [first]
    d_near = D[:, first].copy()
    for _ in range(1, K):
        # gain of adding candidate h: total decrease of nearest distances
        gains = np.maximum(d_near[:, None] - D, 0.0).sum(axis=0)
        gains[medoids] = -np.inf
        h = int(np.argmax(gains))
        medoids.append(h)
        d_near = np.minimum(d_near, D[:, h])
    return np.array(sorted(medoids), dtype=np.intp)


def _pam_swap(D, medoids, max_iter):
    m = D.shape[0]
    medoids = list(medoids)
    K = len(medoids)
    cost = float(np.min(D[:, medoids], axis=1).sum())
    converged = False
    for _ in range(max_iter):
        dists = D[:, medoids]
        order = np.argsort(dists, axis=1, kind="stable")
        nearest = order[:, 0]
        d1 = dists[np.arange(m), nearest]
        d2 = dists[np.arange(m), order[:, 1]] if K > 1 else np.full(m, np.inf)
        best = (cost, None, None)
        for j in range(K):
            d_no_j = np.where(nearest == j, d2, d1)
            swap_costs = np.minimum(d_no_j[:, None], D).sum(axis=0)
            swap_costs[medoids] = np.inf
            h = int(np.argmin(swap_costs))
            if swap_costs[h] < best[0] - _SWAP_TOL:
                best = (float(swap_costs[h]), j, h)
        if best[1] is None:
            converged = True
            break
        cost, j, h = best
        medoids[j] = h
    return np.array(medoids, dtype=np.intp), converged


def pam(D, K, seed=0, restarts=1, max_iter=100):
    """PAM k-medoids on a squared dissimilarity matrix.

    The first run starts from the greedy BUILD initialization; further
    restarts start from seeded random medoid sets. Best-cost outcome wins,
    deterministically for fixed (seed, restarts).
    """
    _check_pam_input(D, K)
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    Dv = D.values
    m = D.m
    if K == m:
        part, cost = _canonical_from_medoids(Dv, np.arange(m))
        return ClusteringOutcome(part, cost, restarts, True)
    rng = np.random.default_rng(seed)
    best = None
    for r in range(restarts):
        if r == 0:
            init = _pam_build(Dv, K)
        else:
            init = rng.choice(m, size=K, replace=False)
        medoids, converged = _pam_swap(Dv, init, max_iter)
        part, cost = _canonical_from_medoids(Dv, medoids)
        if best is None or cost < best.cost - _SWAP_TOL:
            best = ClusteringOutcome(part, cost, restarts, converged)
    return best


def brute_force_kmedoids(D, K):
    """Exact k-medoids optimum by enumerating all medoid subsets (m <= 15)."""
    _check_pam_input(D, K)
    if D.m > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"m={D.m} exceeds the brute-force guard ({BRUTE_FORCE_LIMIT}); use pam"
        )
    Dv = D.values
    best_cost = np.inf
    best_medoids = None
    for medoids in combinations(range(D.m), K):
        cost = Dv[:, medoids].min(axis=1).sum()
        if cost < best_cost - _SWAP_TOL:
            best_cost = cost
            best_medoids = medoids
    part, cost = _canonical_from_medoids(Dv, np.array(best_medoids))
    return ClusteringOutcome(part, cost, 1, True)


def _canonicalize_labels(labels, K):
    firsts = [np.nonzero(labels == k)[0][0] for k in range(K)]
    order = np.argsort(firsts)
    remap = np.empty(K, dtype=np.intp)
    remap[order] = np.arange(K)
    return remap[labels]


def kmeans_baseline(snapshots, ip, K, seed=0, restarts=1, max_iter=100):
    """Lloyd k-means in the weighted norm; the intensity-sensitive baseline.

    Cost is the sum of squared distances to the assigned centroid. Empty
    clusters are reseeded with the point farthest from its centroid.
    """
    if K < 1:
        raise ValueError("need at least one cluster")
    if K > snapshots.m:
        raise ValueError(f"K={K} exceeds the number of snapshots m={snapshots.m}")
    U = snapshots.data
    m = snapshots.m
    UW = ip.weigh_rows(U)
    sq_norms = np.einsum("ij,ij->i", U, UW)
    rng = np.random.default_rng(seed)
    best_cost = np.inf
    best_labels = None
    best_converged = False
    for _ in range(restarts):
        centroids = U[rng.choice(m, size=K, replace=False)].copy()
        labels = None
        converged = False
        for _ in range(max_iter):
            CW = ip.weigh_rows(centroids)
            c_sq = np.einsum("ij,ij->i", centroids, CW)
            d2 = sq_norms[:, None] - 2.0 * (U @ CW.T) + c_sq[None, :]
            new_labels = np.argmin(d2, axis=1)
            for k in range(K):
                if not np.any(new_labels == k):
                    own = d2[np.arange(m), new_labels]
                    far = int(np.argmax(own))
                    new_labels[far] = k
            if labels is not None and np.array_equal(new_labels, labels):
                converged = True
                break
            labels = new_labels
            for k in range(K):
                centroids[k] = U[labels == k].mean(axis=0)
        diff_cost = 0.0
        for k in range(K):
            R = U[labels == k] - centroids[k]
            diff_cost += float(np.einsum("ij,ij->", R, ip.weigh_rows(R)))
        if diff_cost < best_cost - _SWAP_TOL:
            best_cost = diff_cost
            best_labels = labels
            best_converged = converged
    labels = _canonicalize_labels(best_labels, K)
    return ClusteringOutcome(
        Partition(labels, K), best_cost, restarts, best_converged
    )
