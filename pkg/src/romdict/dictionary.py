"""Dictionary construction, cost evaluation and the exact partition oracle.

The two-step pipeline is: (i) partition the snapshot set by PAM k-medoids on
squared sine dissimilarities, (ii) fit one normalized snapshot-POD basis per
cluster. The dictionary cost is the probability-weighted sum of per-cluster
mean squared relative projection errors, with cluster probabilities taken as
empirical frequencies |cluster| / m.
"""

import json
from dataclasses import dataclass

import numpy as np

from .clustering import Partition, kmeans_baseline, pam
from .dissimilarity import dissim_matrix
from .pod import empirical_width_sq, snapshot_pod

ORACLE_PARTITION_LIMIT = 10
BASELINE_NAMES = ("global_pod", "kmeans_dict", "random_dict")


@dataclass(frozen=True)
class RomDictionary:
    """A partition of the snapshot set plus one local basis per cluster."""

    partition: Partition
    bases: tuple
    config: dict

    def __post_init__(self):
        if len(self.bases) != self.partition.n_clusters:
            raise ValueError("need exactly one basis per cluster")


@dataclass(frozen=True)
class DictionaryReport:
    per_cluster: tuple
    total_cost: float
    baseline_costs: dict
    config: dict

    def to_dict(self):
        return {
            "config": self.config,
            "per_cluster": [
                {
                    "id": int(c["id"]),
                    "size": int(c["size"]),
                    "probability": c["probability"],
                    "width_sq": c["width_sq"],
                }
                for c in self.per_cluster
            ],
            "total_cost": self.total_cost,
            "baselines": dict(self.baseline_costs),
        }

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _fit_local_bases(snapshots, ip, partition, n_modes, normalized=True):
    bases = []
    for k in range(partition.n_clusters):
        idx = partition.members(k)
        bases.append(
            snapshot_pod(snapshots, idx, ip, min(n_modes, idx.size), normalized)
        )
    return tuple(bases)


def dictionary_cost(snapshots, ip, partition, bases):
    """Probability-weighted sum of per-cluster empirical squared widths."""
    m = snapshots.m
    per_cluster = []
    total = 0.0
    for k in range(partition.n_clusters):
        idx = partition.members(k)
        width_sq = empirical_width_sq(snapshots, idx, bases[k], ip)
        prob = idx.size / m
        per_cluster.append(
            {"id": k, "size": idx.size, "probability": prob, "width_sq": width_sq}
        )
        total += prob * width_sq
    return total, per_cluster


def build_dictionary(snapshots, ip, K, N, seed=0, restarts=5, normalized=True):
    """Two-step construction: sine-PAM partition, then per-cluster POD.

    N is capped per cluster at the cluster rank (reported in the basis
    energies); deterministic for fixed (seed, restarts).
    """
    if N < 1:
        raise ValueError("basis dimension must be at least 1")
    D = dissim_matrix(snapshots, ip, squared=True)
    outcome = pam(D, K, seed=seed, restarts=restarts)
    bases = _fit_local_bases(snapshots, ip, outcome.partition, N, normalized)
    config = {
        "K": int(K),
        "N": int(N),
        "seed": int(seed),
        "restarts": int(restarts),
        "normalized": bool(normalized),
    }
    return RomDictionary(outcome.partition, bases, config)


def _random_partition(m, K, seed):
    rng = np.random.default_rng(seed)
    while True:
        labels = rng.integers(0, K, size=m)
        if np.unique(labels).size == K:
            return Partition(labels.astype(np.intp), K)


def evaluate(snapshots, ip, dictionary, baselines=()):
    """Fill the per-cluster widths and cost, plus requested baseline costs.

    Baselines are rebuilt with the dictionary's own N and seed:
    ``global_pod`` is the single-cluster dictionary, ``kmeans_dict`` pairs the
    weighted-norm k-means partition with local PODs, ``random_dict`` uses
    seeded uniform random labels.
    """
    total, per_cluster = dictionary_cost(
        snapshots, ip, dictionary.partition, dictionary.bases
    )
    cfg = dictionary.config
    N, seed, restarts = cfg["N"], cfg["seed"], cfg["restarts"]
    baseline_costs = {}
    for name in baselines:
        if name == "global_pod":
            part = Partition(np.zeros(snapshots.m, dtype=np.intp), 1)
        elif name == "kmeans_dict":
            part = kmeans_baseline(
                snapshots, ip, cfg["K"], seed=seed, restarts=restarts
            ).partition
        elif name == "random_dict":
            part = _random_partition(snapshots.m, cfg["K"], seed)
        else:
            raise ValueError(
                f"unknown baseline {name!r}; expected one of {BASELINE_NAMES}"
            )
        bases = _fit_local_bases(snapshots, ip, part, N, normalized=True)
        baseline_costs[name] = dictionary_cost(snapshots, ip, part, bases)[0]
    return DictionaryReport(tuple(per_cluster), total, baseline_costs, dict(cfg))


def _set_partitions(m, K):
    """All partitions of {0..m-1} into exactly K non-empty blocks.

    Yields restricted-growth label arrays, so block ids are already ordered
    by smallest member index and no partition repeats up to relabeling.
    """
    labels = np.zeros(m, dtype=np.intp)

    def rec(i, used):
        if m - i < K - used:
            return
        if i == m:
            if used == K:
                yield labels.copy()
            return
        for k in range(min(used + 1, K)):
            labels[i] = k
            yield from rec(i + 1, max(used, k + 1))

    yield from rec(1, 1)


def brute_force_optimal_partition(snapshots, ip, K, N):
    """Exact minimizer of the dictionary cost over all K-block partitions.

    Representatives are free subspaces: each candidate cluster gets its own
    normalized POD of dimension min(N, rank). Guarded to m <= 10; ties are
    broken by enumeration order.
    """
    m = snapshots.m
    if m > ORACLE_PARTITION_LIMIT:
        raise ValueError(
            f"m={m} exceeds the oracle guard ({ORACLE_PARTITION_LIMIT})"
        )
    if K > m:
        raise ValueError(f"K={K} exceeds the number of snapshots m={m}")
    best_cost = np.inf
    best_labels = None
    for labels in _set_partitions(m, K):
        part = Partition(labels, K)
        bases = _fit_local_bases(snapshots, ip, part, N, normalized=True)
        cost = dictionary_cost(snapshots, ip, part, bases)[0]
        if cost < best_cost - 1e-15:
            best_cost = cost
            best_labels = labels
    return Partition(best_labels, K), float(best_cost)
