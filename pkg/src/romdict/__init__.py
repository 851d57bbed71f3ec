"""Dictionaries of local reduced-order bases from snapshot sets.

Partitions a sampled solution manifold with k-medoids clustering under the
sine dissimilarity and fits one normalized snapshot-POD basis per cluster,
minimizing the empirical mean squared relative projection error.
"""

from .clustering import (
    ClusteringOutcome,
    Partition,
    brute_force_kmedoids,
    kmeans_baseline,
    pam,
)
from .dictionary import (
    DictionaryReport,
    RomDictionary,
    brute_force_optimal_partition,
    build_dictionary,
    dictionary_cost,
    evaluate,
)
from .dissimilarity import (
    DissimilarityMatrix,
    dissim_matrix,
    property1_residual,
    rel_proj_error,
    sine_dissim,
)
from .estimators import HNormKMeans, LocalRomDictionary, SineKMedoids, SnapshotPOD
from .manifolds import ManifoldSpec, generate, two_direction_manifold
from .pod import LocalBasis, empirical_width_sq, snapshot_pod
from .snapshots import InnerProduct, SnapshotSet, gram, inner, norm

__all__ = [
    "ClusteringOutcome",
    "DictionaryReport",
    "DissimilarityMatrix",
    "HNormKMeans",
    "InnerProduct",
    "LocalBasis",
    "LocalRomDictionary",
    "ManifoldSpec",
    "Partition",
    "RomDictionary",
    "SineKMedoids",
    "SnapshotPOD",
    "SnapshotSet",
    "brute_force_kmedoids",
    "brute_force_optimal_partition",
    "build_dictionary",
    "dictionary_cost",
    "dissim_matrix",
    "empirical_width_sq",
    "evaluate",
    "generate",
    "gram",
    "inner",
    "kmeans_baseline",
    "norm",
    "pam",
    "property1_residual",
    "rel_proj_error",
    "sine_dissim",
    "snapshot_pod",
    "two_direction_manifold",
]

__version__ = "0.1.0"
