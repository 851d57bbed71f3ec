"""Local orthonormal bases by snapshot-POD (method of snapshots)."""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import eigh

from .dissimilarity import rel_proj_error_sq_rows
from .snapshots import SnapshotSet, load_binary, save_binary

RANK_TOL = 1e-12


@dataclass(frozen=True)
class LocalBasis:
    """Orthonormal basis of one local approximation subspace.

    ``vectors`` holds the basis functions as rows; ``energy`` the retained
    eigenvalues of the (normalized) Gram operator, non-increasing.
    """

    vectors: np.ndarray
    energy: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.vectors, dtype=np.float64)
        e = np.asarray(self.energy, dtype=np.float64)
        if V.ndim != 2 or V.shape[0] < 1:
            raise ValueError("basis must hold at least one vector")
        if e.shape != (V.shape[0],):
            raise ValueError("energy length must match basis dimension")
        object.__setattr__(self, "vectors", V)
        object.__setattr__(self, "energy", e)

    @property
    def dim(self):
        return self.vectors.shape[0]


def _mgs(H, ip):
    """Modified Gram-Schmidt in the weighted inner product, in place."""
    for j in range(H.shape[0]):
        for i in range(j):
            H[j] -= ip.inner(H[i], H[j]) * H[i]
        nj = ip.norm(H[j])
        if nj <= 0.0:
            raise ValueError("basis reconstruction produced a zero vector")
        H[j] /= nj
    return H


def _fix_signs(H):
    # largest-magnitude entry positive, for reproducible outputs
    for row in H:
        k = np.argmax(np.abs(row))
        if row[k] < 0.0:
            row *= -1.0
    return H


def snapshot_pod(snapshots, indices, ip, n_modes, normalized=True):
    """POD basis of a snapshot cluster via its Gram eigendecomposition.

    With ``normalized=True`` the snapshots are first divided by their norms,
    which makes the basis the exact minimizer of the mean squared *relative*
    projection error over the cluster. The dimension is silently reduced when
    the cluster rank is below ``n_modes``.
    """
    indices = np.asarray(indices, dtype=np.intp)
    if indices.size == 0:
        raise ValueError("empty cluster index set")
    if n_modes < 1:
        raise ValueError("basis dimension must be at least 1")
    U = snapshots.data[indices]
    norms = ip.norms_of_rows(U)
    if np.any(norms <= 0.0):
        raise ValueError("cluster contains a zero snapshot")
    if normalized:
        U = U / norms[:, None]
    G = U @ ip.weigh_rows(U).T
    G = 0.5 * (G + G.T)
    lam, V = eigh(G)
    lam = lam[::-1]
    V = V[:, ::-1]
    keep = min(n_modes, indices.size)
    rank_mask = lam > RANK_TOL * lam[0]
    keep = min(keep, int(rank_mask.sum()))
    lam = lam[:keep]
    V = V[:, :keep]
    H = (V / np.sqrt(lam)).T @ U
    H = _mgs(H, ip)
    H = _fix_signs(H)
    return LocalBasis(H, lam)


def empirical_width_sq(snapshots, indices, basis, ip):
    """Mean squared relative projection error of a cluster onto a basis."""
    indices = np.asarray(indices, dtype=np.intp)
    if indices.size == 0:
        raise ValueError("empty cluster index set")
    errs = rel_proj_error_sq_rows(snapshots.data[indices], basis, ip)
    return float(errs.mean())


def save_basis(path, basis, cluster_indices):
    """Basis vectors in the snapshot binary format plus a JSON sidecar."""
    path = Path(path)
    save_binary(path, SnapshotSet(basis.vectors))
    sidecar = {
        "energy": [float(x) for x in basis.energy],
        "cluster_indices": [int(i) for i in cluster_indices],
    }
    path.with_suffix(path.suffix + ".json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
    )


def load_basis(path):
    path = Path(path)
    vectors = load_binary(path).data
    sidecar = json.loads(path.with_suffix(path.suffix + ".json").read_text())
    basis = LocalBasis(vectors, np.asarray(sidecar["energy"]))
    return basis, np.asarray(sidecar["cluster_indices"], dtype=np.intp)
