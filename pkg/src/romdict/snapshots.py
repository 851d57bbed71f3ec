"""Snapshot sets, weighted inner products and snapshot file IO."""

import struct
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_MAGIC = b"ROMD"
_FORMAT_VERSION = 1


class InnerProduct:
    """Inner product on the discrete solution space.

    The weight is one of:
      * ``None`` — identity (plain Euclidean inner product),
      * a 1-D array of strictly positive entries — diagonal weight
        (e.g. a lumped mass matrix),
      * a 2-D symmetric matrix — dense SPD weight. Positive definiteness
        of a dense weight is trusted, not verified.
    """

    def __init__(self, weight=None):
        if weight is None:
            self.weight = None
        else:
            w = np.asarray(weight, dtype=np.float64)
            if not np.all(np.isfinite(w)):
                raise ValueError("inner-product weight has non-finite entries")
            if w.ndim == 1:
                if np.any(w <= 0.0):
                    raise ValueError("diagonal weight must be strictly positive")
            elif w.ndim == 2:
                if w.shape[0] != w.shape[1]:
                    raise ValueError("dense weight must be square")
                scale = max(np.abs(w).max(), 1.0)
                if np.abs(w - w.T).max() > 1e-12 * scale:
                    raise ValueError("dense weight must be symmetric")
                warnings.warn(
                    "dense weight: positive definiteness is trusted, not checked",
                    stacklevel=2,
                )
                w = 0.5 * (w + w.T)
            else:
                raise ValueError("weight must be a vector or a square matrix")
            self.weight = w

    @property
    def kind(self):
        if self.weight is None:
            return "identity"
        return "diagonal" if self.weight.ndim == 1 else "dense"

    @property
    def dim(self):
        """Required vector length, or None for the identity weight."""
        if self.weight is None:
            return None
        return self.weight.shape[0]

    def _check(self, u):
        u = np.asarray(u, dtype=np.float64)
        if u.ndim != 1:
            raise ValueError("expected a 1-D vector")
        if self.dim is not None and u.shape[0] != self.dim:
            raise ValueError(
                f"vector length {u.shape[0]} does not match weight size {self.dim}"
            )
        if not np.all(np.isfinite(u)):
            raise ValueError("vector has non-finite entries")
        return u

    def weigh_rows(self, U):
        """Apply the weight to each row of a 2-D array."""
        if self.weight is None:
            return U
        if self.weight.ndim == 1:
            return U * self.weight
        return U @ self.weight

    def inner(self, u, v):
        u = self._check(u)
        v = self._check(v)
        if u.shape != v.shape:
            raise ValueError("inner product arguments have mismatched lengths")
        if self.weight is None:
            return float(u @ v)
        if self.weight.ndim == 1:
            return float(u @ (self.weight * v))
        return float(u @ (self.weight @ v))

    def norm(self, u):
        q = self.inner(u, u)
        if q < 0.0:
            if q < -1e-12:
                raise ValueError(f"weight is not positive definite: <u,u> = {q}")
            q = 0.0
        return float(np.sqrt(q))

    def norms_of_rows(self, U):
        q = np.einsum("ij,ij->i", U, self.weigh_rows(U))
        return np.sqrt(np.maximum(q, 0.0))


def inner(u, v, ip):
    """<u, v> under the configured weight."""
    return ip.inner(u, v)


def norm(u, ip):
    """Norm induced by the inner product; small negative squares clamp to 0."""
    return ip.norm(u)


@dataclass(frozen=True)
class SnapshotSet:
    """m snapshots of dimension n_h, the discrete sampled solution manifold.

    ``labels`` optionally carries the per-snapshot parameter vectors; it is
    metadata only and never enters any computation.
    """

    data: np.ndarray
    labels: np.ndarray | None = None
    eps_zero: float = 1e-12

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError("snapshot data must be a non-empty m x n_h matrix")
        if not np.all(np.isfinite(data)):
            raise ValueError("snapshot data has non-finite entries")
        object.__setattr__(self, "data", data)
        if self.labels is not None:
            labels = np.atleast_2d(np.asarray(self.labels, dtype=np.float64))
            if labels.shape[0] != data.shape[0]:
                raise ValueError("labels row count must match snapshot count")
            object.__setattr__(self, "labels", labels)

    @property
    def m(self):
        return self.data.shape[0]

    @property
    def n_h(self):
        return self.data.shape[1]

    def check_nonzero(self, ip):
        """Reject snapshot sets containing a (numerically) zero snapshot."""
        norms = ip.norms_of_rows(self.data)
        floor = self.eps_zero * norms.max()
        bad = np.nonzero(norms <= floor)[0]
        if bad.size:
            raise ValueError(
                f"snapshot {bad[0]} has norm {norms[bad[0]]:.3e} below the "
                f"zero-snapshot threshold {floor:.3e}"
            )
        return norms


def gram(snapshots, ip):
    """Gram matrix G_ij = <u_i, u_j> of a snapshot set.

    Raises if any snapshot is numerically zero, naming the offending index.
    """
    U = snapshots.data
    G = U @ ip.weigh_rows(U).T
    G = 0.5 * (G + G.T)
    diag = np.diag(G)
    floor = (snapshots.eps_zero ** 2) * diag.max()
    bad = np.nonzero(diag <= floor)[0]
    if bad.size:
        raise ValueError(f"snapshot {bad[0]} has numerically zero norm")
    return G


# ---------------------------------------------------------------------------
# File IO


def save_binary(path, snapshots):
    """Write the binary snapshot format (magic ROMD, version, m, n_h, data)."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", _FORMAT_VERSION))
        fh.write(struct.pack("<QQ", snapshots.m, snapshots.n_h))
        fh.write(snapshots.data.astype("<f8").tobytes())
        if snapshots.labels is not None:
            p = snapshots.labels.shape[1]
            fh.write(struct.pack("<Q", p))
            fh.write(snapshots.labels.astype("<f8").tobytes())


def load_binary(path):
    raw = Path(path).read_bytes()
    if raw[:4] != _MAGIC:
        raise ValueError(f"{path}: not a ROMD snapshot file")
    (version,) = struct.unpack_from("<I", raw, 4)
    if version != _FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version {version}")
    m, n_h = struct.unpack_from("<QQ", raw, 8)
    offset = 24
    count = m * n_h
    data = np.frombuffer(raw, dtype="<f8", count=count, offset=offset)
    data = data.reshape(m, n_h).copy()
    offset += count * 8
    labels = None
    if offset < len(raw):
        (p,) = struct.unpack_from("<Q", raw, offset)
        offset += 8
        labels = np.frombuffer(raw, dtype="<f8", count=m * p, offset=offset)
        labels = labels.reshape(m, p).copy()
    return SnapshotSet(data, labels=labels)


def save_csv(path, snapshots):
    """One snapshot per row, comma separated, no header."""
    np.savetxt(path, snapshots.data, delimiter=",", fmt="%.17g")


def load_csv(path):
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    return SnapshotSet(data)


def load_diagonal_weights(path):
    """Diagonal weight file: one positive decimal per line."""
    w = np.loadtxt(path, ndmin=1)
    return InnerProduct(w)
