"""Sine dissimilarity between snapshots and relative projection errors.

The sine dissimilarity of two nonzero vectors is the sine of the angle they
span in the weighted inner product; it is scale invariant, so collinear
snapshots are at dissimilarity zero. The relative projection error of a
vector onto a subspace with orthonormal basis {h_j} satisfies the identity

    eta(u, span{h_j})^2 = 1 - N + sum_j dissim(u, h_j)^2,

which links subspace approximation quality to pairwise dissimilarities.
"""

from dataclasses import dataclass

import numpy as np

from .snapshots import gram

ORTHONORMALITY_TOL = 1e-8


@dataclass(frozen=True)
class DissimilarityMatrix:
    """Symmetric m x m matrix of sine dissimilarities (or their squares)."""

    values: np.ndarray
    squared: bool = False

    def __post_init__(self):
        D = np.asarray(self.values, dtype=np.float64)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ValueError("dissimilarity matrix must be square")
        object.__setattr__(self, "values", D)

    @property
    def m(self):
        return self.values.shape[0]

    def check(self):
        D = self.values
        if np.abs(D - D.T).max() > 1e-12:
            raise ValueError("dissimilarity matrix is not symmetric")
        if np.any(np.diag(D) != 0.0):
            raise ValueError("dissimilarity matrix diagonal must be exactly zero")
        if D.min() < 0.0 or D.max() > 1.0:
            raise ValueError("dissimilarity entries must lie in [0, 1]")
        return self

    def to_csv(self, path):
        np.savetxt(path, self.values, delimiter=",", fmt="%.17g")


def _nonzero_norm(ip, u, name):
    n = ip.norm(u)
    if n <= 0.0:
        raise ValueError(
            f"{name} has zero norm; the snapshot manifold must not contain "
            "the zero solution"
        )
    return n


def sine_dissim(u, v, ip):
    """Sine of the angle between u and v; in [0, 1], zero iff collinear."""
    nu = _nonzero_norm(ip, u, "u")
    nv = _nonzero_norm(ip, v, "v")
    c = ip.inner(u, v) / (nu * nv)
    sin_sq = np.clip(1.0 - c * c, 0.0, 1.0)
    if sin_sq < 1e-12:
        # the Gram ratio cancels catastrophically near collinearity; the
        # residual of the 1-D projection keeps full accuracy there
        u = np.asarray(u, dtype=np.float64)
        w = np.asarray(v, dtype=np.float64) / nv
        r = u - ip.inner(u, w) * w
        return min(ip.norm(r) / nu, 1.0)
    return float(np.sqrt(sin_sq))


def dissim_matrix(snapshots, ip, squared=False):
    """All pairwise sine dissimilarities, computed from the Gram matrix."""
    G = gram(snapshots, ip)
    d = np.diag(G)
    D = np.clip(1.0 - G * G / np.outer(d, d), 0.0, 1.0)
    D = 0.5 * (D + D.T)
    np.fill_diagonal(D, 0.0)
    if not squared:
        D = np.sqrt(D)
    return DissimilarityMatrix(D, squared=squared)


def check_orthonormal(basis, ip, tol=ORTHONORMALITY_TOL):
    H = basis.vectors
    G = H @ ip.weigh_rows(H).T
    dev = np.abs(G - np.eye(H.shape[0])).max()
    if dev > tol:
        raise ValueError(f"basis is not orthonormal (Gram deviation {dev:.3e})")


def rel_proj_error(u, basis, ip):
    """Relative projection error of u onto the span of an orthonormal basis.

    Computed both from the projection coefficients and from the explicit
    residual; the two must agree to 1e-8 and the coefficient form is returned.
    """
    check_orthonormal(basis, ip)
    _nonzero_norm(ip, u, "u")
    u = np.asarray(u, dtype=np.float64)
    norm_sq = ip.inner(u, u)
    H = basis.vectors
    coeffs = H @ ip.weigh_rows(u[None, :]).ravel()
    eta_coeff = float(np.sqrt(np.clip(1.0 - coeffs @ coeffs / norm_sq, 0.0, 1.0)))
    residual = u - coeffs @ H
    eta_res_sq = min(ip.inner(residual, residual) / norm_sq, 1.0)
    # squared comparison: near zero error the sqrt inflates roundoff to ~1e-8
    if abs(eta_coeff**2 - eta_res_sq) > 1e-8:
        raise ValueError(
            f"projection error formulas disagree: {eta_coeff**2} vs {eta_res_sq}"
        )
    return eta_coeff


def rel_proj_error_sq_rows(U, basis, ip):
    """Squared relative projection errors of each row of U, residual form.

    The residual form keeps full accuracy near zero error, where the
    coefficient form flattens out at roundoff level.
    """
    check_orthonormal(basis, ip)
    H = basis.vectors
    norms_sq = np.einsum("ij,ij->i", U, ip.weigh_rows(U))
    if np.any(norms_sq <= 0.0):
        raise ValueError("zero-norm row in projection error evaluation")
    C = U @ ip.weigh_rows(H).T
    R = U - C @ H
    res_sq = np.einsum("ij,ij->i", R, ip.weigh_rows(R))
    return np.clip(res_sq / norms_sq, 0.0, 1.0)


def property1_residual(u, basis, ip):
    """Gap between eta(u, B)^2 and 1 - N + sum_j dissim(u, h_j)^2.

    A diagnostic for the identity tying projection errors to dissimilarities;
    must be at roundoff level for any valid input.
    """
    eta = rel_proj_error(u, basis, ip)
    N = basis.vectors.shape[0]
    total = sum(sine_dissim(u, h, ip) ** 2 for h in basis.vectors)
    return abs(eta**2 - (1.0 - N + total))
