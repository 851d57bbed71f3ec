"""Synthetic snapshot manifolds with known reducibility structure.

Four families cover the interesting regimes: a translated Gaussian pulse
(slowly decaying width under a global basis, well clustered locally), a
multi-regime set of hidden directions, a pure-scaling family (a single
direction at many intensities, the fully degenerate case), and snapshots
drawn from a random low-rank subspace. Intensity randomization is a
first-class knob: it is what separates shape-based from magnitude-based
clustering.
"""

import json
from dataclasses import dataclass

import numpy as np

from .snapshots import SnapshotSet

KINDS = ("translated_gaussian", "multi_regime", "pure_scaling", "random_lowrank")


@dataclass(frozen=True)
class ManifoldSpec:
    kind: str
    n_h: int = 100
    m: int = 32
    seed: int = 0
    sigma: float = 0.05
    centers: str = "equispaced"  # or "random"
    regimes: int = 2
    relative_noise: float = 0.0
    rank: int = 3
    intensity_range: tuple = (0.5, 2.0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown manifold kind {self.kind!r}; one of {KINDS}")
        if self.n_h < 1 or self.m < 1:
            raise ValueError("n_h and m must be positive")
        lo, hi = self.intensity_range
        if not (0.0 < lo <= hi):
            raise ValueError("intensity range must satisfy 0 < lo <= hi")

    @classmethod
    def from_json(cls, text):
        payload = json.loads(text)
        if "intensity_range" in payload:
            payload["intensity_range"] = tuple(payload["intensity_range"])
        return cls(**payload)


def _intensities(spec, rng):
    lo, hi = spec.intensity_range
    # log-uniform so wide ranges sample both ends
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=spec.m))


def generate(spec):
    """Deterministic snapshot set for a manifold spec; parameters as labels."""
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "translated_gaussian":
        grid = np.linspace(0.0, 1.0, spec.n_h)
        if spec.centers == "equispaced":
            centers = np.linspace(0.0, 1.0, spec.m)
        elif spec.centers == "random":
            centers = rng.uniform(0.0, 1.0, size=spec.m)
        else:
            raise ValueError(f"unknown centers mode {spec.centers!r}")
        amps = _intensities(spec, rng)
        data = amps[:, None] * np.exp(
            -((grid[None, :] - centers[:, None]) ** 2) / (2.0 * spec.sigma**2)
        )
        labels = np.column_stack([centers, amps])
    elif spec.kind == "multi_regime":
        R = spec.regimes
        if R < 1 or R > min(spec.m, spec.n_h):
            raise ValueError("regime count must be in [1, min(m, n_h)]")
        dirs, _ = np.linalg.qr(rng.standard_normal((spec.n_h, R)))
        dirs = dirs.T
        regime = np.arange(spec.m) % R
        amps = _intensities(spec, rng)
        data = amps[:, None] * dirs[regime]
        if spec.relative_noise > 0.0:
            noise = rng.standard_normal((spec.m, spec.n_h))
            noise /= np.linalg.norm(noise, axis=1, keepdims=True)
            data = amps[:, None] * (dirs[regime] + spec.relative_noise * noise)
        labels = np.column_stack([regime.astype(float), amps])
    elif spec.kind == "pure_scaling":
        direction = rng.standard_normal(spec.n_h)
        direction /= np.linalg.norm(direction)
        amps = _intensities(spec, rng)
        data = amps[:, None] * direction[None, :]
        labels = amps[:, None]
    elif spec.kind == "random_lowrank":
        r = spec.rank
        if r < 1 or r > spec.n_h:
            raise ValueError("rank must be in [1, n_h]")
        basis, _ = np.linalg.qr(rng.standard_normal((spec.n_h, r)))
        coeffs = rng.standard_normal((spec.m, r))
        # keep coefficients away from zero so no snapshot degenerates
        small = np.linalg.norm(coeffs, axis=1) < 1e-3
        coeffs[small] += 1.0
        data = coeffs @ basis.T
        labels = coeffs
    return SnapshotSet(data, labels=labels)


def two_direction_manifold(n_h=50, m=20, intensity_range=(0.1, 10.0)):
    """Snapshots along two orthogonal axes with intensities straddling both.

    The canonical shape-vs-intensity contrast case: sine dissimilarity sees
    exactly two directions, while norm-based clustering groups by magnitude.
    """
    lo, hi = intensity_range
    amps = np.exp(np.linspace(np.log(lo), np.log(hi), m))
    axes = np.zeros((m, n_h))
    which = np.arange(m) % 2
    axes[np.arange(m), which] = 1.0
    data = amps[:, None] * axes
    labels = np.column_stack([which.astype(float), amps])
    return SnapshotSet(data, labels=labels)
