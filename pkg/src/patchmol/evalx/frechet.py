"""Frechet distance between Gaussian fits of (PCA-projected) embeddings."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from patchmol.chem.fingerprint import Fingerprint, fingerprint_matrix
from patchmol.errors import DegenerateInput

SHRINKAGE = 0.1


@dataclass(frozen=True)
class FDConfig:
    pca_components: int = 100
    sample_size: int = 5000
    shrinkage: bool = False

    def __post_init__(self):
        if self.pca_components < 0:
            raise ValueError("pca_components must be >= 0 (0 disables projection)")
        if self.sample_size < 2:
            raise ValueError("sample_size must be >= 2")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PCA:
    mean: np.ndarray
    components: np.ndarray  # (d, k), columns by descending eigenvalue
    explained_variance_ratio: float

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.mean) @ self.components


def fit_pca(x: np.ndarray, k: int) -> PCA:
    """Principal axes from the covariance eigendecomposition of ``x``."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] < 2:
        raise DegenerateInput("PCA needs at least two rows")
    mean = x.mean(axis=0)
    cov = np.cov(x, rowvar=False).reshape(x.shape[1], x.shape[1])
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(-vals, kind="stable")
    k = min(k, x.shape[1])
    vals = np.maximum(vals[order], 0.0)
    comps = vecs[:, order[:k]]
    # deterministic sign: largest-magnitude loading positive
    flip = np.sign(comps[np.argmax(np.abs(comps), axis=0), np.arange(k)])
    comps = comps * np.where(flip == 0, 1.0, flip)
    total = vals.sum()
    ratio = float(vals[:k].sum() / total) if total > 0 else 0.0
    return PCA(mean, comps, ratio)


def gaussian_stats(x: np.ndarray, shrinkage: bool = False):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] < 2:
        raise DegenerateInput("need at least two samples")
    mu = x.mean(axis=0)
    cov = np.cov(x, rowvar=False).reshape(x.shape[1], x.shape[1])
    if shrinkage:
        d = cov.shape[0]
        cov = (1 - SHRINKAGE) * cov + SHRINKAGE * (np.trace(cov) / d) * np.eye(d)
    return mu, cov


def _psd_sqrt(a: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh((a + a.T) / 2)
    return (vecs * np.sqrt(np.maximum(vals, 0.0))) @ vecs.T


def frechet_from_stats(mu1, cov1, mu2, cov2) -> float:
    """``|mu1 - mu2|^2 + tr(S1 + S2 - 2 (S1 S2)^(1/2))``, clamped at 0.

    The trace of ``(S1 S2)^(1/2)`` is taken from the eigenvalues of the
    symmetric matrix ``S1^(1/2) S2 S1^(1/2)``, which has the same spectrum;
    negative eigenvalues from round-off are clamped to 0.
    """
    mu1 = np.atleast_1d(np.asarray(mu1, dtype=np.float64))
    mu2 = np.atleast_1d(np.asarray(mu2, dtype=np.float64))
    cov1 = np.atleast_2d(np.asarray(cov1, dtype=np.float64))
    cov2 = np.atleast_2d(np.asarray(cov2, dtype=np.float64))
    s1 = _psd_sqrt(cov1)
    m = s1 @ cov2 @ s1
    vals = np.linalg.eigvalsh((m + m.T) / 2)
    tr_sqrt = np.sqrt(np.maximum(vals, 0.0)).sum()
    diff = mu1 - mu2
    fd = float(diff @ diff + np.trace(cov1) + np.trace(cov2) - 2.0 * tr_sqrt)
    return max(fd, 0.0)


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, np.ndarray):
        return x.astype(np.float64)
    x = list(x)
    if x and isinstance(x[0], Fingerprint):
        return fingerprint_matrix(x).astype(np.float64)
    return np.asarray(x, dtype=np.float64)


def frechet_distance(A, B, cfg: FDConfig = FDConfig(), pca: PCA | None = None, seed: int = 0) -> float:
    """Frechet distance between two embedded sets; ``B`` is the reference.

    Both sets are subsampled (seeded) to a common size of at most
    ``cfg.sample_size``. Unless ``pca`` is given, principal axes are fitted
    on the reference sample only; ``pca_components = 0`` skips projection.
    """
    a = _as_matrix(A)
    b = _as_matrix(B)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    if a.shape[0] < 2 or b.shape[0] < 2:
        raise DegenerateInput("both sets need at least two members")
    n = min(a.shape[0], b.shape[0], cfg.sample_size)
    rng = np.random.default_rng(seed)
    if a.shape[0] > n:
        a = a[np.sort(rng.choice(a.shape[0], n, replace=False))]
    if b.shape[0] > n:
        b = b[np.sort(rng.choice(b.shape[0], n, replace=False))]
    if pca is None and cfg.pca_components > 0:
        pca = fit_pca(b, cfg.pca_components)
    if pca is not None:
        a = pca.transform(a)
        b = pca.transform(b)
    mu1, c1 = gaussian_stats(a, cfg.shrinkage)
    mu2, c2 = gaussian_stats(b, cfg.shrinkage)
    return frechet_from_stats(mu1, c1, mu2, c2)
