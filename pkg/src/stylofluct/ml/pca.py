"""Principal component analysis on z-scored attributes via cyclic Jacobi rotations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import LabeledDataset, Standardizer


def jacobi_eigh(a: np.ndarray, tol: float = 1e-10, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and column eigenvectors of a symmetric matrix.

    Cyclic sweeps over the upper triangle; stops once the off-diagonal
    Frobenius norm falls below ``tol`` times the matrix norm.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(a, a.T, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix is not symmetric")
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2) * 2)
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # rotate rows/columns p and q
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * ap - s * aq, s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * ap - s * aq, s * ap + c * aq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.diag(a).copy(), v


@dataclass(frozen=True)
class PCAResult:
    coords: np.ndarray               # rows x dims
    explained_variance_ratio: np.ndarray
    eigenvalues: np.ndarray          # all, descending
    components: np.ndarray           # attributes x dims
    covariance: np.ndarray


def pca(dataset: LabeledDataset | np.ndarray, dims: int = 2) -> PCAResult:
    x = dataset.x if isinstance(dataset, LabeledDataset) else np.asarray(dataset, dtype=float)
    n, m = x.shape
    if n < 2:
        raise ValueError("PCA needs at least 2 rows")
    if m < dims:
        raise ValueError(f"PCA to {dims} dims needs at least {dims} attributes, got {m}")
    if not (x.std(axis=0) > 0).any():
        raise ValueError("every attribute has zero variance")
    z = Standardizer().fit_transform(x)
    cov = z.T @ z / (n - 1)
    values, vectors = jacobi_eigh(cov)
    order = np.argsort(-values, kind="stable")
    values, vectors = values[order], vectors[:, order]
    for j in range(vectors.shape[1]):
        if vectors[np.argmax(np.abs(vectors[:, j])), j] < 0:
            vectors[:, j] *= -1
    total = values.clip(min=0).sum()
    top = vectors[:, :dims]
    return PCAResult(
        coords=z @ top,
        explained_variance_ratio=values[:dims].clip(min=0) / total,
        eigenvalues=values,
        components=top,
        covariance=cov,
    )
