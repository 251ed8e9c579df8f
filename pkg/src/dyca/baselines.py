"""
Reference reductions: PCA and FastICA.

Both subtract the channel mean, unlike the DyCA correlation estimates.
"""
from dataclasses import dataclass

import numpy as np

from dyca.exceptions import KTooLarge
from dyca.linalg import sym_eig
from dyca.signal import TimeSeries


@dataclass(frozen=True, eq=False)
class PcaResult:
    components: np.ndarray  # (N, k), orthonormal columns
    variances: np.ndarray  # (k,), descending
    mean: np.ndarray  # (N,)

    def transform(self, ts: TimeSeries) -> TimeSeries:
        scores = self.components.T @ (ts.data - self.mean[:, None])
        return ts.with_data(scores, [f"pca_{j + 1}" for j in range(scores.shape[0])])

    def reconstruct(self, scores):
        return self.components @ np.asarray(scores) + self.mean[:, None]


@dataclass(frozen=True, eq=False)
class IcaResult:
    unmixing: np.ndarray  # (k, N), applied to mean-removed data
    sources: TimeSeries
    iterations_used: int
    converged: bool
    mean: np.ndarray

    def transform(self, ts: TimeSeries) -> TimeSeries:
        return ts.with_data(self.unmixing @ (ts.data - self.mean[:, None]), self.sources.labels)


def _check_k(k, N):
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    if k > N:
        raise KTooLarge(f"k={k} exceeds the {N} available channels")


def pca(ts: TimeSeries, k: int) -> PcaResult:
    """Top-``k`` eigenvectors of the mean-removed covariance (1/T normalization)."""
    _check_k(k, ts.channels)
    mean = ts.data.mean(axis=1)
    X = ts.data - mean[:, None]
    cov = X @ X.T / ts.samples
    values, vectors = sym_eig(cov)
    return PcaResult(vectors[:, :k], np.clip(values[:k], 0.0, None), mean)


def _sym_decorrelate(W):
    # W <- (W W^T)^{-1/2} W
    s, u = np.linalg.eigh(W @ W.T)
    s = np.clip(s, np.finfo(float).tiny, None)
    return (u / np.sqrt(s)) @ u.T @ W


def fastica(ts: TimeSeries, k: int, seed=0, max_iter=200, tol=1e-6) -> IcaResult:
    """Symmetric FastICA with the ``tanh`` contrast.

    The data are whitened with :func:`pca`; the rotation starts from a
    seeded Gaussian draw.  Non-convergence is reported through
    ``converged=False``, not raised.
    """
    _check_k(k, ts.channels)
    if ts.samples < 10 * ts.channels:
        raise ValueError(f"need at least {10 * ts.channels} samples, got {ts.samples}")
    p = pca(ts, k)
    if np.any(p.variances <= 0):
        raise ValueError("data have fewer than k non-degenerate directions")
    whitener = (p.components / np.sqrt(p.variances)).T  # (k, N)
    Z = whitener @ (ts.data - p.mean[:, None])
    T = Z.shape[1]

    rng = np.random.default_rng(seed)
    W = _sym_decorrelate(rng.standard_normal((k, k)))
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        G = np.tanh(W @ Z)
        g_prime = 1.0 - G ** 2
        W_new = _sym_decorrelate(G @ Z.T / T - g_prime.mean(axis=1)[:, None] * W)
        change = np.max(np.abs(np.abs(np.einsum("ij,ij->i", W_new, W)) - 1.0))
        W = W_new
        if change < tol:
            converged = True
            break

    unmixing = W @ whitener
    labels = [f"ica_{j + 1}" for j in range(k)]
    sources = ts.with_data(unmixing @ (ts.data - p.mean[:, None]), labels)
    return IcaResult(unmixing, sources, it, converged, p.mean)
