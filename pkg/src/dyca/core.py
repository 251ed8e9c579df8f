"""
Dynamical Component Analysis.

The signal ``q(t)`` is assumed to be driven by a low-dimensional ODE whose
first few equations are linear in the latent amplitudes.  For a projection
vector ``u`` the best linear prediction of ``qdot^T u`` from ``q`` leaves a
relative residual ``1 - lambda`` where ``lambda`` solves

    C1 C0^{-1} C1^T u = lambda C2 u,

with ``C0 = <q q^T>``, ``C1 = <qdot q^T>`` and ``C2 = <qdot qdot^T>``.
Eigenvalues near one flag linearly evolving amplitudes ``x_i = q^T u_i``.
"""
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from dyca.exceptions import (
    DycaError,
    DegenerateU,
    DimensionMismatch,
    NoComponents,
    NotPositiveDefinite,
    Singular,
    SingularGram,
)
from dyca.linalg import add_ridge, gen_sym_eig, orthonormal_basis, solve_spd, symmetrize
from dyca.signal import (
    CorrelationTriple,
    TimeSeries,
    WindowSpec,
    central_difference,
    correlation_triple,
    windows,
)

DEFAULT_RIDGES = (0.0, 1e-10, 1e-8)
DEFAULT_THRESHOLD = 0.95
UPPER_SLACK = 1e-6


@dataclass(frozen=True, eq=False)
class DycaSpectrum:
    """Generalized eigenvalues (descending) with C2-normalized eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray
    ridge_used: float = 0.0

    def top(self, k):
        out = np.full(k, np.nan)
        n = min(k, self.values.size)
        out[:n] = self.values[:n]
        return out


@dataclass(frozen=True, eq=False)
class DycaProjection:
    """Orthonormal basis of ``span{u_1..u_m, v_1..v_m}``.

    ``u_part`` holds the eigenvectors above ``threshold`` and ``v_part`` their
    partners ``C0^{-1} C1^T u_i``.
    """

    m: int
    n: int
    basis: np.ndarray
    threshold: float
    u_part: np.ndarray
    v_part: np.ndarray


@dataclass(frozen=True, eq=False)
class DycaAmplitudes:
    series: TimeSeries
    source_window: Optional[int] = None


@dataclass(frozen=True, eq=False)
class CostPoint:
    u: np.ndarray
    v_set: Sequence[np.ndarray]
    a: Sequence[float]


@dataclass(frozen=True, eq=False)
class WindowResult:
    """Outcome of one window; exactly one of ``spectrum`` and ``error`` is set."""

    index: int
    t_start: float
    spectrum: Optional[DycaSpectrum] = None
    error: Optional[str] = None

    @property
    def ok(self):
        return self.spectrum is not None


def fit(triple: CorrelationTriple, ridges=DEFAULT_RIDGES) -> DycaSpectrum:
    """Solve the DyCA generalized eigenproblem for a correlation triple.

    Ridges are tried in order until both ``C0`` and ``C2`` factor; the one
    that worked is recorded on the result.

    Raises
    ------
    Singular
        If every ridge in ``ridges`` fails.
    """
    last = None
    for ridge in ridges:
        try:
            c0 = add_ridge(triple.c0, ridge)
            A = symmetrize(triple.c1 @ solve_spd(c0, triple.c1.T))
            result = gen_sym_eig(A, triple.c2, ridge)
        except NotPositiveDefinite as exc:
            last = exc
            continue
        if result.values[0] > 1 + UPPER_SLACK:
            warnings.warn(f"largest eigenvalue {result.values[0]:.8g} exceeds 1", RuntimeWarning,
                          stacklevel=2)
        return DycaSpectrum(result.values, result.vectors, float(ridge))
    raise Singular(f"correlation matrices not positive definite with ridge {ridges[-1]}: {last}")


def derive_v(u, triple: CorrelationTriple, ridge=0.0):
    """``C0^{-1} C1^T u``: the combination ``sum_j a_j v_j`` paired with ``u``.

    ``u`` may be a vector or a matrix of column vectors.
    """
    u = np.asarray(u, dtype=float)
    if u.shape[0] != triple.dim:
        raise DimensionMismatch(f"u has {u.shape[0]} entries, triple is {triple.dim}-dimensional")
    try:
        return solve_spd(add_ridge(triple.c0, ridge), triple.c1.T @ u)
    except NotPositiveDefinite as exc:
        raise Singular(f"C0 is not positive definite: {exc}") from None


def build_projection(spectrum: DycaSpectrum, triple: CorrelationTriple,
                     threshold=DEFAULT_THRESHOLD, rank_tol=1e-8) -> DycaProjection:
    """Projection subspace from the eigenvectors with eigenvalue >= ``threshold``.

    Columns are scaled to unit length before the rank decision so that the
    tolerance does not depend on the relative scale of ``u`` and ``v``.
    """
    m = int(np.count_nonzero(spectrum.values >= threshold))
    if m == 0:
        raise NoComponents(
            f"no eigenvalue >= {threshold} (largest is {spectrum.values[0]:.6g})")
    u_part = spectrum.vectors[:, :m]
    v_part = derive_v(u_part, triple, spectrum.ridge_used)
    stacked = np.hstack([u_part, v_part])
    norms = np.linalg.norm(stacked, axis=0)
    norms[norms == 0] = 1.0
    basis, n = orthonormal_basis(stacked / norms, rank_tol)
    return DycaProjection(m, n, basis, float(threshold), u_part, v_part)


def project(ts: TimeSeries, proj, source_window=None) -> DycaAmplitudes:
    """Amplitudes ``basis^T q(t)``; ``proj`` is a DycaProjection or a basis matrix."""
    basis = proj.basis if isinstance(proj, DycaProjection) else np.asarray(proj, dtype=float)
    if basis.ndim != 2 or basis.shape[0] != ts.channels:
        raise DimensionMismatch(
            f"basis has shape {basis.shape}, signal has {ts.channels} channels")
    labels = [f"dyca_{j + 1}" for j in range(basis.shape[1])]
    return DycaAmplitudes(ts.with_data(basis.T @ ts.data, labels), source_window)


def patterns(filters, triple: CorrelationTriple):
    """Sensor-space patterns belonging to amplitude filters.

    For amplitudes ``x = F^T q`` the least-squares reconstruction of the
    signal is ``q ~ A x`` with ``A = C0 F (F^T C0 F)^{-1}``.  ``A F^T`` is
    a rank-``k`` projection whose range ``span(C0 F)`` is where the
    amplitudes live in sensor space; for ``q = W x + noise`` it converges to
    ``span(W)`` even though ``F`` itself is only determined up to the noise
    directions.

    Parameters
    ----------
    filters : (N, k) array_like
        Columns ``u_i`` (or any basis) used to form amplitudes.
    triple : CorrelationTriple

    Returns
    -------
    (N, k) ndarray
    """
    F = np.asarray(filters, dtype=float)
    if F.ndim == 1:
        F = F[:, None]
    if F.shape[0] != triple.dim:
        raise DimensionMismatch(f"filters have {F.shape[0]} rows, triple is {triple.dim}-dimensional")
    C0F = triple.c0 @ F
    try:
        return solve_spd(symmetrize(F.T @ C0F), C0F.T).T
    except NotPositiveDefinite:
        raise SingularGram("amplitudes are linearly dependent") from None


def optimal_coefficients(u, v_set, triple: CorrelationTriple):
    """Coefficients ``a`` minimizing the cost for fixed ``u`` and ``v_j``.

    Solves ``sum_j a_j v_j^T C0 v_r = u^T C1 v_r`` for every ``r``.
    """
    u = np.asarray(u, dtype=float)
    V = np.column_stack([np.asarray(v, dtype=float) for v in v_set])
    gram = V.T @ triple.c0 @ V
    rhs = V.T @ triple.c1.T @ u
    try:
        a = solve_spd(gram, rhs)
    except NotPositiveDefinite:
        raise SingularGram("v vectors are linearly dependent in the C0 metric") from None
    if np.linalg.cond(gram) > 1e14:
        raise SingularGram("Gram matrix of the v vectors is numerically singular")
    return a


def evaluate_cost(point: CostPoint, triple: CorrelationTriple) -> float:
    """Relative least-squares residual of predicting ``qdot^T u`` by ``sum_j a_j q^T v_j``."""
    u = np.asarray(point.u, dtype=float)
    a = np.asarray(point.a, dtype=float)
    if len(point.v_set) != a.size:
        raise DimensionMismatch(f"{len(point.v_set)} vectors but {a.size} coefficients")
    tau = float(u @ triple.c2 @ u)
    if not tau > 0:
        raise DegenerateU(f"u^T C2 u = {tau} is not positive")
    if a.size == 0:
        return 1.0
    V = np.column_stack([np.asarray(v, dtype=float) for v in point.v_set])
    cross = (u @ triple.c1 @ V) @ a
    quad = a @ (V.T @ triple.c0 @ V) @ a
    return float(1.0 - 2.0 * cross / tau + quad / tau)


def fit_series(ts: TimeSeries, ridges=DEFAULT_RIDGES, remove_mean=False) -> DycaSpectrum:
    return fit(correlation_triple(central_difference(ts), remove_mean), ridges)


def _window_job(args):
    index, window, ridges, remove_mean = args
    try:
        spectrum = fit_series(window, ridges, remove_mean)
    except (DycaError, ValueError, np.linalg.LinAlgError) as exc:
        return WindowResult(index, window.t0, error=f"{type(exc).__name__}: {exc}")
    return WindowResult(index, window.t0, spectrum=spectrum)


def dyca_windows(ts: TimeSeries, wspec: WindowSpec, ridges=DEFAULT_RIDGES,
                 remove_mean=False, workers=None) -> List[WindowResult]:
    """Run DyCA independently on every window, ordered by window index.

    A window whose fit fails carries the error text instead of a spectrum.
    ``workers > 1`` uses a thread pool; output is identical to the serial run.
    """
    jobs = [(i, w, ridges, remove_mean) for i, w in enumerate(windows(ts, wspec))]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_window_job, jobs))
    return [_window_job(job) for job in jobs]
