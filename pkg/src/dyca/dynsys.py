"""
Synthetic ground truth: the Rössler system, a harmonic oscillator, and a
noisy linear embedding into many sensor channels.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from dyca.exceptions import DimensionMismatch, StepFailure
from dyca.signal import TimeSeries


@dataclass(frozen=True)
class RosslerParams:
    a: float = 0.15
    b: float = 0.2
    c: float = 10.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c)):
            raise ValueError("Rössler parameters must be finite")


@dataclass(frozen=True)
class IntegrationSpec:
    t_start: float = 0.0
    t_end: float = 600.0
    dt_sample: float = 0.05
    transient: float = 100.0
    abs_tol: float = 1e-9
    rel_tol: float = 1e-6
    initial_state: Tuple[float, ...] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if not self.dt_sample > 0:
            raise ValueError("dt_sample must be positive")
        if self.transient < 0:
            raise ValueError("transient must be non-negative")
        if not self.t_end > self.t_start + self.transient:
            raise ValueError("t_end must exceed t_start + transient")

    def sample_times(self):
        first = self.t_start + self.transient
        count = int(math.floor((self.t_end - first) / self.dt_sample + 1e-9)) + 1
        return first + self.dt_sample * np.arange(count)


def rossler_rhs(state, params=RosslerParams()):
    x1, x2, x3 = state
    return np.array([
        -x2 - x3,
        x1 + params.a * x2,
        params.b - params.c * x3 + x1 * x2,
    ])


def simulate_rossler(params=RosslerParams(), spec=IntegrationSpec()) -> TimeSeries:
    """Integrate the Rössler system with adaptive Dormand-Prince (4,5).

    Dense output is sampled on a uniform grid that starts after the
    transient.  Deterministic for a fixed spec.
    """
    if len(spec.initial_state) != 3:
        raise ValueError("Rössler initial state needs 3 components")
    t = spec.sample_times()
    sol = solve_ivp(lambda _, x: rossler_rhs(x, params), (spec.t_start, t[-1]),
                    np.asarray(spec.initial_state, dtype=float), method="RK45",
                    dense_output=True, rtol=spec.rel_tol, atol=spec.abs_tol)
    if not sol.success:
        raise StepFailure(sol.message)
    return TimeSeries(sol.sol(t), spec.dt_sample, ("x1", "x2", "x3"), t[0])


def simulate_linear_oscillator(omega, spec=IntegrationSpec(t_end=200.0, transient=0.0)) -> TimeSeries:
    """Closed-form samples of ``x1' = x2, x2' = -omega^2 x1``."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    if len(spec.initial_state) < 2:
        raise ValueError("oscillator initial state needs 2 components")
    x10, x20 = spec.initial_state[:2]
    t = spec.sample_times()
    tau = omega * (t - spec.t_start)
    c, s = np.cos(tau), np.sin(tau)
    x1 = x10 * c + (x20 / omega) * s
    x2 = -x10 * omega * s + x20 * c
    return TimeSeries(np.vstack([x1, x2]), spec.dt_sample, ("x1", "x2"), t[0])


@dataclass(frozen=True)
class EmbeddingSpec:
    """Linear sensor embedding ``q = W x`` plus Gaussian noise.

    ``snr_db`` is an amplitude ratio in dB, so the relative noise level is
    ``10 ** (-snr_db / 20)``; ``inf`` disables noise.  Multiplicative noise
    scales every sample by ``1 + eta``; additive noise is scaled by the
    channel's RMS.
    """

    target_dim: int = 25
    mixing_seed: int = 0
    snr_db: float = 15.0
    noise: str = "multiplicative"
    identity_mixing: bool = False

    def __post_init__(self):
        if self.noise not in ("multiplicative", "additive"):
            raise ValueError(f"unknown noise model {self.noise!r}")
        if int(self.target_dim) != self.target_dim or self.target_dim < 1:
            raise ValueError("target_dim must be a positive integer")

    @property
    def relative_noise(self):
        return 0.0 if self.snr_db == math.inf else 10.0 ** (-self.snr_db / 20.0)


def mixing_matrix(spec: EmbeddingSpec, n: int) -> np.ndarray:
    """The ``(target_dim, n)`` mixing matrix of ``spec``; full column rank."""
    N = spec.target_dim
    if N < n:
        raise DimensionMismatch(f"cannot embed {n} channels into {N}")
    if spec.identity_mixing:
        if N != n:
            raise DimensionMismatch("identity mixing needs target_dim == channels")
        return np.eye(n)
    rng = np.random.default_rng(spec.mixing_seed)
    while True:
        W = rng.standard_normal((N, n))
        if np.linalg.matrix_rank(W) == n:
            return W


def embed(ts: TimeSeries, spec: EmbeddingSpec, noise_seed=0,
          mixing: Optional[np.ndarray] = None) -> TimeSeries:
    """Mix ``ts`` into ``spec.target_dim`` sensors and add noise."""
    W = mixing_matrix(spec, ts.channels) if mixing is None else np.asarray(mixing, dtype=float)
    if W.shape != (spec.target_dim, ts.channels):
        raise DimensionMismatch(f"mixing matrix has shape {W.shape}")
    clean = W @ ts.data
    sigma = spec.relative_noise
    out = clean
    if sigma > 0:
        rng = np.random.default_rng(noise_seed)
        eta = rng.standard_normal(clean.shape)
        if spec.noise == "multiplicative":
            out = clean * (1.0 + sigma * eta)
        else:
            rms = np.sqrt(np.mean(clean ** 2, axis=1, keepdims=True))
            out = clean + sigma * rms * eta
    labels = [f"s{i + 1}" for i in range(spec.target_dim)]
    return ts.with_data(out, labels)
