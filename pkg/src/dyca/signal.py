"""
Time series container, derivative and correlation estimation, windowing
and zero-phase bandpass filtering.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import scipy.signal

from dyca.exceptions import InvalidBand, TooShort, WindowTooLong
from dyca.linalg import symmetrize


def _readonly(a):
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Multichannel uniformly sampled signal.

    Parameters
    ----------
    data : array_like, shape (channels, samples)
    dt : float
        Sample interval in seconds.
    labels : sequence of str, optional
        Channel names; ``ch1..chN`` when omitted.
    t0 : float
        Time of the first sample.
    """

    data: np.ndarray
    dt: float = 1.0
    labels: Sequence[str] = field(default=None)
    t0: float = 0.0

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim == 1:
            data = data[None, :]
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError(f"data must be (channels, samples) with both >= 1, got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("data has non-finite entries")
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ValueError("dt must be finite and positive")
        labels = self.labels
        if labels is None:
            labels = [f"ch{i + 1}" for i in range(data.shape[0])]
        labels = tuple(str(s) for s in labels)
        if len(labels) != data.shape[0]:
            raise ValueError(f"{len(labels)} labels for {data.shape[0]} channels")
        object.__setattr__(self, "data", _readonly(data))
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def channels(self):
        return self.data.shape[0]

    @property
    def samples(self):
        return self.data.shape[1]

    @property
    def sample_rate(self):
        return 1.0 / self.dt

    @property
    def times(self):
        return self.t0 + self.dt * np.arange(self.samples)

    def with_data(self, data, labels=None):
        """Same timing, new data (and optionally new labels)."""
        return TimeSeries(data, self.dt, self.labels if labels is None else labels, self.t0)

    def slice(self, start, stop):
        return TimeSeries(self.data[:, start:stop], self.dt, self.labels, self.t0 + start * self.dt)


@dataclass(frozen=True, eq=False)
class DerivativePair:
    """Interior samples ``q`` and their central-difference derivative ``qdot``."""

    q: np.ndarray
    qdot: np.ndarray
    dt: float

    def __post_init__(self):
        if np.shape(self.q) != np.shape(self.qdot):
            raise ValueError("q and qdot must have identical shape")
        object.__setattr__(self, "q", _readonly(self.q))
        object.__setattr__(self, "qdot", _readonly(self.qdot))


@dataclass(frozen=True, eq=False)
class CorrelationTriple:
    """Time-averaged second moments ``<q q^T>``, ``<qdot q^T>``, ``<qdot qdot^T>``.

    ``c0`` and ``c2`` are symmetrized on construction.
    """

    c0: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    sample_count: int = 0

    def __post_init__(self):
        shapes = {np.shape(self.c0), np.shape(self.c1), np.shape(self.c2)}
        if len(shapes) != 1:
            raise ValueError(f"correlation matrices disagree in shape: {shapes}")
        (shape,) = shapes
        if len(shape) != 2 or shape[0] != shape[1] or shape[0] < 1:
            raise ValueError(f"correlation matrices must be square, got {shape}")
        object.__setattr__(self, "c0", _readonly(symmetrize(self.c0)))
        object.__setattr__(self, "c1", _readonly(self.c1))
        object.__setattr__(self, "c2", _readonly(symmetrize(self.c2)))

    @property
    def dim(self):
        return self.c0.shape[0]

    def transformed(self, T):
        """Triple of the signal ``T q`` (congruence by ``T``)."""
        T = np.asarray(T, dtype=float)
        return CorrelationTriple(T @ self.c0 @ T.T, T @ self.c1 @ T.T, T @ self.c2 @ T.T,
                                 self.sample_count)


@dataclass(frozen=True)
class WindowSpec:
    length: int
    hop: Optional[int] = None

    def __post_init__(self):
        hop = self.length if self.hop is None else self.hop
        if int(self.length) != self.length or self.length < 3:
            raise ValueError("window length must be an integer >= 3 samples")
        if int(hop) != hop or hop < 1:
            raise ValueError("hop must be an integer >= 1 sample")
        object.__setattr__(self, "length", int(self.length))
        object.__setattr__(self, "hop", int(hop))


@dataclass(frozen=True)
class BandpassSpec:
    low_hz: float
    high_hz: float
    order: int = 4

    def __post_init__(self):
        if not (self.low_hz > 0 and self.high_hz > self.low_hz):
            raise InvalidBand(f"need 0 < low < high, got {self.low_hz}, {self.high_hz}")
        if int(self.order) != self.order or self.order < 2 or self.order % 2:
            raise ValueError("filter order must be a positive even integer")

    def check(self, dt):
        nyquist = 0.5 / dt
        if self.high_hz >= nyquist:
            raise InvalidBand(f"high cut-off {self.high_hz} Hz is not below Nyquist {nyquist} Hz")


def central_difference(ts: TimeSeries) -> DerivativePair:
    """Second-order central differences; the two endpoints are dropped."""
    if ts.samples < 3:
        raise TooShort(f"need at least 3 samples, got {ts.samples}")
    x = ts.data
    qdot = (x[:, 2:] - x[:, :-2]) / (2.0 * ts.dt)
    return DerivativePair(x[:, 1:-1], qdot, ts.dt)


def correlation_triple(pair: DerivativePair, remove_mean=False) -> CorrelationTriple:
    """Plain time averages over the aligned samples.

    With ``remove_mean`` the per-channel means of ``q`` and ``qdot`` are
    subtracted first; the default keeps raw second moments.
    """
    q, qdot = pair.q, pair.qdot
    K = q.shape[1]
    if K < 1:
        raise TooShort("derivative pair is empty")
    if remove_mean:
        q = q - q.mean(axis=1, keepdims=True)
        qdot = qdot - qdot.mean(axis=1, keepdims=True)
    return CorrelationTriple(q @ q.T / K, qdot @ q.T / K, qdot @ qdot.T / K, K)


def windows(ts: TimeSeries, spec: WindowSpec) -> List[TimeSeries]:
    """Full-length windows starting at ``0, hop, 2*hop, ...``; partial tails are dropped."""
    if spec.length > ts.samples:
        raise WindowTooLong(f"window of {spec.length} samples exceeds series of {ts.samples}")
    starts = range(0, ts.samples - spec.length + 1, spec.hop)
    return [ts.slice(s, s + spec.length) for s in starts]


def bandpass_zero_phase(ts: TimeSeries, spec: BandpassSpec) -> TimeSeries:
    """Zero-phase Butterworth bandpass.

    The filter is designed as second-order sections and run forward-backward
    with odd reflection padding of ``3 * order`` samples.  The result is the
    average of the forward-backward and the backward-forward passes, which
    makes the operation commute exactly with time reversal.
    """
    spec.check(ts.dt)
    padlen = 3 * spec.order
    if ts.samples <= padlen:
        raise TooShort(f"need more than {padlen} samples to filter, got {ts.samples}")
    sos = scipy.signal.butter(spec.order, [spec.low_hz, spec.high_hz], btype="bandpass",
                              fs=ts.sample_rate, output="sos")

    def fb(x):
        return scipy.signal.sosfiltfilt(sos, x, axis=1, padtype="odd", padlen=padlen)

    x = ts.data
    y = 0.5 * (fb(x) + fb(x[:, ::-1])[:, ::-1])
    return ts.with_data(y)
