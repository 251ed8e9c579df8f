"""
CSV and configuration file formats.

Time series CSV: a header row of channel labels, then one row per sample.
Floats are written with 17 significant digits so doubles round-trip
exactly; lines end with LF.  Config files hold ``key = value`` lines with
``#`` comments.
"""
import csv
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from dyca.exceptions import BadValue, NonFinite, ParseError, RaggedRows, UnknownKey
from dyca.signal import BandpassSpec, TimeSeries, WindowSpec


def format_float(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def read_matrix_csv(path, allow_nan=False) -> Tuple[Tuple[str, ...], np.ndarray]:
    """Parse a headed numeric CSV; returns ``(labels, rows)`` with rows as a 2-d array.

    ``nan`` entries (failed windows, padding) are accepted only with
    ``allow_nan``; infinities are always rejected.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("file is empty", 1) from None
        except csv.Error as exc:
            raise ParseError(str(exc), 1) from None
        if not header or all(not h.strip() for h in header):
            raise ParseError("header row has no labels", 1)
        rows = []
        line = 1
        while True:
            try:
                row = next(reader)
            except StopIteration:
                break
            except csv.Error as exc:
                raise ParseError(str(exc), reader.line_num) from None
            line = reader.line_num
            if not row:
                continue
            if len(row) != len(header):
                raise RaggedRows(f"expected {len(header)} fields, found {len(row)}", line)
            try:
                values = [float(v) for v in row]
            except ValueError as exc:
                raise ParseError(str(exc), line) from None
            if not all(math.isfinite(v) or (allow_nan and math.isnan(v)) for v in values):
                raise NonFinite("non-finite value", line)
            rows.append(values)
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return tuple(header), data


def write_matrix_csv(path, labels: Sequence[str], rows) -> None:
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != len(labels) or len(labels) == 0:
        raise ValueError(f"{len(labels)} labels for rows of shape {rows.shape}")
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(labels)
        for row in rows:
            w.writerow([format_float(v) for v in row])


def read_timeseries_csv(path, sample_rate_hz=1.0) -> TimeSeries:
    if not sample_rate_hz > 0:
        raise ValueError("sample rate must be positive")
    labels, rows = read_matrix_csv(path)
    if rows.shape[0] == 0:
        raise ParseError("no samples", 2)
    return TimeSeries(rows.T, 1.0 / sample_rate_hz, labels)


def write_timeseries_csv(ts: TimeSeries, path) -> None:
    if ts.channels == 0:
        raise ValueError("cannot write a series without channels")
    write_matrix_csv(path, ts.labels, ts.data.T)


def write_spectra_csv(results, top_k, path) -> None:
    """One row per window: index, start time and the ``top_k`` largest eigenvalues.

    ``results`` are :class:`dyca.core.WindowResult`; failed windows get ``nan``.
    """
    if int(top_k) != top_k or top_k < 1:
        raise ValueError("top_k must be a positive integer")
    header = ["window", "t_start_s"] + [f"lambda_{i + 1}" for i in range(top_k)]
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(header)
        for r in results:
            values = r.spectrum.top(top_k) if r.spectrum is not None else np.full(top_k, np.nan)
            w.writerow([str(r.index), format_float(r.t_start)] + [format_float(v) for v in values])


def write_spectrum_csv(spectrum, path) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["component", "lambda"])
        for i, v in enumerate(spectrum.values):
            w.writerow([str(i + 1), format_float(v)])


@dataclass(frozen=True)
class RunConfig:
    sample_rate_hz: float = 256.0
    window_seconds: float = 1.0
    hop_seconds: Optional[float] = None  # defaults to window_seconds
    threshold: float = 0.95
    ridge: float = 0.0
    bandpass_low_hz: Optional[float] = None
    bandpass_high_hz: Optional[float] = None
    bandpass_order: int = 4
    remove_mean: bool = False
    mixing_seed: int = 0
    noise_seed: int = 0

    def __post_init__(self):
        for key in ("sample_rate_hz", "window_seconds"):
            if not getattr(self, key) > 0:
                raise BadValue(key, "must be positive")
        if self.hop_seconds is not None and not self.hop_seconds > 0:
            raise BadValue("hop_seconds", "must be positive")
        if not 0 < self.threshold <= 1:
            raise BadValue("threshold", "must lie in (0, 1]")
        if not self.ridge >= 0:
            raise BadValue("ridge", "must be non-negative")
        if (self.bandpass_low_hz is None) != (self.bandpass_high_hz is None):
            raise BadValue("bandpass_low_hz", "set both bandpass_low_hz and bandpass_high_hz")
        if self.bandpass_order < 2 or self.bandpass_order % 2:
            raise BadValue("bandpass_order", "must be a positive even integer")

    def window_spec(self) -> WindowSpec:
        length = int(round(self.window_seconds * self.sample_rate_hz))
        hop_s = self.window_seconds if self.hop_seconds is None else self.hop_seconds
        hop = max(1, int(round(hop_s * self.sample_rate_hz)))
        return WindowSpec(length, hop)

    def bandpass(self) -> Optional[BandpassSpec]:
        if self.bandpass_low_hz is None:
            return None
        return BandpassSpec(self.bandpass_low_hz, self.bandpass_high_hz, self.bandpass_order)

    def ridges(self):
        return tuple(r for r in (self.ridge, 1e-10, 1e-8) if r >= self.ridge)


_FIELD_TYPES = {
    "sample_rate_hz": float, "window_seconds": float, "hop_seconds": float,
    "threshold": float, "ridge": float, "bandpass_low_hz": float,
    "bandpass_high_hz": float, "bandpass_order": int, "remove_mean": bool,
    "mixing_seed": int, "noise_seed": int,
}


def _parse_value(key, text):
    kind = _FIELD_TYPES[key]
    if kind is bool:
        lowered = text.lower()
        if lowered in ("true", "yes", "1", "on"):
            return True
        if lowered in ("false", "no", "0", "off"):
            return False
        raise BadValue(key, f"expected a boolean, got {text!r}")
    try:
        value = kind(text)
    except ValueError:
        raise BadValue(key, f"expected {kind.__name__}, got {text!r}") from None
    if kind is float and not math.isfinite(value):
        raise BadValue(key, "must be finite")
    return value


def read_config(path) -> RunConfig:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
            key, text = (s.strip() for s in line.split("=", 1))
            if key not in _FIELD_TYPES:
                raise UnknownKey(key)
            values[key] = _parse_value(key, text)
    try:
        return replace(RunConfig(), **values)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, BadValue):
            raise
        raise BadValue("config", str(exc)) from None
