"""Dynamical Component Analysis (DyCA) for multivariate deterministic time series."""
from dyca.core import (
    CostPoint,
    DycaAmplitudes,
    DycaProjection,
    DycaSpectrum,
    WindowResult,
    build_projection,
    derive_v,
    dyca_windows,
    evaluate_cost,
    fit,
    fit_series,
    optimal_coefficients,
    patterns,
    project,
)
from dyca.signal import (
    BandpassSpec,
    CorrelationTriple,
    DerivativePair,
    TimeSeries,
    WindowSpec,
    bandpass_zero_phase,
    central_difference,
    correlation_triple,
    windows,
)

__version__ = "0.1.0"
