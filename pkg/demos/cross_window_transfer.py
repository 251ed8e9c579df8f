"""
Reusing a projection on another window
======================================

A DyCA basis fitted on one stretch of data is a fixed linear map, so it
can be applied to any other stretch.  If the dynamics are stationary the
transferred amplitudes should still trace the attractor.
"""
from dyca import dynsys
from dyca.core import build_projection, fit, project
from dyca.linalg import canonical_correlations
from dyca.signal import (
    BandpassSpec,
    WindowSpec,
    bandpass_zero_phase,
    central_difference,
    correlation_triple,
    windows,
)

latent = dynsys.simulate_rossler()
q = dynsys.embed(latent, dynsys.EmbeddingSpec(target_dim=25, snr_db=15.0), noise_seed=0)
q = bandpass_zero_phase(q, BandpassSpec(0.01, 1.0))

spec = WindowSpec(1000)
source, *targets = windows(q, spec)
truths = windows(latent, spec)[1:]

triple = correlation_triple(central_difference(source))
proj = build_projection(fit(triple), triple, threshold=0.95)
print(f"basis fitted on window 0: m = {proj.m}, n = {proj.n}")

for i, (target, truth) in enumerate(zip(targets, truths), start=1):
    cc = canonical_correlations(project(target, proj).series.data, truth.data)
    print(f"window {i}: canonical correlations {cc.round(4)}")
