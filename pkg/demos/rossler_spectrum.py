"""
Windowed DyCA spectrum of a noisy Rössler embedding
===================================================

The Rössler system has two linear equations and one nonlinear one, so
DyCA should find two generalized eigenvalues at one and a third one well
below.  We embed a trajectory into 25 sensors, add 15 dB multiplicative
noise and look at the top three eigenvalues in 1000-sample windows --
first on the raw signal, then after a zero-phase low-pass prefilter.

Run with ``python3 demos/rossler_spectrum.py [out_dir]``; the per-window
spectra are written as CSV for plotting.
"""
import os
import sys

import numpy as np

from dyca import dynsys
from dyca.core import dyca_windows
from dyca.io import write_spectra_csv
from dyca.signal import BandpassSpec, WindowSpec, bandpass_zero_phase

out_dir = sys.argv[1] if len(sys.argv) > 1 else "demo_output"
os.makedirs(out_dir, exist_ok=True)

# 500 time units after a transient of 100, sampled every 0.05
latent = dynsys.simulate_rossler()
spec = dynsys.EmbeddingSpec(target_dim=25, mixing_seed=0, snr_db=15.0)
q = dynsys.embed(latent, spec, noise_seed=0)
print(f"embedded signal: {q.channels} channels x {q.samples} samples")

# %%
# Raw signal.  Central differences amplify the white sensor noise, so
# the derivative correlation C2 is dominated by noise and every
# eigenvalue is pulled down.
raw = dyca_windows(q, WindowSpec(1000))
write_spectra_csv(raw, 3, os.path.join(out_dir, "spectra_raw.csv"))
lam = np.array([r.spectrum.top(3) for r in raw])
print("raw       median top-3:", np.median(lam, axis=0).round(3))

# %%
# Prefiltered.  The attractor lives below ~0.5 Hz at this 20 Hz sample
# rate; a 0.01-1 Hz zero-phase Butterworth band keeps it intact and
# removes most of the noise before differentiating.
filtered = bandpass_zero_phase(q, BandpassSpec(0.01, 1.0, 4))
clean = dyca_windows(filtered, WindowSpec(1000))
write_spectra_csv(clean, 3, os.path.join(out_dir, "spectra_filtered.csv"))
lam = np.array([r.spectrum.top(3) for r in clean])
print("filtered  median top-3:", np.median(lam, axis=0).round(3))
both = np.mean((lam[:, 0] >= 0.99) & (lam[:, 1] >= 0.99))
print(f"windows with lambda_1, lambda_2 >= 0.99 after filtering: {both:.0%}")
