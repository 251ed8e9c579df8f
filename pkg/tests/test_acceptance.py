"""End-to-end acceptance criteria, each checked at its stated tolerance.

Every test records one ``PASS``/``FAIL`` line that is printed in the
"acceptance criteria" section of the pytest summary.
"""
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, random_spd
from dyca import dynsys
from dyca.baselines import pca
from dyca.cli import main
from dyca.core import (
    build_projection,
    derive_v,
    dyca_windows,
    evaluate_cost,
    fit,
    optimal_coefficients,
    patterns,
    project,
    CostPoint,
)
from dyca.exceptions import DycaError
from dyca.io import read_matrix_csv, write_matrix_csv
from dyca.linalg import canonical_correlations, gen_sym_eig, subspace_angles
from dyca.signal import (
    BandpassSpec,
    TimeSeries,
    WindowSpec,
    bandpass_zero_phase,
    central_difference,
    correlation_triple,
    windows,
)


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def rossler_triple(rossler_embedding):
    q, _ = rossler_embedding
    return correlation_triple(central_difference(q))


def test_01_rossler_window_spectrum(rossler_embedding):
    q, _ = rossler_embedding
    start = time.perf_counter()
    results = dyca_windows(q, WindowSpec(1000))
    elapsed = time.perf_counter() - start
    lam = np.array([r.spectrum.top(3) for r in results if r.ok])
    frac = np.mean((lam[:, 0] >= 0.99) & (lam[:, 1] >= 0.99)) if lam.size else 0.0
    median3 = float(np.median(lam[:, 2])) if lam.size else math.nan
    ok = len(lam) == len(results) and frac >= 0.9 and median3 <= 0.5 and elapsed <= 60
    report(1, "Rossler windowed spectrum", ok,
           f"{len(results)} windows, lambda1,2>=0.99 in {frac:.0%} (need 90%), "
           f"median lambda1={np.median(lam[:, 0]):.3f} lambda2={np.median(lam[:, 1]):.3f} "
           f"lambda3={median3:.3f} (need <=0.5), {elapsed:.1f}s")


def test_02_subspace_dimension(rossler_triple):
    spectrum = fit(rossler_triple)
    try:
        proj = build_projection(spectrum, rossler_triple, threshold=0.95)
        m, n = proj.m, proj.n
    except DycaError as exc:
        m = n = None
        detail = f"{type(exc).__name__}"
    else:
        detail = f"m={m}, n={n}"
    report(2, "subspace dimension m=2, n=3", (m, n) == (2, 3),
           f"{detail}; top eigenvalues {np.round(spectrum.values[:3], 4).tolist()}")


def _cost_gap(triple):
    spectrum = fit(triple)
    worst = 0.0
    for lam, u in zip(spectrum.values, spectrum.vectors.T):
        v = derive_v(u, triple, spectrum.ridge_used)
        a = optimal_coefficients(u, [v], triple)
        worst = max(worst, abs(evaluate_cost(CostPoint(u, [v], a), triple) - (1 - lam)))
    return worst


def test_03_minimum_cost_identity(rossler_triple):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(3, 10))
        x = rng.standard_normal((n, 600)).cumsum(axis=1) * 0.05 + rng.standard_normal((n, 600))
        worst = max(worst, _cost_gap(correlation_triple(central_difference(TimeSeries(x, 0.1)))))
    worst_rossler = _cost_gap(rossler_triple)
    report(3, "minimum cost equals 1 - lambda", max(worst, worst_rossler) <= 1e-8,
           f"max gap random={worst:.2e}, Rossler={worst_rossler:.2e} (tol 1e-8)")


def test_04_eigensolver_oracle():
    rng = np.random.default_rng(4)
    worst_val = worst_res = worst_norm = 0.0
    ordered = True
    for trial in range(100):
        n = 1 + trial % 25
        G = rng.standard_normal((n, n))
        A, B = G @ G.T, random_spd(rng, n)
        res = gen_sym_eig(A, B)
        brute = np.sort(np.linalg.eigvals(np.linalg.solve(B, A)).real)[::-1]
        worst_val = max(worst_val, np.abs(res.values - brute).max())
        U = res.vectors
        scale = np.linalg.norm(A) + np.linalg.norm(B)
        resid = np.linalg.norm(A @ U - B @ U * res.values, axis=0) / (scale * np.linalg.norm(U, axis=0))
        worst_res = max(worst_res, resid.max())
        worst_norm = max(worst_norm, np.abs(U.T @ B @ U - np.eye(n)).max())
        ordered &= bool(np.all(np.diff(res.values) <= 0))
    ok = worst_val <= 1e-8 and worst_res <= 1e-8 and worst_norm <= 1e-8 and ordered
    report(4, "generalized eigensolver vs brute force", ok,
           f"max |dlambda|={worst_val:.1e}, residual={worst_res:.1e}, "
           f"B-orthonormality={worst_norm:.1e}, descending={ordered}")


def test_05_linear_oscillator():
    spec = dynsys.IntegrationSpec(t_end=300.0, transient=0.0, dt_sample=0.05, initial_state=(1.0, 0.0))
    latent = dynsys.simulate_linear_oscillator(1.3, spec)
    emb = dynsys.EmbeddingSpec(target_dim=10, mixing_seed=0, snr_db=100.0)
    q = dynsys.embed(latent, emb, noise_seed=0)
    W = dynsys.mixing_matrix(emb, 2)
    triple = correlation_triple(central_difference(q))
    spectrum = fit(triple)
    U = spectrum.vectors[:, :2]
    # the 2-d projection q -> A U^T q with A the least-squares patterns;
    # its range is compared with the mixing span
    angles = subspace_angles(patterns(U, triple), W)
    filter_angles = subspace_angles(U, W)
    ok = np.all(spectrum.values[:2] >= 0.999) and angles.max() <= 0.05
    report(5, "linear oscillator ground truth", ok,
           f"top-2 lambda={spectrum.values[:2].round(6).tolist()}, projection-range angles="
           f"{angles.max():.1e} rad (tol 0.05); raw filter span angles={filter_angles.round(3).tolist()}")


def test_06_amplitude_recovery(rossler, rossler_embedding, rossler_triple):
    q, _ = rossler_embedding
    pca_cc = canonical_correlations(pca(q, 3).transform(q).data, rossler.data)
    try:
        proj = build_projection(fit(rossler_triple), rossler_triple, threshold=0.95)
    except DycaError as exc:
        report(6, "amplitude recovery at 15 dB", False,
               f"{type(exc).__name__} at threshold 0.95; PCA CC={pca_cc.round(4).tolist()}")
        return
    cc = canonical_correlations(project(q, proj).series.data, rossler.data)
    ok = cc.min() >= 0.9 and pca_cc.min() < cc.min()
    report(6, "amplitude recovery at 15 dB", ok,
           f"DyCA CC={cc.round(4).tolist()}, PCA CC={pca_cc.round(4).tolist()}")


def test_07_invariance(rossler_embedding, rossler_triple):
    q, _ = rossler_embedding
    base = fit(rossler_triple).values
    rng = np.random.default_rng(7)
    worst_spec = worst_cong = 0.0
    for _ in range(20):
        T = rng.standard_normal((25, 25))
        moved = correlation_triple(central_difference(q.with_data(T @ q.data)))
        worst_spec = max(worst_spec, np.abs(fit(moved).values - base).max())
        expected = rossler_triple.transformed(T)
        for got, want in ((moved.c0, expected.c0), (moved.c1, expected.c1), (moved.c2, expected.c2)):
            worst_cong = max(worst_cong, np.linalg.norm(got - want) / np.linalg.norm(want))
    report(7, "invariance under sensor transforms", worst_spec <= 1e-6 and worst_cong <= 1e-10,
           f"max spectrum change={worst_spec:.1e} (tol 1e-6), congruence={worst_cong:.1e} (tol 1e-10)")


def test_08_zero_phase_filter():
    fs = 256.0
    t = np.arange(0, 10, 1 / fs)
    band = BandpassSpec(0.5, 30.0, 4)
    inner = slice(int(fs), -int(fs))

    def through(freq):
        x = np.sin(2 * np.pi * freq * t + 0.3)
        return x, bandpass_zero_phase(TimeSeries(x, 1 / fs), band).data[0]

    x, y = through(10.0)
    gain = np.std(y[inner]) / np.std(x[inner])
    lags = np.arange(-20, 21)
    lag = lags[int(np.argmax([np.dot(np.roll(y, k)[inner], x[inner]) for k in lags]))]
    x60, y60 = through(60.0)
    atten = 20 * np.log10(np.std(y60[inner]) / np.std(x60[inner]))
    ok = abs(gain - 1) <= 0.05 and lag == 0 and atten <= -20
    report(8, "zero-phase bandpass", ok,
           f"10 Hz gain={gain:.4f}, lag={lag} samples, 60 Hz attenuation={atten:.1f} dB")


def test_09_cross_window_transfer(rossler, rossler_embedding):
    q, _ = rossler_embedding
    spec = WindowSpec(1000)
    source, target = windows(q, spec)[:2]
    truth = windows(rossler, spec)[1]
    triple = correlation_triple(central_difference(source))
    try:
        proj = build_projection(fit(triple), triple, threshold=0.95)
    except DycaError as exc:
        report(9, "cross-window transfer", False,
               f"{type(exc).__name__} at threshold 0.95 on the source window "
               f"(lambda={fit(triple).values[:3].round(3).tolist()})")
        return
    cc = canonical_correlations(project(target, proj).series.data, truth.data)
    report(9, "cross-window transfer", cc.min() >= 0.9, f"target CC={cc.round(4).tolist()}")


def test_10_determinism_and_format_closure(tmp_path, rossler_embedding):
    def pipeline(out):
        out.mkdir()
        argv = [
            ["simulate-rossler", "--out", out / "r.csv", "--t-end", 200],
            ["embed", "--in", out / "r.csv", "--out", out / "q.csv", "--snr-db", 40, "--noise-seed", 1],
            ["fit", "--in", out / "q.csv", "--out-basis", out / "b.csv",
             "--out-amplitudes", out / "a.csv", "--out-spectrum", out / "l.csv"],
            ["project", "--in", out / "q.csv", "--basis", out / "b.csv", "--out", out / "p.csv"],
            ["pca", "--in", out / "q.csv", "--out", out / "pca.csv", "--out-components", out / "w.csv"],
            ["ica", "--in", out / "q.csv", "--out", out / "ica.csv", "--seed", 2],
            ["filter", "--in", out / "q.csv", "--sample-rate", 20, "--low", 0.01, "--high", 1,
             "--out", out / "f.csv"],
            ["windows", "--in", out / "q.csv", "--out-spectra", out / "s.csv"],
            ["compare", "--in", out / "q.csv", "--truth", out / "r.csv", "--out-dir", out / "cmp"],
        ]
        codes = [main([str(a) for a in args]) for args in argv]
        return codes, {p.relative_to(out): p.read_bytes() for p in sorted(out.rglob("*.csv"))}

    codes_a, first = pipeline(tmp_path / "a")
    codes_b, second = pipeline(tmp_path / "b")
    identical = first == second
    worst_ulps = 0.0
    for rel in first:
        labels, rows = read_matrix_csv(tmp_path / "a" / rel, allow_nan=True)
        write_matrix_csv(tmp_path / "rewrite.csv", labels, rows)
        again = read_matrix_csv(tmp_path / "rewrite.csv", allow_nan=True)[1]
        finite = np.isfinite(rows)
        diff = np.abs(again[finite] - rows[finite]) / np.spacing(np.abs(rows[finite]))
        worst_ulps = max(worst_ulps, float(diff.max(initial=0.0)))
    ok = codes_a == codes_b == [0] * len(codes_a) and identical and worst_ulps <= 1
    report(10, "determinism and CSV closure", ok,
           f"{len(first)} CSV files, exit codes {sorted(set(codes_a))}, byte-identical={identical}, "
           f"max round-trip error={worst_ulps:.0f} ulp")
