import numpy as np
import pytest

from dyca.baselines import fastica, pca
from dyca.exceptions import KTooLarge
from dyca.linalg import canonical_correlations, principal_angles
from dyca.signal import TimeSeries


class TestPca:
    def test_points_on_a_line(self, rng):
        t = rng.standard_normal(200)
        ts = TimeSeries(np.vstack([t, 2 * t, -t]))
        res = pca(ts, 1)
        direction = np.array([1.0, 2.0, -1.0]) / np.sqrt(6)
        assert abs(res.components[:, 0] @ direction) == pytest.approx(1.0, abs=1e-12)

    def test_isotropic_variances(self):
        x = np.random.default_rng(3).standard_normal((4, 100_000))
        res = pca(TimeSeries(x), 4)
        np.testing.assert_allclose(res.variances, 1.0, atol=0.05)

    def test_lossless_at_full_rank(self, rng):
        ts = TimeSeries(rng.standard_normal((5, 80)) + 3.0)
        res = pca(ts, 5)
        back = res.reconstruct(res.transform(ts).data)
        np.testing.assert_allclose(back, ts.data, atol=1e-10)

    def test_variance_sum_equals_trace(self, rng):
        ts = TimeSeries(rng.standard_normal((6, 300)) * np.arange(1, 7)[:, None])
        X = ts.data - ts.data.mean(axis=1, keepdims=True)
        assert pca(ts, 6).variances.sum() == pytest.approx(np.trace(X @ X.T) / ts.samples)

    def test_rotation_covariance(self, rng):
        ts = TimeSeries(rng.standard_normal((4, 500)) * np.array([4.0, 3.0, 2.0, 1.0])[:, None])
        Q = np.linalg.qr(rng.standard_normal((4, 4)))[0]
        a = pca(ts, 2).components
        b = pca(ts.with_data(Q @ ts.data), 2).components
        assert principal_angles(Q @ a, b).max() <= 1e-8

    def test_scores_uncorrelated(self, rng):
        ts = TimeSeries(rng.standard_normal((3, 3)) @ rng.standard_normal((3, 1000)))
        scores = pca(ts, 3).transform(ts)
        cov = scores.data @ scores.data.T / ts.samples
        np.testing.assert_allclose(cov - np.diag(np.diag(cov)), 0.0, atol=1e-10)
        assert scores.labels == ("pca_1", "pca_2", "pca_3")

    def test_k_too_large(self, rng):
        with pytest.raises(KTooLarge):
            pca(TimeSeries(rng.standard_normal((3, 50))), 4)


class TestFastIca:
    @pytest.fixture
    def mixed_uniform(self):
        rng = np.random.default_rng(11)
        S = rng.uniform(-1, 1, (3, 5000))
        A = rng.standard_normal((3, 3))
        return S, TimeSeries(A @ S)

    def test_recovers_independent_sources(self, mixed_uniform):
        S, ts = mixed_uniform
        res = fastica(ts, 3, seed=0)
        assert res.converged
        # every true source is matched by some estimate up to sign and scale
        corr = np.abs(np.corrcoef(np.vstack([S, res.sources.data]))[:3, 3:])
        assert np.all(corr.max(axis=1) >= 0.95)

    def test_sources_are_white(self, mixed_uniform):
        _, ts = mixed_uniform
        Y = fastica(ts, 3).sources.data
        Y = Y - Y.mean(axis=1, keepdims=True)
        np.testing.assert_allclose(Y @ Y.T / Y.shape[1], np.eye(3), atol=0.05)

    def test_deterministic_for_seed(self, mixed_uniform):
        _, ts = mixed_uniform
        a, b = fastica(ts, 3, seed=4), fastica(ts, 3, seed=4)
        np.testing.assert_array_equal(a.unmixing, b.unmixing)

    def test_reduced_k_spans_pca_subspace(self, rng):
        ts = TimeSeries(rng.standard_normal((5, 5)) @ rng.uniform(-1, 1, (5, 2000)))
        res = fastica(ts, 2)
        cc = canonical_correlations(res.sources.data, pca(ts, 2).transform(ts).data)
        np.testing.assert_allclose(cc, 1.0, atol=1e-8)

    def test_iteration_cap_reported(self, mixed_uniform):
        _, ts = mixed_uniform
        res = fastica(ts, 3, max_iter=1, tol=1e-15)
        assert not res.converged and res.iterations_used == 1

    def test_too_few_samples(self, rng):
        with pytest.raises(ValueError):
            fastica(TimeSeries(rng.standard_normal((5, 40))), 2)
