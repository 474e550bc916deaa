import numpy as np

from quasilab.cache import ENV_VAR, cache_key, cached_eigenvalues
from quasilab.labyrinth import LabyrinthParams, eigs_1d_axes


class TestCacheKey:
    def test_distinct_parameters_distinct_keys(self):
        keys = {
            cache_key(1, 2.0, 64, "box0-v1", 1e-11),
            cache_key(2, 2.0, 64, "box0-v1", 1e-11),
            cache_key(1, 2.5, 64, "box0-v1", 1e-11),
            cache_key(1, 2.0, 65, "box0-v1", 1e-11),
            cache_key(1, 2.0, 64, "box1-v1", 1e-11),
            cache_key(1, 2.0, 64, "box0-v1", 1e-9),
        }
        assert len(keys) == 6

    def test_key_is_a_safe_filename(self):
        key = cache_key(1, 1.3, 257, "box0-v1", 1e-11)
        assert "/" not in key and " " not in key and key.endswith(".csv")


class TestCachedEigenvalues:
    def test_disabled_without_env(self, monkeypatch):
        monkeypatch.delenv(ENV_VAR, raising=False)
        calls = []

        def compute():
            calls.append(1)
            return np.array([1.0, 2.0])

        cached_eigenvalues("k.csv", compute)
        cached_eigenvalues("k.csv", compute)
        assert len(calls) == 2  # no memoisation

    def test_roundtrip_through_disk(self, monkeypatch, tmp_path):
        monkeypatch.setenv(ENV_VAR, str(tmp_path))
        calls = []
        values = np.array([-2.0 ** 0.5, 0.0, 2.0 ** 0.5, 1.0 / 3.0])

        def compute():
            calls.append(1)
            return values

        first = cached_eigenvalues("roundtrip.csv", compute)
        second = cached_eigenvalues("roundtrip.csv", compute)
        assert len(calls) == 1
        assert np.array_equal(first, np.sort(values))
        assert np.array_equal(second, np.sort(values))
        assert (tmp_path / "roundtrip.csv").exists()

    def test_eigs_1d_axes_uses_cache(self, monkeypatch, tmp_path):
        monkeypatch.setenv(ENV_VAR, str(tmp_path))
        p = LabyrinthParams(1, 1.5, 1.5)
        e1, _ = eigs_1d_axes(p, 16)
        assert len(list(tmp_path.iterdir())) == 1  # both axes share one list
        e1_again, _ = eigs_1d_axes(p, 16)
        assert np.array_equal(e1, e1_again)
