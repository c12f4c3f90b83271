"""
Unit тесты для CacheManager и ArtifactCache
"""

import unittest

from core.cache_manager import ArtifactCache, CacheManager, get_artifact_cache


class TestCacheManager(unittest.TestCase):
    """Тесты для CacheManager"""

    def setUp(self):
        """Настройка перед каждым тестом."""
        self.cache = CacheManager(default_ttl=60)

    def test_set_and_get(self):
        """Тест записи и чтения."""
        self.cache.set("key", 42)
        self.assertEqual(self.cache.get("key"), 42)
        self.assertIsNone(self.cache.get("other"))

    def test_expiry(self):
        """Тест истечения срока жизни."""
        self.cache.set("key", "value", ttl=0)
        self.assertEqual(self.cache.get_stats()["expired_entries"], 1)
        self.assertIsNone(self.cache.get("key"))
        self.assertEqual(self.cache.get_stats()["entries"], 0)

    def test_cleanup_expired(self):
        """Тест очистки просроченных записей."""
        self.cache.set("old", 1, ttl=0)
        self.cache.set("fresh", 2)
        self.assertEqual(self.cache.cleanup_expired(), 1)
        self.assertEqual(self.cache.get("fresh"), 2)

    def test_get_or_build(self):
        """Тест однократного построения."""
        calls = []

        def builder():
            calls.append(1)
            return "built"

        self.assertEqual(self.cache.get_or_build("key", builder), "built")
        self.assertEqual(self.cache.get_or_build("key", builder), "built")
        self.assertEqual(len(calls), 1)

    def test_stats_count_hits_and_builds(self):
        """Тест счётчиков попаданий и построений."""
        self.cache.get_or_build("a", lambda: 1)
        self.cache.get_or_build("a", lambda: 2)
        self.cache.get_or_build("b", lambda: 3)
        stats = self.cache.get_stats()
        self.assertEqual(stats["builds"], 2)
        self.assertEqual(stats["hits"], 1)
        self.assertEqual(stats["entries"], 2)
        self.assertGreaterEqual(stats["build_seconds"], 0.0)


class TestArtifactCache(unittest.TestCase):
    """Тесты для ArtifactCache"""

    def setUp(self):
        """Настройка перед каждым тестом."""
        self.cache = ArtifactCache()

    def test_lattice_key(self):
        """Тест ключа решётки."""
        self.assertEqual(ArtifactCache.lattice_key("square-octagon", 4), "square-octagon:4:-:-")
        self.assertEqual(ArtifactCache.lattice_key("hexagonal", 6, "g", 1), "hexagonal:6:g:1")

    def test_artifacts_by_kind(self):
        """Тест раздельного хранения артефактов."""
        key = ArtifactCache.lattice_key("square-octagon", 4)
        self.assertEqual(self.cache.get_artifact("bundle", key, lambda: "bundle"), "bundle")
        self.assertEqual(self.cache.get_artifact("decoder", key, lambda: "plain", "pymatching"), "plain")
        self.assertEqual(self.cache.get_artifact("decoder", key, lambda: "other", "networkx"), "other")
        self.assertEqual(self.cache.get_artifact("decoder", key, lambda: "again", "pymatching"), "plain")

    def test_invalidate_lattice(self):
        """Тест сброса артефактов одной решётки."""
        four = ArtifactCache.lattice_key("square-octagon", 4)
        six = ArtifactCache.lattice_key("square-octagon", 6)
        self.cache.get_artifact("bundle", four, lambda: 4)
        self.cache.get_artifact("decoder", four, lambda: 4, "pymatching")
        self.cache.get_artifact("bundle", six, lambda: 6)
        self.assertEqual(self.cache.invalidate_lattice(four), 2)
        self.assertEqual(self.cache.get_stats()["entries"], 1)

    def test_invalidate_keeps_longer_sizes(self):
        """Тест: сброс L=4 не затрагивает L=40."""
        four = ArtifactCache.lattice_key("square-octagon", 4)
        forty = ArtifactCache.lattice_key("square-octagon", 40)
        self.cache.get_artifact("bundle", four, lambda: 4)
        self.cache.get_artifact("bundle", forty, lambda: 40)
        self.assertEqual(self.cache.invalidate_lattice(four), 1)
        self.assertEqual(self.cache.get_artifact("bundle", forty, lambda: None), 40)

    def test_global_instance(self):
        """Тест глобального экземпляра."""
        self.assertIs(get_artifact_cache(), get_artifact_cache())


if __name__ == '__main__':
    unittest.main()
