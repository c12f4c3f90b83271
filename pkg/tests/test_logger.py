"""
Unit тесты для настройки журналирования
"""

import logging
import os
import shutil
import tempfile
import time
import unittest

from core.logger import (
    cleanup_old_logs, get_activity_logger, get_simulation_logger, log_check_result,
    log_decoder_inconsistency, log_simulation_point, setup_logging,
)


class TestLogger(unittest.TestCase):
    """Тесты журналов приложения"""

    def setUp(self):
        """Настройка перед каждым тестом."""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Очистка после каждого теста."""
        for name in ("", "simulation", "activity"):
            for handler in logging.getLogger(name or None).handlers[:]:
                handler.close()
        setup_logging(logging.WARNING, enable_file_logging=False)
        shutil.rmtree(self.temp_dir)

    def _read(self, name):
        for handler in get_simulation_logger().handlers + get_activity_logger().handlers:
            handler.flush()
        with open(os.path.join(self.temp_dir, name), encoding="utf-8") as f:
            return f.read()

    def test_file_logging(self):
        """Тест записи точек моделирования и проверок в файлы."""
        setup_logging("DEBUG", self.temp_dir)
        log_simulation_point("square-octagon", 4, "bitflip", 0.05, 1000, 37, 1.25)
        log_check_result("map-check", "square-octagon L=4", success=False, details="rank 62")
        log_decoder_inconsistency("square-octagon L=4", "defect outside erasure", {"trial": 3})

        simulation_files = [f for f in os.listdir(self.temp_dir) if f.startswith("simulation_")]
        self.assertEqual(len(simulation_files), 1)
        simulation_log = self._read(simulation_files[0])
        self.assertIn("POINT: square-octagon L=4 bitflip rate=0.05000 failures=37/1000", simulation_log)

        activity_log = self._read("activity.log")
        self.assertIn("MAP-CHECK: square-octagon L=4 - FAILED - rank 62", activity_log)
        self.assertIn("replay {'trial': 3}", activity_log)

    def test_console_only(self):
        """Тест режима без файлов."""
        setup_logging(logging.INFO, self.temp_dir, enable_file_logging=False)
        log_simulation_point("hexagonal", 6, "erasure", 0.3, 10, 2)
        self.assertEqual(os.listdir(self.temp_dir), [])
        self.assertFalse(get_simulation_logger().propagate)

    def test_unknown_level_name(self):
        """Тест неизвестного уровня журналирования."""
        setup_logging("LOUD", enable_file_logging=False)
        self.assertEqual(logging.getLogger().level, logging.INFO)

    def test_cleanup_old_logs(self):
        """Тест удаления старых журналов."""
        old = os.path.join(self.temp_dir, "old.log")
        fresh = os.path.join(self.temp_dir, "fresh.log")
        for path in (old, fresh):
            with open(path, "w", encoding="utf-8") as f:
                f.write("x")
        stale = time.time() - 40 * 24 * 3600
        os.utime(old, (stale, stale))
        self.assertEqual(cleanup_old_logs(self.temp_dir, days_to_keep=30), 1)
        self.assertEqual(os.listdir(self.temp_dir), ["fresh.log"])
        self.assertEqual(cleanup_old_logs(os.path.join(self.temp_dir, "missing")), 0)


if __name__ == '__main__':
    unittest.main()
