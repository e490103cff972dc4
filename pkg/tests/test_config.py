"""
Unit Tests -- Configuration

Verifies settings defaults and environment overrides.
"""
from taffin.config import Settings


class TestSettings:
    def test_default_app_name(self):
        s = Settings()
        assert s.APP_NAME == "taffin"

    def test_report_versions(self):
        s = Settings()
        assert s.TOOL_VERSION == "1.0.0"
        assert s.REPORT_SCHEMA_VERSION == "1"

    def test_truncation_defaults(self):
        s = Settings()
        assert s.COEFF_ORDER == 20
        assert s.MODE_WINDOW == 6
        assert s.BASIS_DEGREE == 3
        assert s.LATTICE_HEIGHT == 2
        assert s.SERRE_WINDOW == 2

    def test_catalog_defaults(self):
        s = Settings()
        assert s.QI_INTERPRETATION == "q"
        assert s.INCLUDE_Q9P is False
        assert s.H_MODES == 3

    def test_runs_in_process_by_default(self):
        assert Settings().JOBS == 1

    def test_debug_default_false(self):
        assert Settings().DEBUG is False


class TestEnvironment:
    def test_prefixed_override(self, monkeypatch):
        monkeypatch.setenv("TAFFIN_MODE_WINDOW", "10")
        monkeypatch.setenv("TAFFIN_JOBS", "4")
        s = Settings()
        assert s.MODE_WINDOW == 10
        assert s.JOBS == 4

    def test_unprefixed_ignored(self, monkeypatch):
        monkeypatch.setenv("MODE_WINDOW", "10")
        assert Settings().MODE_WINDOW == 6
