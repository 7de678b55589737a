"""
🧪 Configuration Tests
Range validation of the engine settings and logging setup
"""

import json
import logging

import pytest

from config.logging_setup import configure_logging
from config.settings import engine_config, logging_config, render_config, validate_config

pytestmark = pytest.mark.unit


class TestValidateConfig:
    """Test configuration range checks"""

    def test_defaults_are_valid(self):
        """Test the shipped defaults pass validation"""
        assert validate_config()

    @pytest.mark.parametrize("name,value", [
        ("MAX_LETTERS", 17),
        ("S_ENTAILMENT_CAP", 0),
        ("FUZZ_MAX_LETTERS", 40),
        ("DEFAULT_BASE", 1.0),
        ("MASS_GRID", ()),
        ("MASS_GRID", (0, 0)),
        ("MASS_GRID", (1, -2)),
    ])
    def test_engine_settings_out_of_range(self, monkeypatch, caplog, name, value):
        """Test each invalid engine setting is reported"""
        monkeypatch.setattr(engine_config, name, value)
        with caplog.at_level(logging.WARNING, logger="config.settings"):
            assert not validate_config()
        assert "Configuration" in caplog.text

    def test_measure_decimals(self, monkeypatch):
        """Test rendering precision is bounded"""
        monkeypatch.setattr(render_config, "MEASURE_DECIMALS", 9)
        assert not validate_config()

    def test_log_level(self, monkeypatch):
        """Test an unknown logging level is reported"""
        monkeypatch.setattr(logging_config, "LEVEL", "LOUD")
        assert not validate_config()


class TestLoggingSetup:
    """Test the root logger configuration"""

    def test_single_handler(self):
        """Test repeated configuration replaces the handler"""
        configure_logging("INFO")
        root = configure_logging("DEBUG")
        names = [handler.get_name() for handler in root.handlers]
        assert names.count("engine-stderr") == 1
        assert root.level == logging.DEBUG

    def test_json_lines(self, capsys):
        """Test JSON mode writes one object per record"""
        configure_logging("INFO", json_format=True)
        logging.getLogger("services.demos").info("🎬 Running demo pets")
        line = capsys.readouterr().err.strip().splitlines()[-1]
        record = json.loads(line)
        assert record["message"] == "🎬 Running demo pets"
        assert record["levelname"] == "INFO"

    def test_file_handler(self, monkeypatch, tmp_path):
        """Test a log file is attached when configured"""
        path = tmp_path / "engine.log"
        monkeypatch.setattr(logging_config, "FILE_PATH", str(path))
        root = configure_logging("INFO")
        logging.getLogger("services.rankings").info("✅ ranked and measured agree")
        for handler in root.handlers:
            handler.flush()
        assert "ranked and measured agree" in path.read_text()
