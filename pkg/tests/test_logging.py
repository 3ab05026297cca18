"""
Tests for the shared logging setup.
"""

import logging
import os
from pathlib import Path

from delaylwr.config.logging import SimulationLogger, get_log_info, get_logger


class TestSimulationLogger:
    def test_singleton(self):
        assert SimulationLogger() is SimulationLogger()

    def test_named_logger(self):
        logger = get_logger("delaylwr.solver.runner")
        assert isinstance(logger, logging.Logger)
        assert logger.name == "delaylwr.solver.runner"

    def test_log_file_honours_override(self):
        info = get_log_info()
        assert info["file_logging_enabled"]
        assert Path(info["log_file"]).parent == Path(os.environ["DELAYLWR_LOG_DIR"])
        assert Path(info["log_file"]).name == "delaylwr.log"

    def test_log_exception_writes_traceback(self):
        logger = get_logger("delaylwr.tests")
        try:
            raise ValueError("broken")
        except ValueError as exc:
            SimulationLogger.log_exception(logger, "Unexpected failure", exc)
        for handler in logging.getLogger().handlers:
            handler.flush()
        text = Path(get_log_info()["log_file"]).read_text(encoding="utf-8")
        assert "Unexpected failure: ValueError: broken" in text
        assert "Traceback" in text
