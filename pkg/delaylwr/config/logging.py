# logging.py
"""Centralized logging configuration for the delayed LWR simulator."""

import logging
import logging.handlers
import os
import sys
from pathlib import Path
from typing import Optional

from delaylwr.config.base import LOGGING_CONFIG


class SimulationLogger:
    """Centralized logger configuration shared by every simulator module."""

    _instance: Optional['SimulationLogger'] = None
    _initialized: bool = False

    def __new__(cls) -> 'SimulationLogger':
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            self._setup_logging()
            SimulationLogger._initialized = True

    def _get_log_directory(self) -> Path:
        """Get the log directory, honouring DELAYLWR_LOG_DIR and XDG_DATA_HOME."""
        override = os.environ.get('DELAYLWR_LOG_DIR')
        if override:
            return Path(override)
        if sys.platform == 'win32':
            base_dir = Path(os.environ.get('LOCALAPPDATA', Path.home() / 'AppData' / 'Local'))
            return base_dir / 'delaylwr'
        xdg_data_home = os.environ.get('XDG_DATA_HOME')
        if xdg_data_home:
            return Path(xdg_data_home) / 'delaylwr'
        return Path.home() / '.local' / 'share' / 'delaylwr'

    def _console_handler(self) -> logging.Handler:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(LOGGING_CONFIG['console_level'])
        console_handler.setFormatter(logging.Formatter(LOGGING_CONFIG['console_format']))
        return console_handler

    def _setup_console_only_logging(self) -> None:
        """Fallback to console-only logging if file logging fails."""
        root_logger = logging.getLogger()
        root_logger.setLevel(logging.INFO)
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)
        root_logger.addHandler(self._console_handler())

    def _setup_logging(self) -> None:
        """Setup the rotating file handler plus a stderr console handler."""
        log_dir = self._get_log_directory()
        try:
            log_dir.mkdir(parents=True, exist_ok=True)
        except (OSError, PermissionError) as e:
            sys.stderr.write(f"Warning: Cannot create log directory {log_dir}: {e}\n")
            self._setup_console_only_logging()
            return

        log_file = log_dir / LOGGING_CONFIG['log_file']
        root_logger = logging.getLogger()
        root_logger.setLevel(logging.DEBUG)
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)

        try:
            file_handler = logging.handlers.RotatingFileHandler(
                log_file,
                maxBytes=LOGGING_CONFIG['max_bytes'],
                backupCount=LOGGING_CONFIG['backup_count'],
                encoding='utf-8'
            )
        except (OSError, PermissionError) as e:
            sys.stderr.write(f"Warning: Cannot create log file {log_file}: {e}\n")
            self._setup_console_only_logging()
            return

        file_handler.setLevel(LOGGING_CONFIG['file_level'])
        file_handler.setFormatter(logging.Formatter(
            LOGGING_CONFIG['file_format'],
            datefmt=LOGGING_CONFIG['datefmt']
        ))
        root_logger.addHandler(file_handler)
        root_logger.addHandler(self._console_handler())

        logger = logging.getLogger(__name__)
        logger.info("Logging system initialized successfully")
        logger.debug(f"Log file location: {log_file}")

    @staticmethod
    def get_logger(name: str) -> logging.Logger:
        """Get a logger with the specified name.

        Args:
            name: Logger name (typically __name__)

        Returns:
            logging.Logger: Configured logger instance
        """
        SimulationLogger()
        return logging.getLogger(name)

    @staticmethod
    def set_debug_mode(enabled: bool = True) -> None:
        """Switch the console handler between DEBUG and its default level."""
        for handler in logging.getLogger().handlers:
            if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
                handler.setLevel(logging.DEBUG if enabled else LOGGING_CONFIG['console_level'])
                logging.getLogger(__name__).info(
                    "Debug mode %s", "enabled" if enabled else "disabled"
                )
                return

    @staticmethod
    def log_exception(logger: logging.Logger, message: str, exception: Exception) -> None:
        """Log an exception with full traceback."""
        logger.error(f"{message}: {type(exception).__name__}: {exception}", exc_info=True)

    @staticmethod
    def get_log_file_path() -> Optional[Path]:
        """Get the current log file path if file logging is enabled."""
        for handler in logging.getLogger().handlers:
            if isinstance(handler, logging.handlers.RotatingFileHandler):
                return Path(handler.baseFilename)
        return None


def get_logger(name: str) -> logging.Logger:
    """Convenience function to get a configured logger."""
    return SimulationLogger.get_logger(name)


def get_log_info() -> dict:
    """Get information about current logging configuration."""
    log_file = SimulationLogger.get_log_file_path()
    return {
        'log_file': str(log_file) if log_file else None,
        'file_logging_enabled': log_file is not None,
        'log_level': logging.getLogger().level,
        'handler_count': len(logging.getLogger().handlers)
    }
