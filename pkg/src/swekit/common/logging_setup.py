"""
Logging setup with rotation for swekit.

Configures the package logger `swekit`; every module logs through
`logging.getLogger(__name__)` and inherits these handlers.
"""

from __future__ import annotations

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path

LOGGER_NAME = "swekit"
LOG_FORMAT = "%(asctime)s %(levelname)s: %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_logging(log_path: str | Path | None = None, level: str | None = None) -> logging.Logger:
    """
    Configure the `swekit` logger with a console handler and optional rotation.

    Args:
        log_path: Log file path; falls back to SWEKIT_LOG_FILE, none means console only.
        level: Logging level name (DEBUG, INFO, WARNING, ERROR); falls back to
            SWEKIT_LOG_LEVEL, then INFO.

    Returns:
        logging.Logger: the configured package logger
    """
    level = (level or os.getenv("SWEKIT_LOG_LEVEL") or "INFO").upper()
    log_path = log_path or os.getenv("SWEKIT_LOG_FILE") or None

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(getattr(logging, level, logging.INFO))
    logger.propagate = False

    # Remove existing handlers (important for reloads / repeated CLI calls in tests)
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    if log_path:
        Path(log_path).parent.mkdir(parents=True, exist_ok=True)
        # Rotating File Handler (2MB, 5 Backups)
        file_handler = RotatingFileHandler(
            log_path,
            maxBytes=2 * 1024 * 1024,
            backupCount=5,
            encoding="utf-8",
        )
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    # stdout is reserved for progress and report lines
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    return logger
