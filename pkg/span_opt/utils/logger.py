import logging
import sys
from typing import Optional

from ..config import Config

PACKAGE_LOGGER = "span_opt"


def setup_logger(name: Optional[str] = None) -> logging.Logger:
    """Configure the package logger once and return the requested child logger"""
    package_logger = logging.getLogger(PACKAGE_LOGGER)

    if not package_logger.handlers:
        package_logger.setLevel(Config.LOG_LEVEL)

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        # Console handler
        console_handler = logging.StreamHandler(sys.stdout)
        console_handler.setFormatter(formatter)
        package_logger.addHandler(console_handler)

        # File handler, enabled with SPAN_LOG_FILE
        if Config.LOG_FILE:
            file_handler = logging.FileHandler(Config.LOG_FILE, encoding='utf-8')
            file_handler.setFormatter(formatter)
            package_logger.addHandler(file_handler)

    if not name:
        return package_logger
    # Scripts run as __main__ still log through the package handlers
    if name != PACKAGE_LOGGER and not name.startswith(PACKAGE_LOGGER + "."):
        name = f"{PACKAGE_LOGGER}.{name}"
    return logging.getLogger(name)


logger = setup_logger()
