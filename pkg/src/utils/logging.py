"""Logging for the simulator.

All module loggers hang below the ``src`` package logger, which owns the only
handler. Records go to stderr so that stdout stays free for command output, and
``warnings.warn`` calls from numpy/scipy (ill-conditioned solves, complex casts)
are routed through the same handler.
"""

import logging
import sys
from typing import Optional, TextIO

from src.utils.config import get_settings

PACKAGE_LOGGER = "src"
DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s"


def _level(name: Optional[str]) -> int:
    return getattr(logging, (name or get_settings().log_level).upper(), logging.INFO)


def configure_package_logger(
    level: Optional[str] = None,
    format_string: Optional[str] = None,
    stream: Optional[TextIO] = None,
) -> logging.Logger:
    """
    Install the package handler, replacing any previous one.

    Args:
        level: Log level (defaults to settings.log_level)
        format_string: Custom format string
        stream: Output stream (defaults to stderr)

    Returns:
        The package logger
    """
    root = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(format_string or DEFAULT_FORMAT))
    root.addHandler(handler)
    root.setLevel(_level(level))
    root.propagate = False

    logging.captureWarnings(True)
    warnings_logger = logging.getLogger("py.warnings")
    if handler not in warnings_logger.handlers:
        warnings_logger.handlers = [handler]
    return root


def setup_logging(name: str, level: Optional[str] = None) -> logging.Logger:
    """
    Logger for a module (typically ``__name__``).

    The package handler is installed on first use. A level given here applies to
    this logger only; loggers outside the ``src`` package get no handler.
    """
    if not logging.getLogger(PACKAGE_LOGGER).handlers:
        configure_package_logger()

    logger = logging.getLogger(name)
    if level is not None:
        logger.setLevel(_level(level))
    return logger
