import logging
import sys

from rich.logging import RichHandler

from src.config import LOG_LEVEL

LOG_FORMAT = "[%(asctime)s] [%(levelname)s] %(name)s: %(message)s"


def _handler() -> logging.Handler:
    if sys.stderr.isatty():
        return RichHandler(show_path=False, rich_tracebacks=True)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    return handler


def get_logger(name: str, level: str | None = None) -> logging.Logger:
    logger = logging.getLogger(name)
    if not logger.handlers:
        logger.setLevel(level or LOG_LEVEL)
        logger.addHandler(_handler())
    return logger


def configure_library_logging(verbose: bool = False) -> logging.Logger:
    """Attaches a handler to the ``doodle_ft`` package logger."""
    logger = get_logger("doodle_ft")
    if verbose:
        logger.setLevel(logging.DEBUG)
    return logger
