import logging
import os
from logging.handlers import RotatingFileHandler
from typing import Any, Tuple

from config import LOG_DIR, LOG_FILE, LOG_LEVEL

LOGGER_NAME = "brauer_forge"
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"
LOG_MAX_BYTES = 5 * 1024 * 1024
LOG_BACKUPS = 3


class Utf8StreamHandler(logging.StreamHandler):
    """Console handler that survives consoles unable to print Δ, ∘ or GF(2^m) subscripts."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            msg = self.format(record)
        except Exception:
            self.handleError(record)
            return
        encoding = getattr(self.stream, "encoding", None) or "utf-8"
        try:
            self.stream.write(msg + self.terminator)
        except UnicodeEncodeError:
            safe = msg.encode(encoding, errors="replace").decode(encoding, errors="replace")
            self.stream.write(safe + self.terminator)
        self.flush()


def _build_handlers() -> Tuple[RotatingFileHandler, Utf8StreamHandler]:
    formatter = logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT)
    os.makedirs(LOG_DIR, exist_ok=True)
    file_handler = RotatingFileHandler(LOG_FILE, maxBytes=LOG_MAX_BYTES, backupCount=LOG_BACKUPS, encoding="utf-8")
    file_handler.setFormatter(formatter)
    stream_handler = Utf8StreamHandler()
    stream_handler.setFormatter(formatter)
    stream_handler.setLevel(logging.NOTSET)
    return file_handler, stream_handler


logger = logging.getLogger(LOGGER_NAME)
logger.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))

# one set of handlers per process, even when modules are re-imported
_existing = [h for h in logger.handlers if isinstance(h, Utf8StreamHandler)]
if _existing:
    stream_handler = _existing[0]
else:
    _file_handler, stream_handler = _build_handlers()
    logger.addHandler(_file_handler)
    logger.addHandler(stream_handler)


def set_quiet(quiet: bool) -> None:
    """Keep the console to warnings and errors; the log file still gets everything."""
    stream_handler.setLevel(logging.WARNING if quiet else logging.NOTSET)


def log_debug(message: str, *args: Any, **kwargs: Any) -> None:
    logger.debug(message, *args, **kwargs)


def log_info(message: str, *args: Any, **kwargs: Any) -> None:
    logger.info(message, *args, **kwargs)


def log_warning(message: str, *args: Any, **kwargs: Any) -> None:
    logger.warning(message, *args, **kwargs)


def log_error(message: str, *args: Any, **kwargs: Any) -> None:
    logger.error(message, *args, **kwargs)


__all__ = [
    "logger",
    "set_quiet",
    "log_debug",
    "log_info",
    "log_warning",
    "log_error",
]
