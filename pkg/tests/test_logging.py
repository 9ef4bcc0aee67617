import io
import logging
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from logger import Utf8StreamHandler, set_quiet, stream_handler  # noqa: E402


def test_stream_handler_replaces_unprintable_symbols():
    raw = io.BytesIO()
    stream = io.TextIOWrapper(raw, encoding="ascii", write_through=True)
    handler = Utf8StreamHandler(stream)
    handler.setFormatter(logging.Formatter("%(message)s"))
    record = logging.LogRecord("brauer_forge", logging.INFO, __file__, 1, "Sc(G x G', ΔP) dim %s", (48,), None)
    handler.emit(record)
    assert raw.getvalue().decode("ascii") == "Sc(G x G', ?P) dim 48\n"


def test_set_quiet_raises_console_threshold():
    try:
        set_quiet(True)
        assert stream_handler.level == logging.WARNING
    finally:
        set_quiet(False)
    assert stream_handler.level == logging.NOTSET
