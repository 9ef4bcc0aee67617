import os

from dotenv import load_dotenv

load_dotenv()

ENGINE_VERSION = "1.0.0"

LOG_DIR = os.environ.get("BRAUER_FORGE_LOG_DIR", "logs")
LOG_FILE = os.path.join(LOG_DIR, "brauer_forge.log")
LOG_LEVEL = os.environ.get("BRAUER_FORGE_LOG_LEVEL", "INFO").upper()
REPORT_DIR = os.environ.get("BRAUER_FORGE_REPORT_DIR", "reports")

# Desk-scale bounds
MAX_GROUP_ORDER = 100_000
MAX_SUBGROUP_ENUM_ORDER = 512
MAX_MODULE_DIM = 2000
MAX_FIELD_DEGREE = 8

DEFAULT_SEED = 0

# Fitting-splitting and isomorphism search budgets
SPLIT_ATTEMPTS = 64
ISO_ATTEMPTS = 64

os.makedirs(LOG_DIR, exist_ok=True)
os.makedirs(REPORT_DIR, exist_ok=True)


def worker_count() -> int:
    """Thread cap for per-subgroup checks, from BRAUER_FORGE_THREADS."""
    raw = os.environ.get("BRAUER_FORGE_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(value, 1)


class BrauerForgeError(Exception):
    """Root of every error raised by the toolkit."""


class ResourceLimitError(BrauerForgeError):
    """A desk-scale bound (group order, module dimension, ...) was exceeded."""
