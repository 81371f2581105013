import os

from dotenv import load_dotenv

from csmatrix.errors import ConfigError

load_dotenv()


def _read(name, default, cast):
    raw = os.environ.get(name, default)
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a {cast.__name__}, got {raw!r}")


SEED = _read("CSMATRIX_SEED", 2015, int)
THRESHOLD = _read("CSMATRIX_THRESHOLD", 0.001, float)
TRIALS = _read("CSMATRIX_TRIALS", 1000, int)
MAX_Q = _read("CSMATRIX_MAX_Q", 64, int)
WORKERS = _read("CSMATRIX_WORKERS", 1, int)
LOG_LEVEL = os.environ.get("CSMATRIX_LOG_LEVEL", "WARNING").upper()
