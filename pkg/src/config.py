import os
from pathlib import Path

# ---------------------------------------------------------------------
# Storage
# ---------------------------------------------------------------------
BASE_DIR = Path(__file__).resolve().parent.parent
DATA_DIR = Path(os.getenv("DOODLE_FT_DATA_DIR", BASE_DIR / "data"))

CENSUS_DIR = DATA_DIR / "census"
REPORTS_DIR = DATA_DIR / "reports"
CHECKPOINT_DIR = DATA_DIR / "checkpoints"
RUN_LEDGER_DIR = DATA_DIR / "run-ledger"


def ensure_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------
# Runtime tunables
# ---------------------------------------------------------------------
def default_workers() -> int:
    try:
        return max(1, int(os.getenv("DOODLE_FT_WORKERS", "")))
    except ValueError:
        return min(4, os.cpu_count() or 1)


WORKERS = default_workers()
LOG_LEVEL = os.getenv("DOODLE_FT_LOG_LEVEL", "INFO").upper()

# ---------------------------------------------------------------------
# Computation bounds
# ---------------------------------------------------------------------
DEFAULT_SEED = 20240601
DEFAULT_SELFTEST_SAMPLES = 200

MAX_SAFE_KMAX = 6            # census refuses larger kmax without --allow-unsafe
MAX_INVARIANT_CHORDS = 16    # exact invariant sums over 2^k subsets
CENSUS_DIAGRAM_BUDGET = 2_000_000

# (2k)! / (k! 2k): arrow diagrams with exactly k chords, up to rotation (approx.)
CENSUS_GROWTH = {
    1: 1,
    2: 3,
    3: 20,
    4: 210,
    5: 3_024,
    6: 55_440,
    7: 1_235_520,
    8: 32_432_400,
}
