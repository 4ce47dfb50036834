"""
Persistence for census runs: the census file with its invariant sidecars,
JSON reports, partial-progress checkpoints and an append-only run ledger.
"""

import hashlib
import json
import re
from datetime import datetime
from pathlib import Path
from typing import Any

import pydantic

from doodle_ft.common import census as census_lib
from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors, invariant
from doodle_ft.common.types import parse_field
from src.config import CENSUS_DIR, CHECKPOINT_DIR, REPORTS_DIR, RUN_LEDGER_DIR, ensure_dir
from src.utils.logger import get_logger

logger = get_logger(__name__)

CENSUS_FILE = "census.txt"
_RECORD = re.compile(
    r'class=(\d+) crossings=(\d+) code="([^"]*)" reps=(\d+) invariant=(\S+)'
)


# ============================================================================
# CENSUS FILES
# ============================================================================

def save_census(census: census_lib.Census, directory: Path | None = None) -> Path:
    """
    Writes one line per class plus one sidecar invariant file per class.
    Write failures are logged and re-raised.
    """
    directory = ensure_dir(directory or CENSUS_DIR)
    ensure_dir(directory / "invariants")
    header = (
        f"# kmax={census.kmax} n={census.n} field={census.field} "
        f"realizable={int(census.require_realizable)}"
    )
    lines = [header]
    try:
        for record in census.records:
            relative = f"invariants/class_{record.class_id:04d}.txt"
            (directory / relative).write_text(record.invariant.format() + "\n", encoding="utf-8")
            lines.append(record.line(relative))
        path = directory / CENSUS_FILE
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as e:
        logger.error(f"Failed to write census to {directory}: {e}")
        raise
    logger.info(f"Census with {len(census)} classes saved to: {path}")
    return path


def load_census(path: Path) -> census_lib.Census:
    """
    Reads a census file written by :func:`save_census`. Unreadable or
    malformed files raise :class:`errors.PreconditionError`.
    """
    path = Path(path)
    if path.is_dir():
        path = path / CENSUS_FILE
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise errors.PreconditionError(f"Cannot read census {path}: {e}") from e
    if not lines or not lines[0].startswith("# kmax="):
        raise errors.PreconditionError(f"{path} is not a census file")
    try:
        settings = dict(item.split("=", 1) for item in lines[0][2:].split())
        kmax, n = int(settings["kmax"]), int(settings["n"])
        field = parse_field(settings["field"])
    except (KeyError, ValueError) as e:
        raise errors.PreconditionError(f"Invalid census header in {path}: {lines[0]!r}") from e

    records = []
    for line in lines[1:]:
        match = _RECORD.fullmatch(line.strip())
        if match is None:
            raise errors.PreconditionError(f"Malformed census line in {path}: {line!r}")
        class_id, _, code, reps, relative = match.groups()
        sidecar = path.parent / relative
        try:
            value = invariant.parse_invariant(sidecar.read_text(encoding="utf-8").strip())
        except OSError as e:
            raise errors.PreconditionError(f"Cannot read invariant file {sidecar}: {e}") from e
        records.append(
            census_lib.CensusRecord(int(class_id), diagram_lib.parse_gauss(code), int(reps), value)
        )
    return census_lib.Census(
        kmax,
        n,
        field,
        tuple(records),
        require_realizable=settings.get("realizable", "1") == "1",
    )


# ============================================================================
# REPORTS AND CHECKPOINTS
# ============================================================================

def save_report(report: pydantic.BaseModel, name: str, directory: Path | None = None) -> Path | None:
    """Best effort: a failed write is logged and ``None`` returned."""
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    path = ensure_dir(directory or REPORTS_DIR) / f"{name}_{timestamp}.json"
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(report.model_dump(mode="json"), f, indent=2, default=str)
    except OSError as e:
        logger.error(f"Failed to save report: {e}")
        return None
    logger.info(f"Report saved to: {path}")
    return path


def write_checkpoint(state: dict[str, Any], directory: Path | None = None) -> Path:
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    path = ensure_dir(directory or CHECKPOINT_DIR) / f"census_k{state.get('kmax')}_{timestamp}.json"
    with open(path, "w", encoding="utf-8") as f:
        json.dump(state, f, indent=2, default=str)
    logger.info(f"Census checkpoint written: {path}")
    return path


# ============================================================================
# RUN LEDGER
# ============================================================================

class RunLedger:
    """
    Append-only JSONL record of CLI runs. Each entry stores the previous
    entry's hash and its own hash over both.
    """

    def __init__(self, path: Path | None = None):
        self._filepath = path or ensure_dir(RUN_LEDGER_DIR) / "runs.jsonl"
        self._previous_hash = self._last_hash()

    @property
    def filepath(self) -> Path:
        return self._filepath

    def _last_hash(self) -> str | None:
        if not self._filepath.exists():
            return None
        last = None
        with open(self._filepath, encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    last = json.loads(line).get("hash")
        return last

    @staticmethod
    def calculate_hash(entry: dict[str, Any], previous: str | None) -> str:
        data = json.dumps(entry, sort_keys=True, default=str)
        if previous:
            data = previous + data
        return hashlib.sha256(data.encode()).hexdigest()[:16]

    def record(self, command: str, **details: Any) -> dict[str, Any] | None:
        entry = {
            "timestamp": datetime.now().isoformat(),
            "command": command,
            **details,
            "previous": self._previous_hash,
        }
        entry["hash"] = self.calculate_hash(entry, self._previous_hash)
        try:
            with open(self._filepath, "a", encoding="utf-8") as f:
                f.write(json.dumps(entry, default=str) + "\n")
        except OSError as e:
            logger.error(f"Failed to write ledger entry: {e}")
            return None
        self._previous_hash = entry["hash"]
        return entry

    def verify_chain(self) -> bool:
        previous = None
        if not self._filepath.exists():
            return True
        with open(self._filepath, encoding="utf-8") as f:
            for line in f:
                if not line.strip():
                    continue
                entry = json.loads(line)
                stored = entry.pop("hash", None)
                if entry.get("previous") != previous:
                    return False
                if self.calculate_hash(entry, previous) != stored:
                    return False
                previous = stored
        return True
