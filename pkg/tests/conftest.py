import random

import pytest
from hypothesis import strategies as st

from doodle_ft.common import quiver
from doodle_ft.common.diagram import ArrowDiagram, ChordDiagramU
from doodle_ft.common.types import Role

# reduced, no isolated chord, no rotational symmetry
REFERENCE_CHORDS = ChordDiagramU((1, 2, 3, 4, 3, 1, 4, 2))


@st.composite
def arrow_diagrams(draw, min_chords: int = 0, max_chords: int = 5) -> ArrowDiagram:
    k = draw(st.integers(min_chords, max_chords))
    tokens = [(chord, role) for chord in range(1, k + 1) for role in Role]
    return ArrowDiagram(tuple(draw(st.permutations(tokens))))


@st.composite
def quiver_diagrams(draw, max_chords: int = 6, max_label: int = 2) -> quiver.QuiverDiagram:
    d = draw(arrow_diagrams(max_chords=max_chords))
    labels = [draw(st.integers(0, max_label)) for _ in range(len(d))]
    for a, b in d.positions.values():
        if labels[a] + labels[b] == 0:
            labels[b] = 1
    return quiver.QuiverDiagram(d.chords, tuple(labels))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240601)


@pytest.fixture
def reference_chords() -> ChordDiagramU:
    return REFERENCE_CHORDS


@pytest.fixture
def data_dirs(tmp_path, monkeypatch):
    """Points every persistence directory at a temporary folder."""
    from src.utils import census_store

    dirs = {
        "CENSUS_DIR": tmp_path / "census",
        "REPORTS_DIR": tmp_path / "reports",
        "CHECKPOINT_DIR": tmp_path / "checkpoints",
        "RUN_LEDGER_DIR": tmp_path / "run-ledger",
    }
    for name, path in dirs.items():
        monkeypatch.setattr(census_store, name, path)
    return dirs
