from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doodle_ft.common import census as census_lib
from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors, oracles, quiver
from doodle_ft.common.diagram import ArrowDiagram, ChordDiagramU
from doodle_ft.common.quiver import BasisKey, QuiverDiagram
from doodle_ft.common.types import Field
from doodle_ft.common.util import linalg, memo
from tests.conftest import REFERENCE_CHORDS

C = REFERENCE_CHORDS.canonical


@pytest.mark.parametrize("k, expected", [(0, 1), (1, 1), (2, 4)])
def test_burnside_count(k, expected):
    assert oracles.burnside_count(k) == expected


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_naive_classes_match_burnside(k):
    assert len(oracles.naive_rotation_classes(k)) == oracles.burnside_count(k)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_planar_closure_is_the_realizable_set(k):
    realizable = {d for d in census_lib.enumerate_arrow_diagrams(k) if diagram_lib.is_realizable(d)}
    assert oracles.planar_closure(k) == realizable


def test_planar_closure_of_one_chord():
    assert oracles.planar_closure(1) == {diagram_lib.parse_gauss("1t 1h")}
    assert ArrowDiagram() in oracles.planar_closure(0)


@pytest.mark.parametrize("field", list(Field))
@pytest.mark.parametrize("n", [4, 5])
def test_basis_is_sound_on_the_reference_diagram(n, field):
    assert oracles.basis_is_sound(REFERENCE_CHORDS, n, field)


def test_oracle_rejects_symmetric_chord_diagrams():
    with pytest.raises(errors.PreconditionError):
        oracles.basis_is_sound(ChordDiagramU((1, 2, 3, 1, 2, 3)), 4)


def test_oracle_matches_the_worked_rewrite():
    q = QuiverDiagram(C, (1, 0, 1, 0, 1, 0, 1, 1))
    assert oracles.oracle_coordinates(q, 6) == {
        BasisKey(C, (0, 0, 2, 0, 1, 0, 1, 1)): Fraction(-1),
        BasisKey(C, (0, 0, 3, 0, 1, 0, 1, 1)): Fraction(1),
    }


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_rewriting_agrees_with_row_reduction(data):
    n = data.draw(st.sampled_from([4, 5]))
    labels = data.draw(st.sampled_from(quiver.labelings(REFERENCE_CHORDS, n)))
    q = QuiverDiagram(C, labels)
    expected = {k: v for k, v in oracles.oracle_coordinates(q, n).items() if v}
    assert dict(quiver.rewrite_to_basis(q, n).terms) == expected


# ----------------------------------------------------------------------
# Linear algebra and memo helpers
# ----------------------------------------------------------------------
def test_rank_over_q():
    rows = [{0: Fraction(1), 1: Fraction(1)}, {1: Fraction(1), 2: Fraction(1)}, {0: Fraction(1), 2: Fraction(-1)}]
    assert linalg.rank(rows, 3) == 2


def test_rank_over_gf2_differs():
    rows = [{0: Fraction(1), 1: Fraction(1)}, {1: Fraction(1), 2: Fraction(1)}, {0: Fraction(1), 2: Fraction(1)}]
    assert linalg.rank(rows, 3) == 3
    assert linalg.gf2_rank([linalg.to_bitset(row) for row in rows], 3) == 2


def test_reduce_vector():
    pivots = linalg.rref([{0: Fraction(2), 1: Fraction(2)}], [0, 1])
    assert pivots == [(0, {0: Fraction(1), 1: Fraction(1)})]
    assert linalg.reduce_vector({0: Fraction(3)}, pivots) == {1: Fraction(-3)}


def test_memo_counts_hits():
    table = memo.Memo()
    calls = []
    assert table.get_or_compute("k", lambda: calls.append(1) or 5) == 5
    assert table.get_or_compute("k", lambda: calls.append(1) or 6) == 5
    assert (table.hits, table.misses, len(table), len(calls)) == (1, 1, 1, 1)
    table.clear()
    assert (table.hits, table.misses, len(table)) == (0, 0, 0)
