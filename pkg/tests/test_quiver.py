import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors, quiver
from doodle_ft.common.diagram import ArrowDiagram, ChordDiagramU
from doodle_ft.common.quiver import AlgebraElement, BasisKey, QuiverDiagram
from doodle_ft.common.types import Field
from tests.conftest import REFERENCE_CHORDS, quiver_diagrams

C = REFERENCE_CHORDS.canonical  # (1, 2, 1, 3, 2, 4, 3, 4)


def key(**labels: int) -> BasisKey:
    """Key over the reference diagram; chords 2-4 carry unmarked label 1 unless given."""
    positional = [0, 0, 1, 0, 1, 0, 1, 1]
    for name, value in labels.items():
        positional[int(name.removeprefix("pos"))] = value
    return BasisKey(C, tuple(positional))


def test_reference_canonical_form():
    assert C == (1, 2, 1, 3, 2, 4, 3, 4)
    assert REFERENCE_CHORDS.symmetry_order == 1


# ----------------------------------------------------------------------
# Quiver diagrams and reduction
# ----------------------------------------------------------------------
def test_degree():
    assert quiver.degree(QuiverDiagram()) == 0
    assert quiver.degree(QuiverDiagram((1, 1), (0, 1))) == 1
    assert quiver.degree(QuiverDiagram((1, 1, 2, 2), (2, 3, 0, 1))) == 6


def test_quiver_validation():
    with pytest.raises(errors.PreconditionError):
        QuiverDiagram((1, 1), (0, 0))
    with pytest.raises(errors.PreconditionError):
        QuiverDiagram((1, 1), (0,))
    with pytest.raises(errors.PreconditionError):
        QuiverDiagram((1, 1), (-1, 2))


def test_equality_up_to_rotation():
    assert QuiverDiagram((1, 1, 2, 2), (0, 1, 2, 0)) == QuiverDiagram((2, 2, 1, 1), (2, 0, 0, 1))
    assert QuiverDiagram((1, 1), (0, 1)) != QuiverDiagram((1, 1), (0, 2))


def test_from_arrow():
    assert quiver.from_arrow(ArrowDiagram()) == QuiverDiagram()
    assert quiver.from_arrow(diagram_lib.parse_gauss("1t 1h")) == QuiverDiagram((1, 1), (0, 1))
    crossing = quiver.from_arrow(diagram_lib.parse_gauss("1t 2t 1h 2h"))
    assert crossing.labels == (0, 0, 1, 1)


def test_adjacent_chord_pairs():
    assert quiver.adjacent_chord_pairs(QuiverDiagram()) == []
    # two crossing chords pair up in both rotational directions
    pairs = quiver.adjacent_chord_pairs(QuiverDiagram((1, 2, 1, 2), (0, 0, 1, 1)))
    assert len(pairs) == 2
    assert {pair.chords for pair in pairs} == {frozenset({1, 2})}
    assert quiver.adjacent_chord_pairs(QuiverDiagram(C, (0, 0, 1, 0, 1, 0, 1, 1))) == []


def test_reduce_merges_a_parallel_pair():
    d = diagram_lib.parse_gauss("1t 2t 2h 1h")
    assert quiver.cluster_reduce_arrow(d) == QuiverDiagram((1, 1), (0, 2))


def test_cluster_reduction_of_two_clusters():
    # chord 1 of the reference diagram doubled, chord 3 tripled
    d = diagram_lib.parse_gauss("1t 5t 2t 5h 1h 3t 6t 7t 2h 4t 7h 6h 3h 4h")
    reduced = quiver.cluster_reduce_arrow(d)
    assert reduced == QuiverDiagram(C, (0, 0, 2, 0, 1, 0, 3, 1))
    assert reduced.degree == 7


def test_reduce_keeps_reduced_diagrams():
    q = QuiverDiagram(C, (1, 0, 1, 0, 1, 0, 1, 1))
    assert quiver.is_reduced(q)
    assert quiver.reduce(q) == q
    assert quiver.cluster_reduce_arrow(diagram_lib.parse_gauss("1t 2t 1h 3t 2h 4t 3h 4h")) == (
        quiver.from_arrow(diagram_lib.parse_gauss("1t 2t 1h 3t 2h 4t 3h 4h"))
    )


def test_isolated_chord_test():
    assert quiver.is_zero_by_isolated_chord(QuiverDiagram((1, 1), (3, 2)))
    assert not quiver.is_zero_by_isolated_chord(QuiverDiagram())
    assert not quiver.is_zero_by_isolated_chord(QuiverDiagram(C, (0, 0, 1, 0, 1, 0, 1, 1)))


def test_isolated_chord_test_needs_a_reduced_diagram():
    # two crossing chords are adjacent to each other
    with pytest.raises(errors.PreconditionError):
        quiver.is_zero_by_isolated_chord(QuiverDiagram((1, 2, 1, 2), (0, 0, 1, 1)))


@given(quiver_diagrams())
def test_reduce_preserves_degree(q):
    reduced = quiver.reduce(q)
    assert reduced.degree == q.degree
    assert quiver.is_reduced(reduced)
    assert reduced.size <= q.size


@given(quiver_diagrams(), st.integers(0, 2**32))
def test_reduce_is_order_independent(q, seed):
    first = quiver.reduce(q)
    second = quiver.reduce(q, random.Random(seed))
    zero = quiver.is_zero_by_isolated_chord(first)
    assert zero == quiver.is_zero_by_isolated_chord(second)
    if not zero:
        assert first == second


# ----------------------------------------------------------------------
# Basis keys and algebra elements
# ----------------------------------------------------------------------
def test_basis_key_text():
    assert key(pos2=2).text == "deg=5; 0-2:2,1-4:1,3-6:1,5-7:1"
    assert quiver.parse_basis_key("deg=5; 0-2:2,1-4:1,3-6:1,5-7:1") == key(pos2=2)
    assert quiver.EMPTY_KEY.text == "deg=0;"
    assert quiver.parse_basis_key("deg=0;") == quiver.EMPTY_KEY


@pytest.mark.parametrize(
    "text", ["deg=2; 0-1:1", "deg=1; 0-2:1", "0-1:1", "deg=1; 0-1:0", "deg=1; 0-x:1"]
)
def test_parse_basis_key_rejects_invalid_keys(text):
    with pytest.raises(errors.PreconditionError):
        quiver.parse_basis_key(text)


def test_algebra_element_arithmetic():
    a = AlgebraElement(6, Field.Q, {key(pos2=2): 1, quiver.EMPTY_KEY: 1})
    b = AlgebraElement(6, Field.Q, {key(pos2=2): -1})
    total = a + b
    assert total == AlgebraElement.unit(6)
    assert (a - a).is_zero
    assert (2 * b).coefficient(key(pos2=2)) == Fraction(-2)
    assert a.nonempty_part() == AlgebraElement(6, Field.Q, {key(pos2=2): 1})
    assert len(a.truncate(4)) == 1


def test_algebra_element_rejects_high_degree_and_mixed_fields():
    with pytest.raises(errors.PreconditionError):
        AlgebraElement(4, Field.Q, {key(pos2=2): 1})
    with pytest.raises(errors.PreconditionError):
        AlgebraElement.unit(4) + AlgebraElement.unit(4, Field.F2)
    with pytest.raises(errors.PreconditionError):
        AlgebraElement.unit(4).truncate(5)


def test_gf2_drops_even_coefficients():
    element = AlgebraElement(6, Field.F2, {key(pos2=2): 2, key(pos2=3): 3})
    assert element.terms == {key(pos2=3): 1}
    exact = AlgebraElement(6, Field.Q, {key(pos2=2): 2, key(pos2=3): Fraction(-1, 3)})
    assert exact.reduce_mod2() == element
    with pytest.raises(errors.PreconditionError):
        AlgebraElement(6, Field.Q, {key(pos2=2): Fraction(1, 2)}).reduce_mod2()


def test_format_and_parse_algebra_element():
    element = AlgebraElement(6, Field.Q, {key(pos2=3): 1, key(pos2=2): -1})
    assert element.format() == (
        "-1 deg=5; 0-2:2,1-4:1,3-6:1,5-7:1\n1 deg=6; 0-2:3,1-4:1,3-6:1,5-7:1"
    )
    assert quiver.parse_algebra_element(element.format(), 6, Field.Q) == element


# ----------------------------------------------------------------------
# Rewriting
# ----------------------------------------------------------------------
def test_basis_form_rewrites_to_itself():
    q = QuiverDiagram(C, (0, 0, 1, 0, 1, 0, 1, 1))
    assert quiver.rewrite_to_basis(q, 4).terms == {key(): 1}


def test_marked_label_is_pushed_to_the_unmarked_side():
    # chord 1 carries (unmarked, marked) = (1, 1)
    q = QuiverDiagram(C, (1, 0, 1, 0, 1, 0, 1, 1))
    assert quiver.rewrite_to_basis(q, 6).terms == {key(pos2=2): -1, key(pos2=3): 1}
    assert quiver.rewrite_to_basis(q, 5).terms == {key(pos2=2): -1}
    assert quiver.rewrite_to_basis(q, 6, Field.F2).terms == {key(pos2=2): 1, key(pos2=3): 1}


def test_rewriting_above_the_truncation_is_zero():
    q = QuiverDiagram(C, (1, 0, 1, 0, 1, 0, 1, 1))
    assert quiver.rewrite_to_basis(q, 4).is_zero


def test_empty_diagram_rewrites_to_the_unit():
    assert quiver.rewrite_to_basis(QuiverDiagram(), 3) == AlgebraElement.unit(3)


def test_rewriting_needs_a_reduced_diagram_without_isolated_chords():
    with pytest.raises(errors.PreconditionError):
        quiver.rewrite_to_basis(QuiverDiagram((1, 1), (0, 1)), 3)
    with pytest.raises(errors.PreconditionError):
        quiver.rewrite_to_basis(QuiverDiagram((1, 2, 1, 2), (0, 0, 1, 1)), 3)


def test_zero_marking_reproduces_its_key():
    k = BasisKey(C, (1, 2, 0, 0, 0, 1, 1, 0))
    q = QuiverDiagram(C, k.labels)
    assert quiver.frame_key(q) == k
    assert quiver.rewrite_to_basis(q, 6, marking=quiver.zero_marking(k)).terms == {k: 1}


def test_reduced_chord_diagrams():
    assert quiver.reduced_chord_diagrams(1) == []
    assert quiver.reduced_chord_diagrams(2) == []
    assert REFERENCE_CHORDS in quiver.reduced_chord_diagrams(4)


def test_basis_keys_count():
    # compositions of 4..6 into four positive parts: 1 + 4 + 10
    keys = quiver.basis_keys(REFERENCE_CHORDS, 6)
    assert len(keys) == 15
    assert key() in keys
    assert quiver.basis_keys(ChordDiagramU(), 0) == [quiver.EMPTY_KEY]
