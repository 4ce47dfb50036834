import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors, moves
from doodle_ft.common.diagram import ArrowDiagram
from doodle_ft.common.moves import LoopOrientation, MoveKind, Variant
from tests.conftest import arrow_diagrams

parse = diagram_lib.parse_gauss


def test_r1_sites():
    assert moves.find_r1_sites(ArrowDiagram()) == []
    [site] = moves.find_r1_sites(parse("1t 1h"))
    assert site.kind is MoveKind.R1
    assert site.chords == {1}
    assert moves.find_r1_sites(parse("1t 2t 1h 2h")) == []


def test_r2_site_of_a_nested_pair():
    [site] = moves.find_r2_sites(parse("1t 2h 2t 1h"))
    assert site.chords == {1, 2}
    assert site.sites == {frozenset({0, 1}), frozenset({2, 3})}


def test_r2_site_needs_one_tail_and_one_head():
    assert moves.find_r2_sites(parse("1t 2t 2h 1h")) == []


def test_sites_are_ordered_by_position():
    kinds = [(s.kind, sorted(s.chords)) for s in moves.find_sites(parse("1t 2h 2t 1h"))]
    assert kinds == [(MoveKind.R1, [1]), (MoveKind.R2, [1, 2]), (MoveKind.R1, [2])]


def test_delete_moves():
    d = parse("1t 2h 2t 1h")
    [r2] = moves.find_r2_sites(d)
    assert moves.apply_delete(d, r2) == ArrowDiagram()
    [r1] = moves.find_r1_sites(parse("1t 1h"))
    assert moves.apply_delete(parse("1t 1h"), r1).size == 0


def test_delete_rejects_a_stale_site():
    [site] = moves.find_r2_sites(parse("1t 2h 2t 1h"))
    with pytest.raises(errors.StaleSiteError):
        moves.apply_delete(parse("1t 2t 1h 2h 3t 3h"), site)


def test_r1_insertion_into_the_empty_diagram():
    for orientation in LoopOrientation:
        assert moves.apply_r1_insert(ArrowDiagram(), 0, orientation).code == "1t 1h"


def test_r2_insertions_into_the_empty_diagram():
    nested = moves.apply_r2_insert(ArrowDiagram(), 0, 0, Variant.NESTED, 0)
    assert nested == parse("1t 2h 2t 1h")
    crossing = moves.apply_r2_insert(ArrowDiagram(), 0, 0, Variant.CROSSING, 0)
    assert crossing == parse("1t 2t 1h 2h")
    assert len(moves.find_r2_sites(crossing)) == 1
    assert not diagram_lib.is_realizable(crossing)


def test_r2_insertion_into_a_loop_is_a_site():
    inserted = moves.apply_r2_insert(parse("1t 1h"), 0, 1, Variant.NESTED, 0)
    assert inserted.size == 3
    assert any(moves.apply_delete(inserted, s) == parse("1t 1h") for s in moves.find_r2_sites(inserted))


@pytest.mark.parametrize("slot", [-1, 3])
def test_insertions_reject_bad_slots(slot):
    with pytest.raises(errors.SlotError):
        moves.apply_r1_insert(parse("1t 1h"), slot, LoopOrientation.TAIL_FIRST)
    with pytest.raises(errors.SlotError):
        moves.apply_r2_insert(parse("1t 1h"), 0, slot, Variant.NESTED, 0)


def test_r2_insertion_rejects_bad_orientation():
    with pytest.raises(errors.PreconditionError):
        moves.apply_r2_insert(ArrowDiagram(), 0, 0, Variant.NESTED, 2)


@given(arrow_diagrams(), st.data())
def test_insert_then_delete_restores_the_diagram(d, data):
    slot1 = data.draw(st.integers(0, len(d)))
    slot2 = data.draw(st.integers(0, len(d)))
    variant = data.draw(st.sampled_from(list(Variant)))
    orientation = data.draw(st.integers(0, 1))

    looped = moves.apply_r1_insert(d, slot1, data.draw(st.sampled_from(list(LoopOrientation))))
    assert any(moves.apply_delete(looped, s) == d for s in moves.find_r1_sites(looped))

    paired = moves.apply_r2_insert(d, slot1, slot2, variant, orientation)
    assert any(moves.apply_delete(paired, s) == d for s in moves.find_r2_sites(paired))


# ----------------------------------------------------------------------
# Minimization
# ----------------------------------------------------------------------
@pytest.mark.parametrize("code", ["", "1t 1h", "1t 2h 2t 1h", "1t 2t 2h 1h", "1t 2t 1h 2h"])
def test_small_diagrams_minimize_to_empty(code):
    minimal, trace = moves.minimize(parse(code))
    assert minimal == ArrowDiagram()
    assert trace.replay() == minimal


def test_reference_orientation_is_minimal(reference_chords):
    d = parse("1t 2t 1h 3t 2h 4t 3h 4h")
    assert diagram_lib.underlying_chord_diagram(d) == reference_chords
    assert moves.is_minimal(d)
    assert moves.minimize(d)[0] == d


@given(arrow_diagrams(max_chords=6), st.integers(0, 2**32))
def test_minimize_is_confluent(d, seed):
    greedy, trace = moves.minimize(d)
    shuffled, _ = moves.minimize(d, random.Random(seed))
    assert greedy == shuffled
    assert len(trace) <= d.size
    assert trace.replay() == greedy
    assert moves.is_minimal(greedy)


@given(arrow_diagrams(max_chords=4), st.integers(0, 2**32))
def test_random_walks_stay_equivalent(d, seed):
    walked, trace = moves.random_move_walk(d, 8, random.Random(seed), max_chords=8)
    assert trace.replay() == walked
    assert moves.equivalent(d, walked)
    assert moves.equivalent(walked, d)


@given(st.integers(0, 2**32))
def test_planar_walks_keep_realizability(seed):
    d, _ = moves.random_move_walk(ArrowDiagram(), 10, random.Random(seed), planar=True)
    assert diagram_lib.is_realizable(d)
    assert diagram_lib.is_realizable(moves.minimize(d)[0])


def test_equivalent():
    assert moves.equivalent(ArrowDiagram(), parse("1t 1h"))
    d = parse("1t 2t 1h 3t 2h 4t 3h 4h")
    assert moves.equivalent(d, d.rotated(3))
    assert not moves.equivalent(d, ArrowDiagram())
