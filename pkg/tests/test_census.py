import pytest

from doodle_ft.common import census as census_lib
from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors, oracles
from doodle_ft.common.diagram import ArrowDiagram
from doodle_ft.common.types import Field
from tests.conftest import REFERENCE_CHORDS


def check(report, name):
    return next(c for c in report.checks if c.name == name)


def test_growth_estimate():
    expected = [1, 1, 3, 20, 210, 3024, 55440, 1235520, 32432400]
    assert [census_lib.growth_estimate(k) for k in range(9)] == expected


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_enumeration_matches_burnside(k):
    found = list(census_lib.enumerate_arrow_diagrams(k))
    assert len(found) == oracles.burnside_count(k)
    assert len(set(found)) == len(found)


def test_enumeration_rejects_negative_counts():
    with pytest.raises(errors.PreconditionError):
        list(census_lib.enumerate_arrow_diagrams(-1))


def test_small_census_has_only_the_trivial_class():
    census = census_lib.build_census(2)
    assert len(census) == 1
    [record] = census.records
    assert record.minimal == ArrowDiagram()
    # one empty, one loop and three realizable two-chord classes
    assert record.representatives == 5
    assert census.n == 3
    assert record.line("invariants/class_0000.txt") == (
        'class=0 crossings=0 code="" reps=5 invariant=invariants/class_0000.txt'
    )


@pytest.mark.parametrize("workers", [1, 3])
def test_census_is_independent_of_workers(workers):
    census = census_lib.build_census(3, workers=workers)
    assert census.minimal_forms == {ArrowDiagram()}
    assert census_lib.realizable_minimal_forms(3) == {ArrowDiagram()}


def test_census_limit():
    with pytest.raises(errors.CensusLimitError):
        census_lib.build_census(7)
    with pytest.raises(errors.PreconditionError):
        census_lib.build_census(-1)


def test_budget_writes_a_checkpoint():
    states = []

    def checkpoint(state):
        states.append(state)
        return "checkpoint.json"

    with pytest.raises(errors.CensusBudgetExceeded) as excinfo:
        census_lib.build_census(3, budget=2, checkpoint=checkpoint)
    assert excinfo.value.checkpoint == "checkpoint.json"
    assert states == [{"kmax": 3, "completed_k": 1, "classes": {"": 2}}]


def test_verify_small_census():
    report = census_lib.verify_theorems(census_lib.build_census(3))
    assert report.passed
    assert report.classes == 1
    assert check(report, "leading_coefficient").checked == 1


def test_duplicate_class_breaks_distinctness():
    census = census_lib.with_duplicate(census_lib.build_census(2), 0)
    report = census_lib.verify_theorems(census)
    assert not report.passed
    assert not check(report, "distinctness").passed
    assert check(report, "minimal_fixpoint").passed


def test_nonminimal_record_breaks_the_fixpoint_check():
    census = census_lib.census_from_classes(
        {diagram_lib.parse_gauss("1t 1h"): 1}, 1, 2
    )
    assert not check(census_lib.verify_theorems(census), "minimal_fixpoint").passed


@pytest.mark.parametrize("field", list(Field))
def test_reference_orientations_are_complete(field):
    diagrams = census_lib.orientations(REFERENCE_CHORDS)
    assert len(diagrams) == 16
    census = census_lib.census_from_diagrams(diagrams, 5, field)
    assert len(census) == 16
    assert census.kmax == 4
    report = census_lib.verify_theorems(census)
    assert report.passed, report.checks
    assert check(report, "nontriviality").checked == 16
    assert check(report, "direction_witness").checked == 16 * 15


def test_classify():
    census = census_lib.build_census(2)
    found = census_lib.classify(
        census, [diagram_lib.parse_gauss("1t 2h 2t 1h"), diagram_lib.parse_gauss("1t 2t 1h 3t 2h 4t 3h 4h")]
    )
    assert found == [0, None]
