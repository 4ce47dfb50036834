import random

import pytest

from doodle_ft.common import errors, selftest
from doodle_ft.common.types import Field


def test_random_quiver_is_valid(rng):
    for chords in range(6):
        q = selftest.random_quiver(chords, rng)
        assert q.size == chords
        assert all(label >= 0 for label in q.labels)


@pytest.mark.parametrize("field", list(Field))
def test_move_invariance_check(field):
    result = selftest.check_move_invariance(5, random.Random(1), field)
    assert result.passed, result.counterexamples
    assert result.checked == 5


def test_confluence_and_kernel_checks():
    assert selftest.check_confluence(20, random.Random(2)).passed
    assert selftest.check_finite_type_kernel().passed


def test_truncation_and_mod2_checks():
    assert selftest.check_truncation(5, random.Random(3)).passed
    assert selftest.check_mod2(5, random.Random(4)).passed


def test_singular_vanishing_check():
    result = selftest.check_singular_vanishing(4, random.Random(5))
    assert result.passed
    assert result.checked > 0


def test_realizability_check():
    result = selftest.check_realizability(10, random.Random(6))
    assert result.passed, result.counterexamples
    assert result.checked == 14


def test_completeness_check_names():
    results = selftest.check_completeness(2)
    assert all(r.passed for r in results)
    assert {r.name for r in results} >= {"census.distinctness[Q]", "reference.distinctness[Q]"}


@pytest.mark.slow
def test_basis_check():
    assert selftest.check_basis(5, random.Random(7)).passed


@pytest.mark.slow
def test_run_selftest_is_reproducible():
    first = selftest.run_selftest(2, seed=11, kmax=2)
    second = selftest.run_selftest(2, seed=11, kmax=2)
    assert first.passed
    assert [c.model_dump() for c in first.checks] == [c.model_dump() for c in second.checks]


def test_run_selftest_needs_samples():
    with pytest.raises(errors.PreconditionError):
        selftest.run_selftest(0)
