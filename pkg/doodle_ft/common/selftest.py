"""Provides the seeded self-test that exercises the library's headline properties."""

import logging
import random
from collections.abc import Callable

from doodle_ft.common import census as census_lib
from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors, invariant, moves, oracles, quiver, tangles
from doodle_ft.common.diagram import ArrowDiagram, ChordDiagramU
from doodle_ft.common.quiver import QuiverDiagram
from doodle_ft.common.reports import CheckResult, SelftestReport
from doodle_ft.common.types import Field

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 200
REFERENCE_CHORDS = ChordDiagramU((1, 2, 3, 4, 3, 1, 4, 2))


def random_quiver(chords: int, rng: random.Random, max_label: int = 2) -> QuiverDiagram:
    sequence = diagram_lib.random_diagram(chords, rng).chords
    labels = [rng.randint(0, max_label) for _ in sequence]
    for a, b in diagram_lib.chord_positions(sequence).values():
        if labels[a] + labels[b] == 0:
            labels[rng.choice((a, b))] = 1
    return QuiverDiagram(sequence, tuple(labels))


# ----------------------------------------------------------------------
# Checks
# ----------------------------------------------------------------------
def check_move_invariance(
    samples: int, rng: random.Random, field: Field = Field.Q
) -> CheckResult:
    check = CheckResult(name=f"move_invariance[{field}]")
    for _ in range(samples):
        d = diagram_lib.random_diagram(rng.randint(0, 5), rng)
        walked, trace = moves.random_move_walk(d, rng.randint(1, 12), rng, max_chords=8)
        n = rng.randint(4, 6)
        check.checked += 1
        if (
            invariant.diagram_invariant(d, n, field).element
            != invariant.diagram_invariant(walked, n, field).element
        ):
            check.fail(f"{d} -> {walked} ({len(trace)} moves, n={n})")
    return check


def check_completeness(kmax: int, field: Field = Field.Q) -> list[CheckResult]:
    results = []
    realizable = census_lib.verify_theorems(census_lib.build_census(kmax, field=field))
    reference = census_lib.verify_theorems(
        census_lib.census_from_diagrams(
            census_lib.orientations(REFERENCE_CHORDS), REFERENCE_CHORDS.size + 1, field
        )
    )
    for prefix, report in (("census", realizable), ("reference", reference)):
        for check in report.checks:
            results.append(check.model_copy(update={"name": f"{prefix}.{check.name}[{field}]"}))
    return results


def check_basis(samples: int, rng: random.Random) -> CheckResult:
    check = CheckResult(name="basis_soundness")
    candidates = [c for c in quiver.reduced_chord_diagrams(4) if c.symmetry_order == 1]
    for c in candidates:
        for n in (4, 5):
            check.checked += 1
            for field in Field:
                if not oracles.basis_is_sound(c, n, field):
                    check.fail(f"C={c} n={n} over {field}")
    for _ in range(samples):
        c = rng.choice(candidates)
        n = rng.choice((4, 5, 6))
        labels = rng.choice(quiver.labelings(c, n))
        q = QuiverDiagram(c.canonical, labels)
        check.checked += 1
        rewritten = dict(quiver.rewrite_to_basis(q, n).terms)
        expected = {k: v for k, v in oracles.oracle_coordinates(q, n).items() if v}
        if rewritten != expected:
            check.fail(f"{q} at n={n}")
    return check


def check_confluence(samples: int, rng: random.Random) -> CheckResult:
    check = CheckResult(name="reduction_confluence")
    for _ in range(samples):
        q = random_quiver(rng.randint(0, 7), rng)
        first = quiver.reduce(q, random.Random(rng.random()))
        second = quiver.reduce(q, random.Random(rng.random()))
        check.checked += 1
        zero = quiver.is_zero_by_isolated_chord(first)
        if zero != quiver.is_zero_by_isolated_chord(second) or (not zero and first != second):
            check.fail(f"{q}: {first} vs {second}")
    return check


def check_finite_type_kernel() -> CheckResult:
    check = CheckResult(name="finite_type_kernel")
    for k in (3, 4, 5):
        terms = tangles.resolution_subdiagram_sum(tangles.star_tangle(k))
        degree = tangles.min_chord_degree(terms)
        check.checked += 1
        if degree < k - 1:
            check.fail(f"k={k}: a term with {degree} chords survives")
        if k == 3:
            positive = sum(1 for c in terms.values() if c > 0)
            if (len(terms), positive, degree) != (8, 4, 2):
                check.fail(f"k=3: {len(terms)} terms, {positive} positive, degree {degree}")
    return check


def check_singular_vanishing(samples: int, rng: random.Random) -> CheckResult:
    check = CheckResult(name="singular_vanishing")
    for _ in range(samples):
        k = rng.choice((3, 4, 5))
        site = tangles.star_tangle(k)
        host = diagram_lib.random_diagram(rng.randint(0, 3), rng)
        slots = [rng.randint(0, len(host)) for _ in range(k)]
        for n in range(k - 2):
            check.checked += 1
            value = tangles.singular_invariant(site, host, slots, n)
            if not value.nonempty_part().is_zero:
                check.fail(f"k={k} host={host} slots={slots} n={n}")
    return check


def check_truncation(samples: int, rng: random.Random) -> CheckResult:
    check = CheckResult(name="truncation_compatibility")
    for _ in range(samples):
        d = diagram_lib.random_diagram(rng.randint(0, 7), rng)
        n = rng.randint(3, 6)
        check.checked += 1
        upper = invariant.diagram_invariant(d, n + 1)
        if invariant.project(upper, n).element != invariant.diagram_invariant(d, n).element:
            check.fail(f"{d} at n={n}")
    return check


def check_mod2(samples: int, rng: random.Random) -> CheckResult:
    check = CheckResult(name="gf2_consistency")
    for _ in range(samples):
        d = diagram_lib.random_diagram(rng.randint(0, 7), rng)
        n = rng.randint(4, 6)
        check.checked += 1
        exact = invariant.diagram_invariant(d, n, Field.Q).element
        if exact.reduce_mod2() != invariant.diagram_invariant(d, n, Field.F2).element:
            check.fail(f"{d} at n={n}")
    return check


def check_realizability(samples: int, rng: random.Random) -> CheckResult:
    check = CheckResult(name="realizability")
    for _ in range(samples):
        d, _ = moves.random_move_walk(ArrowDiagram(), rng.randint(1, 12), rng, planar=True)
        check.checked += 1
        if not diagram_lib.is_realizable(d):
            check.fail(f"walk produced non-realizable {d}")
        elif not diagram_lib.is_realizable(moves.minimize(d)[0]):
            check.fail(f"minimizing {d} lost realizability")
    for k in range(4):
        check.checked += 1
        enumerated = {
            d for d in census_lib.enumerate_arrow_diagrams(k) if diagram_lib.is_realizable(d)
        }
        if enumerated != oracles.planar_closure(k):
            check.fail(f"k={k}: realizable set differs from the small-curve oracle")
    return check


# ----------------------------------------------------------------------
def run_selftest(samples: int = DEFAULT_SAMPLES, seed: int = 0, kmax: int = 4) -> SelftestReport:
    """
    Runs every check; ``samples`` scales the randomized ones. Each check gets
    its own generator derived from ``seed``.
    """
    if samples < 1:
        raise errors.PreconditionError(f"samples must be positive, got {samples}")
    report = SelftestReport(samples=samples, seed=seed)

    def run(name: str, build: Callable[[random.Random], CheckResult | list[CheckResult]]) -> None:
        logger.info("Selftest: %s", name)
        result = build(random.Random(f"{seed}:{name}"))
        report.checks.extend(result if isinstance(result, list) else [result])

    few = max(1, samples // 10)
    run("moves", lambda rng: check_move_invariance(samples, rng))
    run("moves-gf2", lambda rng: check_move_invariance(few, rng, Field.F2))
    run("completeness", lambda _: check_completeness(kmax))
    run("completeness-gf2", lambda _: check_completeness(kmax, Field.F2))
    run("basis", lambda rng: check_basis(min(samples, 100), rng))
    run("confluence", lambda rng: check_confluence(samples, rng))
    run("kernel", lambda _: check_finite_type_kernel())
    run("singular", lambda rng: check_singular_vanishing(max(20, few), rng))
    run("truncation", lambda rng: check_truncation(samples, rng))
    run("mod2", lambda rng: check_mod2(samples, rng))
    run("realizability", lambda rng: check_realizability(samples, rng))
    logger.info("Selftest finished: passed=%s", report.passed)
    return report
