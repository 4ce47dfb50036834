"""
Provides the doodle census: exhaustive enumeration of arrow diagrams up to
rotation, classification by minimal form and the completeness checks.
"""

import dataclasses
import itertools
import logging
import math
from collections import Counter
from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor

from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors, invariant, moves
from doodle_ft.common.diagram import ArrowDiagram, ChordDiagramU
from doodle_ft.common.invariant import InvariantValue
from doodle_ft.common.reports import CheckResult, VerifyReport
from doodle_ft.common.types import Field, Role

logger = logging.getLogger(__name__)

MAX_SAFE_KMAX = 6
DEFAULT_DIAGRAM_BUDGET = 2_000_000

Checkpoint = Callable[[dict], object]


# ----------------------------------------------------------------------
# Enumeration
# ----------------------------------------------------------------------
def growth_estimate(k: int) -> int:
    """Approximate number of rotation classes with k chords, (2k)! / (k! 2k)."""
    if k == 0:
        return 1
    return math.factorial(2 * k) // (math.factorial(k) * 2 * k)


def enumerate_arrow_diagrams(k: int) -> Iterator[ArrowDiagram]:
    """One canonical representative of every rotation class with exactly k chords."""
    if k < 0:
        raise errors.PreconditionError(f"Chord count must be non-negative, got {k}")
    if k == 0:
        yield ArrowDiagram()
        return
    for chords in diagram_lib.pairings(k):
        spans = diagram_lib.chord_positions(chords)
        for flips in itertools.product((False, True), repeat=k):
            endpoints: list = [None] * (2 * k)
            for (chord, (a, b)), flip in zip(sorted(spans.items()), flips):
                first, second = (Role.HEAD, Role.TAIL) if flip else (Role.TAIL, Role.HEAD)
                endpoints[a], endpoints[b] = (chord, first), (chord, second)
            d = ArrowDiagram(tuple(endpoints))
            if d.endpoints == d.canonical:
                yield d


# ----------------------------------------------------------------------
# Census records
# ----------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class CensusRecord:
    class_id: int
    minimal: ArrowDiagram
    representatives: int
    invariant: InvariantValue

    @property
    def crossings(self) -> int:
        return self.minimal.size

    @property
    def code(self) -> str:
        return diagram_lib.serialize(self.minimal)

    def line(self, invariant_path: str) -> str:
        return (
            f'class={self.class_id} crossings={self.crossings} code="{self.code}" '
            f"reps={self.representatives} invariant={invariant_path}"
        )


@dataclasses.dataclass(frozen=True)
class Census:
    kmax: int
    n: int
    field: Field
    records: tuple[CensusRecord, ...]
    require_realizable: bool = True

    def __len__(self) -> int:
        return len(self.records)

    @property
    def minimal_forms(self) -> set[ArrowDiagram]:
        return {record.minimal for record in self.records}


def _class_order(d: ArrowDiagram) -> tuple[int, str]:
    return d.size, diagram_lib.serialize(d)


def _minimal_form(d: ArrowDiagram) -> ArrowDiagram:
    return moves.minimize(d)[0]


def census_from_classes(
    classes: Counter,
    kmax: int,
    n: int,
    field: Field = Field.Q,
    *,
    workers: int = 1,
    require_realizable: bool = True,
) -> Census:
    """Assigns dense ids by (crossings, canonical code) and computes invariants."""
    ordered = sorted(classes, key=_class_order)
    records = []
    for class_id, minimal in enumerate(ordered):
        value = invariant.diagram_invariant(minimal, n, field, workers=workers)
        records.append(CensusRecord(class_id, minimal, classes[minimal], value))
        logger.debug("Class %d: %s (%d reps)", class_id, minimal, classes[minimal])
    return Census(kmax, n, field, tuple(records), require_realizable)


def census_from_diagrams(
    diagrams: Iterable[ArrowDiagram],
    n: int,
    field: Field = Field.Q,
    *,
    require_realizable: bool = False,
) -> Census:
    """Census of arbitrary diagrams, realizable or not, classified by minimal form."""
    classes: Counter = Counter(_minimal_form(d) for d in diagrams)
    kmax = max((d.size for d in classes), default=0)
    return census_from_classes(
        classes, kmax, n, field, require_realizable=require_realizable
    )


def build_census(
    kmax: int,
    n_extra: int = 1,
    field: Field = Field.Q,
    *,
    workers: int = 1,
    allow_unsafe: bool = False,
    budget: int = DEFAULT_DIAGRAM_BUDGET,
    checkpoint: Checkpoint | None = None,
) -> Census:
    """
    Enumerates every diagram with at most ``kmax`` chords, keeps the realizable
    ones and groups them by minimal form. Invariants are truncated at
    ``kmax + n_extra``.
    """
    if kmax < 0 or n_extra < 0:
        raise errors.PreconditionError("kmax and n_extra must be non-negative")
    if kmax > MAX_SAFE_KMAX and not allow_unsafe:
        raise errors.CensusLimitError(
            f"kmax={kmax} enumerates about {growth_estimate(kmax):,} diagrams at the top "
            f"level; pass the override to go beyond {MAX_SAFE_KMAX}"
        )

    classes: Counter = Counter()
    processed = 0
    for k in range(kmax + 1):
        processed += growth_estimate(k)
        if processed > budget:
            state = {
                "kmax": kmax,
                "completed_k": k - 1,
                "classes": {
                    diagram_lib.serialize(d): classes[d]
                    for d in sorted(classes, key=_class_order)
                },
            }
            path = checkpoint(state) if checkpoint is not None else None
            raise errors.CensusBudgetExceeded(
                f"Diagram budget {budget:,} exhausted at k={k}", checkpoint=path
            )
        realizable = [d for d in enumerate_arrow_diagrams(k) if diagram_lib.is_realizable(d)]
        if workers > 1 and len(realizable) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                minimal_forms = list(pool.map(_minimal_form, realizable))
        else:
            minimal_forms = [_minimal_form(d) for d in realizable]
        classes.update(minimal_forms)
        logger.info(
            "Census k=%d: %d realizable diagrams, %d classes so far", k, len(realizable), len(classes)
        )
    return census_from_classes(classes, kmax, kmax + n_extra, field, workers=workers)


# ----------------------------------------------------------------------
# Verification
# ----------------------------------------------------------------------
def _value_at(record: CensusRecord, n: int, field: Field) -> InvariantValue:
    if record.invariant.n >= n and record.invariant.field == field:
        return invariant.project(record.invariant, n)
    return invariant.diagram_invariant(record.minimal, n, field)


def _check_fixpoints(census: Census) -> CheckResult:
    check = CheckResult(name="minimal_fixpoint")
    for record in census.records:
        check.checked += 1
        if not moves.is_minimal(record.minimal):
            check.fail(f"class {record.class_id} {record.code}: a move site remains")
        elif census.require_realizable and not diagram_lib.is_realizable(record.minimal):
            check.fail(f"class {record.class_id} {record.code}: not realizable")
    return check


def _check_nontriviality(census: Census, field: Field) -> CheckResult:
    check = CheckResult(name="nontriviality")
    for record in census.records:
        if record.crossings == 0:
            continue
        check.checked += 1
        value = _value_at(record, record.crossings, field)
        if value.element.nonempty_part().is_zero:
            check.fail(f"class {record.class_id} {record.code}: trivial at n={record.crossings}")
    return check


def _check_distinctness(census: Census, field: Field) -> CheckResult:
    n = census.kmax + 1
    check = CheckResult(name="distinctness", notes=f"truncation n={n}")
    seen: dict[str, CensusRecord] = {}
    for record in census.records:
        check.checked += 1
        text = _value_at(record, n, field).element.format()
        other = seen.setdefault(text, record)
        if other is not record:
            check.fail(f"classes {other.class_id} and {record.class_id} share an invariant")
    return check


def _check_leading_coefficients(census: Census, field: Field) -> CheckResult:
    check = CheckResult(name="leading_coefficient")
    for record in census.records:
        try:
            value = invariant.leading_coefficient(
                record.minimal, max(record.crossings, census.kmax), field
            )
        except errors.PreconditionError as exc:
            check.skipped += 1
            logger.debug("Leading coefficient of %s skipped: %s", record.code, exc)
            continue
        check.checked += 1
        if value != 1:
            check.fail(f"class {record.class_id} {record.code}: coefficient {value}")
    return check


def _check_direction_witnesses(census: Census, field: Field) -> CheckResult:
    check = CheckResult(name="direction_witness")
    n = max(census.kmax, 1)
    for first, second in itertools.permutations(census.records, 2):
        witness = invariant.direction_witness(first.minimal, second.minimal, n, field)
        if witness is None:
            continue
        check.checked += 1
        if witness[0] != 0 or witness[1] == 0:
            check.fail(
                f"classes {first.class_id}, {second.class_id}: witness coefficients {witness}"
            )
    return check


def verify_theorems(census: Census, field: Field | None = None) -> VerifyReport:
    """Runs every completeness check; failures are report content, not errors."""
    field = field or census.field
    report = VerifyReport(
        kmax=census.kmax, n=census.n, field=str(field), classes=len(census.records)
    )
    report.checks = [
        _check_fixpoints(census),
        _check_nontriviality(census, field),
        _check_distinctness(census, field),
        _check_leading_coefficients(census, field),
        _check_direction_witnesses(census, field),
    ]
    logger.info("Verified census kmax=%d over %s: passed=%s", census.kmax, field, report.passed)
    return report


def with_duplicate(census: Census, class_id: int) -> Census:
    """Copy of ``census`` with one record repeated under a fresh id."""
    source = census.records[class_id]
    copy = dataclasses.replace(source, class_id=len(census.records))
    return dataclasses.replace(census, records=census.records + (copy,))


def realizable_minimal_forms(kmax: int) -> set[ArrowDiagram]:
    """Minimal forms of all realizable diagrams with at most kmax chords."""
    return {
        _minimal_form(d)
        for k in range(kmax + 1)
        for d in enumerate_arrow_diagrams(k)
        if diagram_lib.is_realizable(d)
    }


def class_lookup(census: Census) -> dict[ArrowDiagram, CensusRecord]:
    return {record.minimal: record for record in census.records}


def classify(census: Census, diagrams: Sequence[ArrowDiagram]) -> list[int | None]:
    """Class id of each diagram's minimal form, ``None`` when not in the census."""
    lookup = class_lookup(census)
    return [
        record.class_id if (record := lookup.get(_minimal_form(d))) else None
        for d in diagrams
    ]


def orientations(c: ChordDiagramU) -> list[ArrowDiagram]:
    """Every arrow diagram over the chord diagram ``c``, one per direction choice."""
    chords = c.canonical
    spans = sorted(diagram_lib.chord_positions(chords).items())
    found = []
    for flips in itertools.product((False, True), repeat=len(spans)):
        endpoints: list = [None] * len(chords)
        for (chord, (a, b)), flip in zip(spans, flips):
            endpoints[a] = (chord, Role.HEAD if flip else Role.TAIL)
            endpoints[b] = (chord, Role.TAIL if flip else Role.HEAD)
        found.append(ArrowDiagram(tuple(endpoints)))
    return found
