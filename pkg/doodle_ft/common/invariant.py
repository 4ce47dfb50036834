"""Provides the subdiagram-sum invariant of arrow diagrams."""

import dataclasses
import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors, moves, quiver
from doodle_ft.common.diagram import ArrowDiagram
from doodle_ft.common.quiver import AlgebraElement, BasisKey, Marking
from doodle_ft.common.types import Coefficient, Field, parse_field

logger = logging.getLogger(__name__)

DEFAULT_MAX_CHORDS = 16


@dataclasses.dataclass(frozen=True)
class InvariantValue:
    """Truncated invariant of one diagram, kept with its canonical form."""

    diagram: ArrowDiagram
    element: AlgebraElement

    @property
    def n(self) -> int:
        return self.element.n

    @property
    def field(self) -> Field:
        return self.element.field

    @property
    def header(self) -> str:
        return f"diagram={diagram_lib.serialize(self.diagram)} n={self.n} field={self.field}"

    def format(self) -> str:
        body = self.element.format()
        return f"{self.header}\n{body}" if body else self.header


def parse_invariant(text: str) -> InvariantValue:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("diagram="):
        raise errors.PreconditionError("Missing invariant header line")
    header = lines[0]
    code, _, rest = header[len("diagram="):].partition(" n=")
    n_text, _, field_text = rest.partition(" field=")
    try:
        n, field = int(n_text), parse_field(field_text)
    except ValueError as exc:
        raise errors.PreconditionError(f"Invalid invariant header {header!r}") from exc
    element = quiver.parse_algebra_element("\n".join(lines[1:]), n, field)
    return InvariantValue(diagram_lib.parse_gauss(code), element)


# ----------------------------------------------------------------------
# Subset expansion
# ----------------------------------------------------------------------
def subset_masks(chords: int, limit: int) -> list[int]:
    """Chord subsets of size <= limit, by popcount and then binary value."""
    masks = [m for m in range(1 << chords) if m.bit_count() <= limit]
    return sorted(masks, key=lambda m: (m.bit_count(), m))


def subset_counts(
    d: ArrowDiagram, mask: int, n: int, marking: Marking | None = None
) -> dict[BasisKey, int]:
    """Integer contribution of one chord subset."""
    kept = [c for c in range(1, d.size + 1) if mask >> (c - 1) & 1]
    q = quiver.reduce(quiver.from_arrow(diagram_lib.subdiagram(d, kept)))
    if quiver.is_zero_by_isolated_chord(q):
        return {}
    return quiver.rewrite_counts(q, n, marking)


def _chunk_counts(
    d: ArrowDiagram, masks: Sequence[int], n: int, marking: Marking | None
) -> dict[BasisKey, int]:
    total: dict[BasisKey, int] = {}
    for mask in masks:
        for key, value in subset_counts(d, mask, n, marking).items():
            total[key] = total.get(key, 0) + value
    return total


def invariant_counts(
    d: ArrowDiagram,
    n: int,
    *,
    marking: Marking | None = None,
    workers: int = 1,
    max_chords: int = DEFAULT_MAX_CHORDS,
) -> dict[BasisKey, int]:
    if n < 0:
        raise errors.PreconditionError(f"Truncation degree must be non-negative, got {n}")
    if d.size > max_chords:
        raise errors.InvariantSizeError(
            f"Diagram has {d.size} chords; the exact invariant accepts at most {max_chords}"
        )
    # subsets with more than n chords have degree above n
    masks = subset_masks(d.size, n)
    if workers <= 1 or len(masks) < 64:
        chunks = [_chunk_counts(d, masks, n, marking)]
    else:
        step = -(-len(masks) // workers)
        parts = [masks[i : i + step] for i in range(0, len(masks), step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda part: _chunk_counts(d, part, n, marking), parts))

    total: dict[BasisKey, int] = {}
    for chunk in chunks:
        for key, value in chunk.items():
            total[key] = total.get(key, 0) + value
    logger.debug("Invariant of %r at n=%d: %d subsets, %d keys", d.code, n, len(masks), len(total))
    return total


def diagram_invariant(
    d: ArrowDiagram,
    n: int,
    field: Field = Field.Q,
    *,
    marking: Marking | None = None,
    workers: int = 1,
    max_chords: int = DEFAULT_MAX_CHORDS,
) -> InvariantValue:
    counts = invariant_counts(
        d, n, marking=marking, workers=workers, max_chords=max_chords
    )
    return InvariantValue(
        diagram_lib.canonical_form(d), AlgebraElement.from_counts(n, field, counts)
    )


def project(v: InvariantValue, n: int) -> InvariantValue:
    return InvariantValue(v.diagram, v.element.truncate(n))


# ----------------------------------------------------------------------
# Comparisons
# ----------------------------------------------------------------------
def nontriviality(d: ArrowDiagram, n: int, field: Field = Field.Q, **kwargs) -> bool:
    """Nonzero coefficient on some nonempty key; the empty key is always 1."""
    return not diagram_invariant(d, n, field, **kwargs).element.nonempty_part().is_zero


def distinguishes(
    d1: ArrowDiagram, d2: ArrowDiagram, n: int, field: Field = Field.Q, **kwargs
) -> bool:
    return (
        diagram_invariant(d1, n, field, **kwargs).element
        != diagram_invariant(d2, n, field, **kwargs).element
    )


def leading_key(d: ArrowDiagram) -> tuple[BasisKey, Marking]:
    """
    The key of the cluster-reduced diagram of ``d`` in the marking of its tails,
    together with that marking.
    Requires an asymmetric chord diagram without isolated chords.
    """
    r = quiver.cluster_reduce_arrow(d)
    if diagram_lib.isolated_chord_ids(r.chords):
        raise errors.PreconditionError(f"Cluster reduction of {d.code!r} has an isolated chord")
    key = quiver.frame_key(r)
    return key, quiver.zero_marking(key)


def leading_coefficient(
    d: ArrowDiagram, n: int, field: Field = Field.Q, **kwargs
) -> Coefficient:
    """Coefficient of the cluster-reduced diagram in the invariant of a minimal diagram."""
    if not moves.is_minimal(diagram_lib.canonical_form(d)):
        raise errors.PreconditionError(f"{d.code!r} is not minimal")
    if d.size > n:
        raise errors.PreconditionError(f"{d.code!r} has more than {n} chords")
    if d.size == 0:
        return diagram_invariant(d, n, field, **kwargs).element.coefficient(quiver.EMPTY_KEY)
    key, marking = leading_key(d)
    value = diagram_invariant(d, n, field, marking=marking, **kwargs)
    return value.element.coefficient(key)


def direction_witness(
    d1: ArrowDiagram, d2: ArrowDiagram, n: int, field: Field = Field.Q, **kwargs
) -> tuple[Coefficient, Coefficient] | None:
    """
    For reduced diagrams over one asymmetric chord diagram that differ in
    chord directions: the coefficients of the witness key (the key of d1 with
    one reversed chord's label raised by 1) in both invariants at n + 1.

    Returns ``None`` when the hypothesis does not hold.
    """
    r1, r2 = quiver.from_arrow(d1), quiver.from_arrow(d2)
    if not (quiver.is_reduced(r1) and quiver.is_reduced(r2)):
        return None
    if r1.underlying != r2.underlying or r1.underlying.symmetry_order != 1 or r1 == r2:
        return None
    if diagram_lib.isolated_chord_ids(r1.chords):
        return None
    key1 = quiver.frame_key(r1)
    _, labels2 = quiver.canonical_frames(r2)[0]
    differing = next(p for p, label in enumerate(key1.labels) if label and not labels2[p])
    witness_labels = list(key1.labels)
    witness_labels[differing] += 1
    witness = BasisKey(key1.chords, tuple(witness_labels))
    marking = quiver.zero_marking(key1)
    first = diagram_invariant(d1, n + 1, field, marking=marking, **kwargs)
    second = diagram_invariant(d2, n + 1, field, marking=marking, **kwargs)
    return first.element.coefficient(witness), second.element.coefficient(witness)
