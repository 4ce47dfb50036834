"""
Provides quiver diagrams, their reduction and normal forms.

A quiver diagram is a chord diagram with non-negative endpoint labels. The
algebra is spanned by quiver diagrams modulo reduction, vanishing of diagrams
with an isolated chord and the local relation

    D(p, q) = -D(p + 1, q - 1) - D(p + 1, q)

for a chord with unmarked label p and marked label q. Diagrams of degree above
the truncation n vanish. Normal forms carry label 0 on every marked endpoint.
"""

import dataclasses
import functools
import itertools
import logging
import random
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction

from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors
from doodle_ft.common.diagram import Adjacency, ArrowDiagram, ChordDiagramU
from doodle_ft.common.types import (
    ChordId,
    Coefficient,
    Field,
    Position,
    format_coefficient,
    parse_coefficient,
    to_field,
)
from doodle_ft.common.util import memo

logger = logging.getLogger(__name__)

# canonical chord sequence of C -> canonical positions of the marked endpoints
Marking = Mapping[tuple[ChordId, ...], frozenset[Position]]


# ----------------------------------------------------------------------
# Quiver diagrams
# ----------------------------------------------------------------------
def _relabel_pairs(seq) -> tuple:
    ids = diagram_lib.renumber_ids(chord for chord, _ in seq)
    return tuple(zip(ids, (label for _, label in seq)))


@dataclasses.dataclass(frozen=True, eq=False)
class QuiverDiagram:
    chords: tuple[ChordId, ...] = ()
    labels: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(self.chords) != len(self.labels):
            raise errors.PreconditionError("Expected one label per endpoint")
        underlying = ChordDiagramU(self.chords)
        if any(label < 0 for label in self.labels):
            raise errors.PreconditionError("Labels must be non-negative")
        for chord, (a, b) in diagram_lib.chord_positions(self.chords).items():
            if self.labels[a] + self.labels[b] < 1:
                raise errors.PreconditionError(f"Chord {chord} has label sum 0")
        object.__setattr__(self, "chords", underlying.chords)

    @property
    def size(self) -> int:
        return len(self.chords) // 2

    @property
    def degree(self) -> int:
        return sum(self.labels)

    @property
    def underlying(self) -> ChordDiagramU:
        return ChordDiagramU(self.chords)

    @functools.cached_property
    def canonical(self) -> tuple:
        best, _ = diagram_lib.least_rotations(
            tuple(zip(self.chords, self.labels)), _relabel_pairs
        )
        return best

    def rotated(self, shift: int) -> "QuiverDiagram":
        return QuiverDiagram(
            diagram_lib.rotate(self.chords, shift), diagram_lib.rotate(self.labels, shift)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuiverDiagram):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __str__(self) -> str:
        return " ".join(f"{chord}:{label}" for chord, label in self.canonical)


def degree(q: QuiverDiagram) -> int:
    return q.degree


def from_arrow(d: ArrowDiagram) -> QuiverDiagram:
    """Tails carry label 0, heads label 1."""
    return QuiverDiagram(d.chords, tuple(int(role) for _, role in d.endpoints))


def adjacent_chord_pairs(q: QuiverDiagram) -> list[Adjacency]:
    return diagram_lib.adjacent_chord_sites(q.chords)


def merge(q: QuiverDiagram, adjacency: Adjacency) -> QuiverDiagram:
    """Merges the second chord of an adjacent pair into the first, adding labels."""
    labels = list(q.labels)
    (i, j), (oi, oj) = adjacency.near, adjacency.far
    labels[i] += labels[j]
    labels[oi] += labels[oj]
    dropped = {j, oj}
    return QuiverDiagram(
        tuple(c for p, c in enumerate(q.chords) if p not in dropped),
        tuple(label for p, label in enumerate(labels) if p not in dropped),
    )


def reduce(q: QuiverDiagram, rng: random.Random | None = None) -> QuiverDiagram:
    """
    Merges adjacent chord pairs until none is left.

    The result does not depend on the merge order, except for a lone pair of
    crossing chords, whose two merges give one isolated chord either way.
    """
    current = q
    while pairs := adjacent_chord_pairs(current):
        pair = rng.choice(pairs) if rng is not None else pairs[0]
        current = merge(current, pair)
    return current


def is_reduced(q: QuiverDiagram) -> bool:
    return not adjacent_chord_pairs(q)


def is_zero_by_isolated_chord(q: QuiverDiagram) -> bool:
    if not is_reduced(q):
        raise errors.PreconditionError("Isolated-chord test needs a reduced diagram")
    return bool(diagram_lib.isolated_chord_ids(q.chords))


def cluster_reduce_arrow(d: ArrowDiagram) -> QuiverDiagram:
    return reduce(from_arrow(d))


# ----------------------------------------------------------------------
# Basis keys
# ----------------------------------------------------------------------
@dataclasses.dataclass(frozen=True, order=True)
class BasisKey:
    """
    Normal-form quiver diagram in the canonical frame of its chord diagram.

    ``labels`` is positional; every chord has exactly one endpoint with label 0
    (the marked one) and a positive label on the other.
    """

    chords: tuple[ChordId, ...] = ()
    labels: tuple[int, ...] = ()

    @property
    def degree(self) -> int:
        return sum(self.labels)

    @property
    def size(self) -> int:
        return len(self.chords) // 2

    @functools.cached_property
    def text(self) -> str:
        entries = []
        for chord, (a, b) in sorted(
            diagram_lib.chord_positions(self.chords).items(), key=lambda kv: kv[1]
        ):
            marked, unmarked = (a, b) if self.labels[a] == 0 else (b, a)
            entries.append(f"{marked}-{unmarked}:{self.labels[unmarked]}")
        return f"deg={self.degree}; {','.join(entries)}".rstrip()

    def __str__(self) -> str:
        return self.text


EMPTY_KEY = BasisKey()


def parse_basis_key(text: str) -> BasisKey:
    """Parses ``deg=<d>; <marked>-<unmarked>:<label>,...``."""
    head, _, body = text.strip().partition(";")
    if not head.startswith("deg="):
        raise errors.PreconditionError(f"Invalid basis key {text!r}")
    entries = [entry for entry in body.replace(" ", "").split(",") if entry]
    chords = [0] * (2 * len(entries))
    labels = [0] * (2 * len(entries))
    try:
        stated = int(head[len("deg="):])
        for chord, entry in enumerate(entries, 1):
            span, _, label = entry.partition(":")
            marked, _, unmarked = span.partition("-")
            chords[int(marked)] = chord
            chords[int(unmarked)] = chord
            labels[int(unmarked)] = int(label)
            if int(label) < 1:
                raise ValueError(f"unmarked label {label} below 1")
    except (ValueError, IndexError) as exc:
        raise errors.PreconditionError(f"Invalid basis key {text!r}") from exc
    if 0 in chords or sorted(chords) != sorted(2 * list(range(1, len(entries) + 1))):
        raise errors.PreconditionError(f"Basis key {text!r} does not pair its positions")
    key = BasisKey(diagram_lib.renumber_ids(chords), tuple(labels))
    if key.degree != stated:
        raise errors.PreconditionError(f"Basis key {text!r} states the wrong degree")
    return key


# ----------------------------------------------------------------------
# Algebra elements
# ----------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class AlgebraElement:
    """Finite combination of basis keys of degree <= n over Q or GF2."""

    n: int
    field: Field = Field.Q
    terms: Mapping[BasisKey, Coefficient] = dataclasses.field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise errors.PreconditionError(f"Truncation degree must be non-negative, got {self.n}")
        cleaned: dict[BasisKey, Coefficient] = {}
        for key, value in self.terms.items():
            if key.degree > self.n:
                raise errors.PreconditionError(
                    f"Key {key} has degree above the truncation {self.n}"
                )
            coefficient = _coerce(self.field, value)
            if coefficient:
                cleaned[key] = coefficient
        object.__setattr__(self, "terms", cleaned)

    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, n: int, field: Field = Field.Q) -> "AlgebraElement":
        return cls(n, field)

    @classmethod
    def unit(cls, n: int, field: Field = Field.Q) -> "AlgebraElement":
        return cls(n, field, {EMPTY_KEY: 1})

    @classmethod
    def from_counts(
        cls, n: int, field: Field, counts: Mapping[BasisKey, int]
    ) -> "AlgebraElement":
        return cls(n, field, {key: to_field(field, value) for key, value in counts.items()})

    # ------------------------------------------------------------------
    def _check(self, other: "AlgebraElement") -> None:
        if (self.n, self.field) != (other.n, other.field):
            raise errors.PreconditionError(
                f"Cannot combine elements of ({self.n}, {self.field}) and ({other.n}, {other.field})"
            )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        terms = dict(self.terms)
        for key, value in other.terms.items():
            terms[key] = terms.get(key, 0) + value
        return AlgebraElement(self.n, self.field, terms)

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, factor: Coefficient) -> "AlgebraElement":
        return AlgebraElement(
            self.n, self.field, {key: value * factor for key, value in self.terms.items()}
        )

    def __mul__(self, factor: Coefficient) -> "AlgebraElement":
        return self.scale(factor)

    __rmul__ = __mul__

    # ------------------------------------------------------------------
    def coefficient(self, key: BasisKey) -> Coefficient:
        return self.terms.get(key, _coerce(self.field, 0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def nonempty_part(self) -> "AlgebraElement":
        return AlgebraElement(
            self.n, self.field, {k: v for k, v in self.terms.items() if k != EMPTY_KEY}
        )

    def truncate(self, n: int) -> "AlgebraElement":
        """Degree-<= n part, as an element of the n-th truncation."""
        if n < 0:
            raise errors.PreconditionError(f"Truncation degree must be non-negative, got {n}")
        if n > self.n:
            raise errors.PreconditionError(f"Cannot project from {self.n} up to {n}")
        return AlgebraElement(
            n, self.field, {k: v for k, v in self.terms.items() if k.degree <= n}
        )

    def reduce_mod2(self) -> "AlgebraElement":
        terms = {}
        for key, value in self.terms.items():
            value = Fraction(value)
            if value.denominator % 2 == 0:
                raise errors.PreconditionError(f"Coefficient {value} has no image in GF2")
            terms[key] = (value.numerator * pow(value.denominator, -1, 2)) % 2
        return AlgebraElement(self.n, Field.F2, terms)

    def sorted_terms(self) -> list[tuple[BasisKey, Coefficient]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].text)

    def format(self) -> str:
        return "\n".join(
            f"{format_coefficient(value)} {key.text}" for key, value in self.sorted_terms()
        )

    def __len__(self) -> int:
        return len(self.terms)


def _coerce(field: Field, value: Coefficient) -> Coefficient:
    match field:
        case Field.Q:
            return Fraction(value)
        case Field.F2:
            return int(value) % 2


def parse_algebra_element(text: str, n: int, field: Field) -> AlgebraElement:
    terms: dict[BasisKey, Coefficient] = {}
    for line in filter(None, (line.strip() for line in text.splitlines())):
        coefficient, _, key = line.partition(" ")
        terms[parse_basis_key(key)] = parse_coefficient(field, coefficient)
    return AlgebraElement(n, field, terms)


# ----------------------------------------------------------------------
# Rewriting to the basis
# ----------------------------------------------------------------------
_NORMAL_FORMS: memo.Memo[dict[tuple[int, ...], int]] = memo.Memo()


def _expand(state: tuple[tuple[int, int], ...], n: int) -> dict[tuple[int, ...], int]:
    """
    Integer normal form of a labelled chord tuple.

    ``state[c] = (unmarked, marked)``; the result maps tuples of unmarked
    labels (marked labels all 0) to coefficients.
    """

    def compute() -> dict[tuple[int, ...], int]:
        if sum(p + q for p, q in state) > n:
            return {}
        index = next((c for c, (_, q) in enumerate(state) if q), None)
        if index is None:
            return {tuple(p for p, _ in state): 1}
        p, q = state[index]
        result: dict[tuple[int, ...], int] = {}
        for child in ((p + 1, q - 1), (p + 1, q)):
            substate = state[:index] + (child,) + state[index + 1 :]
            for key, value in _expand(substate, n).items():
                result[key] = result.get(key, 0) - value
        return {key: value for key, value in result.items() if value}

    return _NORMAL_FORMS.get_or_compute((state, n), compute)


def canonical_frames(q: QuiverDiagram) -> list[tuple[tuple[ChordId, ...], tuple[int, ...]]]:
    """Every rotation of ``q`` whose chord sequence is the canonical one of C."""
    frames = []
    for shift in q.underlying.canonical_shifts:
        rotated = q.rotated(shift)
        frames.append((rotated.chords, rotated.labels))
    return frames


def rewrite_counts(
    q: QuiverDiagram, n: int, marking: Marking | None = None
) -> dict[BasisKey, int]:
    """Integer coefficients of the normal form, summed over canonical frames."""
    if n < 0:
        raise errors.PreconditionError(f"Truncation degree must be non-negative, got {n}")
    if not is_reduced(q) or diagram_lib.isolated_chord_ids(q.chords):
        raise errors.PreconditionError(
            "Rewriting needs a reduced diagram without isolated chords"
        )
    if q.size == 0:
        return {EMPTY_KEY: 1}
    if q.degree > n:
        return {}

    frames = canonical_frames(q)
    custom = None if marking is None else marking.get(frames[0][0])
    if custom is not None and len(frames) > 1:
        raise errors.PreconditionError(
            "A custom marking needs a chord diagram without rotational symmetry"
        )

    counts: dict[BasisKey, int] = {}
    for chords, labels in frames:
        spans = sorted(diagram_lib.chord_positions(chords).values())
        sides = [
            (a, b) if custom is None or a in custom else (b, a) for a, b in spans
        ]  # (marked, unmarked)
        state = tuple((labels[u], labels[m]) for m, u in sides)
        for unmarked, value in _expand(state, n).items():
            key_labels = [0] * len(chords)
            for (_, u), label in zip(sides, unmarked):
                key_labels[u] = label
            key = BasisKey(chords, tuple(key_labels))
            counts[key] = counts.get(key, 0) + value
    return {key: value for key, value in counts.items() if value}


def rewrite_to_basis(
    q: QuiverDiagram, n: int, field: Field = Field.Q, marking: Marking | None = None
) -> AlgebraElement:
    return AlgebraElement.from_counts(n, field, rewrite_counts(q, n, marking))


def frame_key(q: QuiverDiagram) -> BasisKey:
    """
    ``q`` itself as a key of its canonical frame; needs an asymmetric chord
    diagram and one zero label per chord.
    """
    frames = canonical_frames(q)
    if len(frames) != 1:
        raise errors.PreconditionError("Chord diagram has rotational symmetry")
    chords, labels = frames[0]
    for a, b in diagram_lib.chord_positions(chords).values():
        if min(labels[a], labels[b]) != 0:
            raise errors.PreconditionError("Every chord needs one endpoint labelled 0")
    return BasisKey(chords, labels)


def zero_marking(key: BasisKey) -> Marking:
    """The marking that makes ``key`` a basis element."""
    return {key.chords: frozenset(p for p, label in enumerate(key.labels) if label == 0)}


def clear_cache() -> None:
    _NORMAL_FORMS.clear()


# ----------------------------------------------------------------------
# Enumeration of reduced chord diagrams and basis keys
# ----------------------------------------------------------------------
def is_reduced_chord_diagram(chords: tuple[ChordId, ...]) -> bool:
    return not diagram_lib.adjacent_chord_sites(chords) and not diagram_lib.isolated_chord_ids(
        chords
    )


def reduced_chord_diagrams(k: int) -> list[ChordDiagramU]:
    """Reduced chord diagrams with k chords and no isolated chord, up to rotation."""
    found = []
    for chords in diagram_lib.pairings(k):
        candidate = ChordDiagramU(chords)
        if candidate.canonical == chords and is_reduced_chord_diagram(chords):
            found.append(candidate)
    return found


def _compositions(total: int, parts: int, minimum: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def basis_keys(c: ChordDiagramU, n: int) -> list[BasisKey]:
    """Keys over C of degree <= n in the first-endpoint marking."""
    chords = c.canonical
    spans = sorted(diagram_lib.chord_positions(chords).values())
    keys = []
    for total in range(len(spans), n + 1):
        for unmarked in _compositions(total, len(spans), 1):
            labels = [0] * len(chords)
            for (_, b), label in zip(spans, unmarked):
                labels[b] = label
            keys.append(BasisKey(chords, tuple(labels)))
    return keys


def labelings(c: ChordDiagramU, n: int) -> list[tuple[int, ...]]:
    """Every positional labeling over C with chord sums >= 1 and degree <= n."""
    chords = c.canonical
    spans = sorted(diagram_lib.chord_positions(chords).values())
    pairs_by_sum = {
        s: [(x, s - x) for x in range(s + 1)] for s in range(1, n + 1)
    }
    found = []
    for total in range(len(spans), n + 1):
        for sums in _compositions(total, len(spans), 1):
            for choice in itertools.product(*(pairs_by_sum[s] for s in sums)):
                labels = [0] * len(chords)
                for (a, b), (x, y) in zip(spans, choice):
                    labels[a], labels[b] = x, y
                found.append(tuple(labels))
    return found


def sum_elements(elements: Iterable[AlgebraElement], n: int, field: Field) -> AlgebraElement:
    total = AlgebraElement.zero(n, field)
    for element in elements:
        total = total + element
    return total
