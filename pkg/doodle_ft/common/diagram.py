"""Provides arrow diagrams, their Gauss-code encoding and the realizability test."""

import dataclasses
import functools
import logging
import random
import re
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from typing import TypeVar

from doodle_ft.common import errors
from doodle_ft.common.types import ChordId, Endpoint, Position, Role

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"([1-9][0-9]*)([th])")

T = TypeVar("T")


# ----------------------------------------------------------------------
# Sequence helpers
# ----------------------------------------------------------------------
def renumber(endpoints: Iterable[Endpoint]) -> tuple[Endpoint, ...]:
    """Renames chords 1, 2, ... in order of first appearance."""
    mapping: dict[ChordId, ChordId] = {}
    return tuple(
        (mapping.setdefault(chord, len(mapping) + 1), Role(role))
        for chord, role in endpoints
    )


def renumber_ids(chords: Iterable[ChordId]) -> tuple[ChordId, ...]:
    """Renames chord ids 1, 2, ... in order of first appearance."""
    mapping: dict[ChordId, ChordId] = {}
    return tuple(mapping.setdefault(chord, len(mapping) + 1) for chord in chords)


def rotate(seq: Sequence[T], shift: int) -> tuple[T, ...]:
    if not seq:
        return ()
    shift %= len(seq)
    return tuple(seq[shift:]) + tuple(seq[:shift])


def least_rotations(
    seq: Sequence[T], relabel: Callable[[Sequence[T]], tuple]
) -> tuple[tuple, list[int]]:
    """
    Returns the least relabelled rotation of a cyclic sequence together with
    every shift that attains it.
    """
    if not seq:
        return (), [0]
    best: tuple | None = None
    shifts: list[int] = []
    for shift in range(len(seq)):
        candidate = relabel(rotate(seq, shift))
        if best is None or candidate < best:
            best, shifts = candidate, [shift]
        elif candidate == best:
            shifts.append(shift)
    return best, shifts


def chord_positions(chords: Sequence[ChordId]) -> dict[ChordId, tuple[Position, Position]]:
    """Maps each chord id to its two positions, in increasing order."""
    found: dict[ChordId, list[Position]] = {}
    for position, chord in enumerate(chords):
        found.setdefault(chord, []).append(position)
    return {chord: (pair[0], pair[1]) for chord, pair in found.items()}


def cyclically_adjacent(a: Position, b: Position, size: int) -> bool:
    return size >= 2 and (a - b) % size in (1, size - 1)


# ----------------------------------------------------------------------
# Adjacency of chords (shared by move sites and quiver reduction)
# ----------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class Adjacency:
    """
    Two chords whose four endpoints pair up into two cyclically adjacent
    sites: ``near`` is a consecutive pair (first's endpoint, second's
    endpoint), ``far`` holds the two remaining endpoints in the same order.
    """

    first: ChordId
    second: ChordId
    near: tuple[Position, Position]
    far: tuple[Position, Position]

    @property
    def chords(self) -> frozenset[ChordId]:
        return frozenset((self.first, self.second))

    @property
    def sites(self) -> frozenset[frozenset[Position]]:
        return frozenset((frozenset(self.near), frozenset(self.far)))

    @property
    def anchor(self) -> Position:
        return min(*self.near, *self.far)


def adjacent_chord_sites(chords: Sequence[ChordId]) -> list[Adjacency]:
    """
    Finds every pairing of two chords into two cyclically adjacent sites.

    Both the nested and the interleaved configuration qualify. Results are
    listed in order of the scanned consecutive pair.
    """
    size = len(chords)
    partner: dict[Position, Position] = {}
    for first, second in chord_positions(chords).values():
        partner[first], partner[second] = second, first

    seen: set[tuple[frozenset[ChordId], frozenset[frozenset[Position]]]] = set()
    found: list[Adjacency] = []
    for i in range(size):
        j = (i + 1) % size
        if chords[i] == chords[j]:
            continue
        oi, oj = partner[i], partner[j]
        if not cyclically_adjacent(oi, oj, size):
            continue
        adjacency = Adjacency(chords[i], chords[j], (i, j), (oi, oj))
        key = (adjacency.chords, adjacency.sites)
        if key in seen:
            continue
        seen.add(key)
        found.append(adjacency)
    return found


def isolated_chord_ids(chords: Sequence[ChordId]) -> list[ChordId]:
    """Chords whose own two endpoints are cyclically adjacent."""
    size = len(chords)
    return [
        chord
        for chord, (a, b) in sorted(chord_positions(chords).items(), key=lambda kv: kv[1])
        if cyclically_adjacent(a, b, size)
    ]


# ----------------------------------------------------------------------
# Diagram types
# ----------------------------------------------------------------------
def _validate_endpoints(endpoints: Sequence[Endpoint]) -> None:
    roles: dict[ChordId, set[Role]] = {}
    for chord, role in endpoints:
        seen = roles.setdefault(chord, set())
        if role in seen:
            raise errors.GaussCodeError(
                f"Chord {chord} appears twice with role {Role(role).token}"
            )
        seen.add(Role(role))
    for chord, seen in roles.items():
        if len(seen) != 2:
            raise errors.GaussCodeError(f"Chord {chord} appears once only")


@dataclasses.dataclass(frozen=True, eq=False)
class ArrowDiagram:
    """
    Cyclic sequence of directed chord endpoints.

    The stored sequence keeps its basepoint (position 0); equality and hashing
    ignore it and compare diagrams up to rotation.
    """

    endpoints: tuple[Endpoint, ...] = ()

    def __post_init__(self) -> None:
        _validate_endpoints(self.endpoints)
        object.__setattr__(self, "endpoints", renumber(self.endpoints))

    @property
    def size(self) -> int:
        """Number of chords."""
        return len(self.endpoints) // 2

    def __len__(self) -> int:
        return len(self.endpoints)

    @property
    def chords(self) -> tuple[ChordId, ...]:
        return tuple(chord for chord, _ in self.endpoints)

    @functools.cached_property
    def positions(self) -> dict[ChordId, tuple[Position, Position]]:
        """Maps each chord to (tail position, head position)."""
        found: dict[ChordId, dict[Role, Position]] = {}
        for position, (chord, role) in enumerate(self.endpoints):
            found.setdefault(chord, {})[role] = position
        return {
            chord: (by_role[Role.TAIL], by_role[Role.HEAD])
            for chord, by_role in found.items()
        }

    @functools.cached_property
    def canonical(self) -> tuple[Endpoint, ...]:
        best, _ = least_rotations(self.endpoints, renumber)
        return best

    def rotated(self, shift: int) -> "ArrowDiagram":
        return ArrowDiagram(rotate(self.endpoints, shift))

    @property
    def code(self) -> str:
        """Gauss code of the stored (uncanonicalized) sequence."""
        return format_endpoints(self.endpoints)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArrowDiagram):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"ArrowDiagram({self.code!r})"


@dataclasses.dataclass(frozen=True, eq=False)
class ChordDiagramU:
    """Cyclic sequence of undirected chord endpoints, equal up to rotation."""

    chords: tuple[ChordId, ...] = ()

    def __post_init__(self) -> None:
        counts: dict[ChordId, int] = {}
        for chord in self.chords:
            counts[chord] = counts.get(chord, 0) + 1
        for chord, count in counts.items():
            if count != 2:
                raise errors.GaussCodeError(
                    f"Chord {chord} appears {count} times, expected 2"
                )
        object.__setattr__(self, "chords", renumber_ids(self.chords))

    @property
    def size(self) -> int:
        return len(self.chords) // 2

    @functools.cached_property
    def _least(self) -> tuple[tuple, list[int]]:
        return least_rotations(self.chords, renumber_ids)

    @property
    def canonical(self) -> tuple[ChordId, ...]:
        return self._least[0]

    @property
    def canonical_shifts(self) -> list[int]:
        """Every rotation of the stored sequence that yields the canonical one."""
        return list(self._least[1])

    @property
    def symmetry_order(self) -> int:
        return len(self._least[1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChordDiagramU):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __str__(self) -> str:
        return " ".join(str(chord) for chord in self.canonical)


@dataclasses.dataclass(frozen=True)
class SignedLinearDiagram:
    """
    Based chord diagram of a long doodle: a linear chord sequence plus one sign
    per chord (``signs[c - 1]`` belongs to chord ``c``).
    """

    chords: tuple[ChordId, ...] = ()
    signs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        counts: dict[ChordId, int] = {}
        for chord in self.chords:
            counts[chord] = counts.get(chord, 0) + 1
        if any(count != 2 for count in counts.values()):
            raise errors.SignedCodeError("Every chord must appear exactly twice")
        if renumber_ids(self.chords) != self.chords:
            raise errors.SignedCodeError("Chords must be numbered by first appearance")
        if len(self.signs) != len(counts):
            raise errors.SignedCodeError("Expected one sign per chord")
        if any(sign not in (1, -1) for sign in self.signs):
            raise errors.SignedCodeError("Signs must be +1 or -1")

    def sign(self, chord: ChordId) -> int:
        return self.signs[chord - 1]


@dataclasses.dataclass(frozen=True)
class RotationSystem:
    """
    Combinatorial map of a diagram.

    Skeleton edge ``e`` runs from position ``e`` to ``e + 1``. Dart ``2e``
    leaves position ``e`` along edge ``e``; dart ``2e + 1`` arrives at
    position ``e + 1``. ``vertices[c - 1]`` lists the darts at chord ``c`` in
    counter-clockwise order (out1, out2, in1, in2), branch 1 being the tail.
    """

    vertices: tuple[tuple[int, int, int, int], ...]
    successor: tuple[int, ...]

    @property
    def darts(self) -> int:
        return len(self.successor)

    @staticmethod
    def opposite(dart: int) -> int:
        return dart ^ 1

    def face_successor(self, dart: int) -> int:
        return self.successor[dart ^ 1]


# ----------------------------------------------------------------------
# Parsing and canonical forms
# ----------------------------------------------------------------------
def format_endpoints(endpoints: Iterable[Endpoint]) -> str:
    return " ".join(f"{chord}{Role(role).token}" for chord, role in endpoints)


def parse_gauss(text: str) -> ArrowDiagram:
    """Parses a whitespace-separated Gauss code such as ``1t 2t 1h 2h``."""
    endpoints: list[Endpoint] = []
    for token in text.split():
        match = _TOKEN.fullmatch(token)
        if match is None:
            raise errors.GaussCodeError(f"Invalid Gauss code token: {token!r}")
        chord, role = match.groups()
        endpoints.append((int(chord), Role.TAIL if role == "t" else Role.HEAD))
    return ArrowDiagram(tuple(endpoints))


def canonical_form(d: ArrowDiagram) -> ArrowDiagram:
    return ArrowDiagram(d.canonical)


def serialize(d: ArrowDiagram) -> str:
    return format_endpoints(d.canonical)


def rotations(d: ArrowDiagram) -> list[tuple[Endpoint, ...]]:
    return [renumber(rotate(d.endpoints, shift)) for shift in range(len(d))]


def symmetry_order(d: ArrowDiagram) -> int:
    """Number of rotations of the endpoint circle that fix the diagram."""
    if not d.endpoints:
        return 1
    return sum(1 for rotation in rotations(d) if rotation == d.endpoints)


def underlying_chord_diagram(d: ArrowDiagram) -> ChordDiagramU:
    return ChordDiagramU(d.chords)


def subdiagram(d: ArrowDiagram, keep: Iterable[ChordId]) -> ArrowDiagram:
    """Keeps the given chords, preserving the basepoint."""
    kept = set(keep)
    return ArrowDiagram(tuple(e for e in d.endpoints if e[0] in kept))


def splice(d: ArrowDiagram, inserts: Mapping[int, Sequence[Endpoint]]) -> ArrowDiagram:
    """
    Places ``inserts[s]`` just before position ``s``; slot 2n appends. Inserted
    chord ids must not clash with the chords of ``d``.
    """
    spliced: list[Endpoint] = []
    for position in range(len(d) + 1):
        spliced.extend(inserts.get(position, ()))
        if position < len(d):
            spliced.append(d.endpoints[position])
    return ArrowDiagram(tuple(spliced))


def pairings(chords: int) -> Iterator[tuple[ChordId, ...]]:
    """
    Every perfect matching of 2k circle points, as an id sequence numbered by
    first appearance.
    """
    slots: list[ChordId] = [0] * (2 * chords)

    def fill(next_id: int) -> Iterator[tuple[ChordId, ...]]:
        try:
            first = slots.index(0)
        except ValueError:
            yield tuple(slots)
            return
        slots[first] = next_id
        for second in range(first + 1, len(slots)):
            if slots[second] == 0:
                slots[second] = next_id
                yield from fill(next_id + 1)
                slots[second] = 0
        slots[first] = 0

    yield from fill(1)


def random_diagram(chords: int, rng: random.Random) -> ArrowDiagram:
    endpoints = [(c, role) for c in range(1, chords + 1) for role in Role]
    rng.shuffle(endpoints)
    return ArrowDiagram(tuple(endpoints))


# ----------------------------------------------------------------------
# Realizability
# ----------------------------------------------------------------------
def rotation_system(d: ArrowDiagram) -> RotationSystem:
    length = len(d)
    vertices = []
    successor = [0] * (2 * length)
    for chord in range(1, d.size + 1):
        tail, head = d.positions[chord]
        cycle = (
            2 * tail,
            2 * head,
            2 * ((tail - 1) % length) + 1,
            2 * ((head - 1) % length) + 1,
        )
        vertices.append(cycle)
        for k, dart in enumerate(cycle):
            successor[dart] = cycle[(k + 1) % 4]
    return RotationSystem(tuple(vertices), tuple(successor))


def faces(d: ArrowDiagram) -> list[tuple[int, ...]]:
    """Orbits of the face permutation; the empty diagram has no darts."""
    system = rotation_system(d)
    seen = [False] * system.darts
    orbits: list[tuple[int, ...]] = []
    for start in range(system.darts):
        if seen[start]:
            continue
        orbit = []
        dart = start
        while not seen[dart]:
            seen[dart] = True
            orbit.append(dart)
            dart = system.face_successor(dart)
        orbits.append(tuple(orbit))
    return orbits


def face_count(d: ArrowDiagram) -> int:
    # the bare circle bounds two discs
    return len(faces(d)) if d.size else 2


def genus(d: ArrowDiagram) -> int:
    euler = d.size - 2 * d.size + face_count(d)
    excess = 2 - euler
    if excess < 0 or excess % 2:
        raise RuntimeError(f"Inconsistent Euler characteristic {euler} for {d.code!r}")
    return excess // 2


def is_realizable(d: ArrowDiagram) -> bool:
    """True iff the surface built from the forced rotation system is a sphere."""
    return genus(d) == 0


def interlaced(d: ArrowDiagram, a: ChordId, b: ChordId) -> bool:
    lo, hi = sorted(d.positions[a])
    return sum(1 for p in d.positions[b] if lo < p < hi) == 1


def gauss_parity_ok(d: ArrowDiagram) -> bool:
    """Every chord crosses an even number of chords (necessary for planarity)."""
    for a in range(1, d.size + 1):
        crossing = sum(1 for b in range(1, d.size + 1) if b != a and interlaced(d, a, b))
        if crossing % 2:
            return False
    return True


# ----------------------------------------------------------------------
# Long doodles
# ----------------------------------------------------------------------
def to_signed_linear(d: ArrowDiagram, basepoint: Position) -> SignedLinearDiagram:
    """Cuts the circle just before ``basepoint``."""
    if d.size == 0:
        return SignedLinearDiagram()
    if not 0 <= basepoint < len(d):
        raise errors.BasepointError(
            f"Basepoint {basepoint} outside 0..{len(d) - 1}"
        )
    linear = ArrowDiagram(rotate(d.endpoints, basepoint))
    signs = tuple(
        1 if linear.positions[c][0] < linear.positions[c][1] else -1
        for c in range(1, linear.size + 1)
    )
    return SignedLinearDiagram(linear.chords, signs)


def from_signed_linear(s: SignedLinearDiagram) -> ArrowDiagram:
    """Reconstructs the based arrow diagram; position 0 is the basepoint."""
    seen: set[ChordId] = set()
    endpoints: list[Endpoint] = []
    for chord in s.chords:
        first = Role.TAIL if s.sign(chord) > 0 else Role.HEAD
        endpoints.append((chord, first.opposite if chord in seen else first))
        seen.add(chord)
    return ArrowDiagram(tuple(endpoints))


def format_signed_linear(s: SignedLinearDiagram) -> str:
    ids = " ".join(str(chord) for chord in s.chords)
    signs = ",".join(
        f"{chord}={'+' if sign > 0 else '-'}" for chord, sign in enumerate(s.signs, 1)
    )
    return f"{ids} signs: {signs}".strip()


def parse_signed_linear(text: str) -> SignedLinearDiagram:
    """Parses ``<ids> signs: <id>=<+|->,...``; ids are renumbered."""
    if "signs:" not in text:
        raise errors.SignedCodeError("Missing 'signs:' block")
    left, right = text.split("signs:", 1)
    try:
        raw = [int(token) for token in left.split()]
    except ValueError as exc:
        raise errors.SignedCodeError(f"Invalid chord id in {left!r}") from exc
    if any(chord < 1 for chord in raw):
        raise errors.SignedCodeError("Chord ids must be positive")

    raw_signs: dict[int, int] = {}
    for entry in filter(None, (part.strip() for part in right.split(","))):
        chord, _, sign = entry.partition("=")
        if sign not in ("+", "-") or not chord.strip().isdigit():
            raise errors.SignedCodeError(f"Invalid sign entry {entry!r}")
        raw_signs[int(chord)] = 1 if sign == "+" else -1

    mapping: dict[int, int] = {}
    for chord in raw:
        mapping.setdefault(chord, len(mapping) + 1)
    if set(raw_signs) != set(mapping):
        raise errors.SignedCodeError("Sign block must name every chord exactly once")
    signs = tuple(
        raw_signs[old] for old, _ in sorted(mapping.items(), key=lambda kv: kv[1])
    )
    return SignedLinearDiagram(tuple(mapping[c] for c in raw), signs)
