"""Provides the diagram moves R1 and R2, minimization and equivalence."""

import dataclasses
import enum
import logging
import random

from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors
from doodle_ft.common.diagram import ArrowDiagram
from doodle_ft.common.types import ChordId, Endpoint, Position, Role

logger = logging.getLogger(__name__)


class MoveKind(enum.StrEnum):
    R1 = "R1"
    R2 = "R2"


class Direction(enum.StrEnum):
    DELETE = "delete"
    INSERT = "insert"


class Variant(enum.StrEnum):
    """Embedding of an inserted R2 pair."""

    NESTED = "nested"
    CROSSING = "crossing"


class LoopOrientation(enum.StrEnum):
    TAIL_FIRST = "tail-first"
    HEAD_FIRST = "head-first"


@dataclasses.dataclass(frozen=True)
class MoveSite:
    """A deletable chord (R1) or chord pair (R2) of a specific diagram."""

    kind: MoveKind
    chords: frozenset[ChordId]
    sites: frozenset[frozenset[Position]]

    @property
    def anchor(self) -> Position:
        return min(p for site in self.sites for p in site)

    def __str__(self) -> str:
        chords = ",".join(str(c) for c in sorted(self.chords))
        sites = " ".join(
            "{" + ",".join(str(p) for p in sorted(site)) + "}"
            for site in sorted(self.sites, key=min)
        )
        return f"{self.kind}[{chords}] at {sites}"


@dataclasses.dataclass(frozen=True)
class R1Insertion:
    slot: int
    orientation: LoopOrientation


@dataclasses.dataclass(frozen=True)
class R2Insertion:
    slot1: int
    slot2: int
    variant: Variant
    orientation: int


Insertion = R1Insertion | R2Insertion


@dataclasses.dataclass(frozen=True)
class TraceStep:
    direction: Direction
    move: MoveSite | Insertion


@dataclasses.dataclass(frozen=True)
class MoveTrace:
    """Applied moves; replay starts from the canonical form of ``source``."""

    source: ArrowDiagram
    steps: tuple[TraceStep, ...] = ()

    def replay(self, source: ArrowDiagram | None = None) -> ArrowDiagram:
        current = diagram_lib.canonical_form(self.source if source is None else source)
        for step in self.steps:
            current = _apply_step(current, step)
        return current

    def __len__(self) -> int:
        return len(self.steps)


def _apply_step(d: ArrowDiagram, step: TraceStep) -> ArrowDiagram:
    match step.move:
        case MoveSite():
            return apply_delete(d, step.move)
        case R1Insertion(slot=slot, orientation=orientation):
            return apply_r1_insert(d, slot, orientation)
        case R2Insertion(slot1=s1, slot2=s2, variant=variant, orientation=orientation):
            return apply_r2_insert(d, s1, s2, variant, orientation)
        case _:
            raise TypeError(f"Unknown trace step: {step!r}")


# ----------------------------------------------------------------------
# Finding sites
# ----------------------------------------------------------------------
def find_r1_sites(d: ArrowDiagram) -> list[MoveSite]:
    return [
        MoveSite(MoveKind.R1, frozenset((chord,)), frozenset((frozenset(d.positions[chord]),)))
        for chord in diagram_lib.isolated_chord_ids(d.chords)
    ]


def find_r2_sites(d: ArrowDiagram) -> list[MoveSite]:
    """
    Chord pairs whose endpoints form two adjacent sites, each holding one
    tail and one head of different chords.
    """
    found = []
    for adjacency in diagram_lib.adjacent_chord_sites(d.chords):
        i, j = adjacency.near
        # the far site then holds opposite roles as well
        if d.endpoints[i][1] == d.endpoints[j][1]:
            continue
        found.append(MoveSite(MoveKind.R2, adjacency.chords, adjacency.sites))
    return found


def find_sites(d: ArrowDiagram) -> list[MoveSite]:
    """All deleting moves, in canonical position order."""
    sites = find_r1_sites(d) + find_r2_sites(d)
    return sorted(sites, key=lambda s: (s.anchor, s.kind, sorted(s.chords)))


# ----------------------------------------------------------------------
# Applying moves
# ----------------------------------------------------------------------
def apply_delete(d: ArrowDiagram, s: MoveSite) -> ArrowDiagram:
    """Removes the chord(s) of a site of ``d`` and returns the canonical result."""
    candidates = find_r1_sites(d) if s.kind is MoveKind.R1 else find_r2_sites(d)
    if s not in candidates:
        raise errors.StaleSiteError(f"{s} is not a site of {d.code!r}")
    kept = [c for c in range(1, d.size + 1) if c not in s.chords]
    return diagram_lib.canonical_form(diagram_lib.subdiagram(d, kept))


def _check_slot(d: ArrowDiagram, slot: int) -> None:
    if not 0 <= slot <= len(d):
        raise errors.SlotError(f"Slot {slot} outside 0..{len(d)}")


def _splice(d: ArrowDiagram, inserts: dict[int, list[Endpoint]]) -> ArrowDiagram:
    return diagram_lib.canonical_form(diagram_lib.splice(d, inserts))


def apply_r1_insert(
    d: ArrowDiagram, arc: int, orientation: LoopOrientation | str
) -> ArrowDiagram:
    _check_slot(d, arc)
    chord = d.size + 1
    loop = [(chord, Role.TAIL), (chord, Role.HEAD)]
    if LoopOrientation(orientation) is LoopOrientation.HEAD_FIRST:
        loop.reverse()
    return _splice(d, {arc: loop})


def r2_pattern(
    variant: Variant | str, orientation: int, a: ChordId, b: ChordId
) -> tuple[list[Endpoint], list[Endpoint]]:
    """
    Endpoint pairs for the two sites of an inserted R2 pair.

    Orientation 0 starts the first site with the tail of ``a``; orientation 1
    swaps every role.
    """
    first = [(a, Role.TAIL), (b, Role.HEAD)]
    if Variant(variant) is Variant.NESTED:
        second = [(b, Role.TAIL), (a, Role.HEAD)]
    else:
        second = [(a, Role.HEAD), (b, Role.TAIL)]
    if orientation:
        first = [(c, role.opposite) for c, role in first]
        second = [(c, role.opposite) for c, role in second]
    return first, second


def apply_r2_insert(
    d: ArrowDiagram,
    arc1: int,
    arc2: int,
    variant: Variant | str,
    orientation: int,
) -> ArrowDiagram:
    """Inserts an R2 pair; with equal slots the first site precedes the second."""
    _check_slot(d, arc1)
    _check_slot(d, arc2)
    if orientation not in (0, 1):
        raise errors.PreconditionError(f"Orientation must be 0 or 1, got {orientation}")
    first, second = r2_pattern(variant, orientation, d.size + 1, d.size + 2)
    inserts: dict[int, list[Endpoint]] = {arc1: list(first)}
    inserts.setdefault(arc2, []).extend(second)
    return _splice(d, inserts)


def apply_insertion(d: ArrowDiagram, move: Insertion) -> ArrowDiagram:
    return _apply_step(d, TraceStep(Direction.INSERT, move))


# ----------------------------------------------------------------------
# Realizability-preserving insertions
# ----------------------------------------------------------------------
def r1_insertions(d: ArrowDiagram) -> list[R1Insertion]:
    return [
        R1Insertion(slot, orientation)
        for slot in range(len(d) + 1)
        for orientation in LoopOrientation
    ]


def _r2_from_darts(dart1: int, dart2: int) -> R2Insertion:
    s1 = 1 if dart1 % 2 == 0 else -1
    s2 = 1 if dart2 % 2 == 0 else -1
    crossing = s1 != s2
    orientation = 0 if (s1 > 0) == crossing else 1
    return R2Insertion(
        dart1 // 2 + 1,
        dart2 // 2 + 1,
        Variant.CROSSING if crossing else Variant.NESTED,
        orientation,
    )


def planar_r2_insertions(d: ArrowDiagram) -> list[R2Insertion]:
    """
    R2 insertions realised by pushing a finger of one edge across another
    edge of the same face (possibly the same edge).
    """
    if d.size == 0:
        return [R2Insertion(0, 0, Variant.NESTED, 0), R2Insertion(0, 0, Variant.NESTED, 1)]
    found: list[R2Insertion] = []
    for face in diagram_lib.faces(d):
        for dart1 in face:
            for dart2 in face:
                move = _r2_from_darts(dart1, dart2)
                if move not in found:
                    found.append(move)
    return found


# ----------------------------------------------------------------------
# Minimization
# ----------------------------------------------------------------------
def minimize(
    d: ArrowDiagram, rng: random.Random | None = None
) -> tuple[ArrowDiagram, MoveTrace]:
    """
    Applies deleting moves until none is left.

    Without ``rng`` the first site in canonical position order is taken;
    with ``rng`` sites are drawn at random.
    """
    current = diagram_lib.canonical_form(d)
    steps: list[TraceStep] = []
    while sites := find_sites(current):
        site = rng.choice(sites) if rng is not None else sites[0]
        current = apply_delete(current, site)
        steps.append(TraceStep(Direction.DELETE, site))
    logger.debug("Minimized %r to %r in %d steps", d.code, current.code, len(steps))
    return current, MoveTrace(d, tuple(steps))


def is_minimal(d: ArrowDiagram) -> bool:
    return not find_sites(d)


def equivalent(d1: ArrowDiagram, d2: ArrowDiagram) -> bool:
    return minimize(d1)[0] == minimize(d2)[0]


def random_move_walk(
    d: ArrowDiagram,
    steps: int,
    rng: random.Random,
    *,
    planar: bool = False,
    max_chords: int = 10,
) -> tuple[ArrowDiagram, MoveTrace]:
    """
    Seeded random sequence of insertions and deletions.

    With ``planar`` only insertions that keep a realizable diagram realizable
    are drawn.
    """
    current = diagram_lib.canonical_form(d)
    trace: list[TraceStep] = []
    for _ in range(steps):
        deletions = find_sites(current)
        can_insert = current.size + 2 <= max_chords
        if deletions and (not can_insert or rng.random() < 0.4):
            step = TraceStep(Direction.DELETE, rng.choice(deletions))
        elif can_insert:
            step = TraceStep(Direction.INSERT, _random_insertion(current, rng, planar))
        else:
            break
        current = _apply_step(current, step)
        trace.append(step)
    return current, MoveTrace(d, tuple(trace))


def _random_insertion(d: ArrowDiagram, rng: random.Random, planar: bool) -> Insertion:
    if rng.random() < 0.5:
        return R1Insertion(rng.randint(0, len(d)), rng.choice(list(LoopOrientation)))
    if planar:
        return rng.choice(planar_r2_insertions(d))
    return R2Insertion(
        rng.randint(0, len(d)),
        rng.randint(0, len(d)),
        rng.choice(list(Variant)),
        rng.randint(0, 1),
    )
