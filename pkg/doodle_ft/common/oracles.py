"""Independent brute-force oracles used to cross-check the main algorithms."""

import itertools
import logging
from fractions import Fraction

from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors, moves, quiver
from doodle_ft.common.diagram import ArrowDiagram, ChordDiagramU
from doodle_ft.common.quiver import BasisKey, QuiverDiagram
from doodle_ft.common.types import Field, Role
from doodle_ft.common.util import linalg

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Enumeration
# ----------------------------------------------------------------------
def _directed_matchings(k: int) -> list[frozenset[tuple[int, int]]]:
    found = []
    for chords in diagram_lib.pairings(k):
        spans = sorted(diagram_lib.chord_positions(chords).values())
        for flips in itertools.product((False, True), repeat=k):
            found.append(
                frozenset((b, a) if flip else (a, b) for (a, b), flip in zip(spans, flips))
            )
    return found


def burnside_count(k: int) -> int:
    """Rotation classes of directed matchings on 2k points, by Burnside's lemma."""
    if k == 0:
        return 1
    points = 2 * k
    matchings = _directed_matchings(k)
    fixed = 0
    for shift in range(points):
        for arrows in matchings:
            moved = frozenset(((t + shift) % points, (h + shift) % points) for t, h in arrows)
            fixed += moved == arrows
    if fixed % points:
        raise RuntimeError(f"Burnside sum {fixed} not divisible by {points}")
    return fixed // points


def naive_rotation_classes(k: int) -> set[str]:
    """Canonical codes of every token permutation, deduplicated."""
    tokens = [(c, role) for c in range(1, k + 1) for role in Role]
    return {
        diagram_lib.serialize(ArrowDiagram(order))
        for order in itertools.permutations(tokens)
    }


def planar_closure(k: int) -> set[ArrowDiagram]:
    """
    Diagrams with exactly k chords grown from the empty one by loop insertions
    and finger moves across a face. Complete for k <= 5: every curve with at
    most five double points has a monogon or a bigon face.
    """
    levels: list[set[ArrowDiagram]] = [{ArrowDiagram()}]
    for size in range(1, k + 1):
        level: set[ArrowDiagram] = set()
        for d in levels[size - 1]:
            for move in moves.r1_insertions(d):
                level.add(moves.apply_insertion(d, move))
        if size >= 2:
            for d in levels[size - 2]:
                for move in moves.planar_r2_insertions(d):
                    level.add(moves.apply_insertion(d, move))
        levels.append(level)
        logger.debug("Planar closure level %d: %d diagrams", size, len(level))
    return levels[k]


# ----------------------------------------------------------------------
# Relation matrix of the quiver algebra over a fixed chord diagram
# ----------------------------------------------------------------------
def relation_rows(
    c: ChordDiagramU, n: int
) -> tuple[list[tuple[int, ...]], list[dict[int, Fraction]]]:
    """
    Labelings of C up to degree n and the three-term relations among them,
    Y(u, v + 1) + Y(u + 1, v) + Y(u + 1, v + 1) = 0 at every chord.
    """
    variables = quiver.labelings(c, n)
    index = {labels: i for i, labels in enumerate(variables)}
    spans = sorted(diagram_lib.chord_positions(c.canonical).values())
    rows: list[dict[int, Fraction]] = []
    for labels in variables:
        for a, b in spans:
            if labels[b] < 1:
                continue
            u, v = labels[a], labels[b] - 1
            row: dict[int, Fraction] = {}
            for x, y in ((u, v + 1), (u + 1, v), (u + 1, v + 1)):
                term = list(labels)
                term[a], term[b] = x, y
                column = index.get(tuple(term))
                if column is not None:
                    row[column] = row.get(column, Fraction(0)) + 1
            rows.append(row)
    return variables, rows


def _key_columns(c: ChordDiagramU, variables: list[tuple[int, ...]]) -> list[int]:
    spans = sorted(diagram_lib.chord_positions(c.canonical).values())
    return [
        i for i, labels in enumerate(variables) if all(labels[a] == 0 for a, _ in spans)
    ]


def basis_is_sound(c: ChordDiagramU, n: int, field: Field = Field.Q) -> bool:
    """
    True iff the first-endpoint keys of C are independent and spanning modulo
    the relations.
    """
    if c.symmetry_order != 1:
        raise errors.PreconditionError("Relation oracle needs an asymmetric chord diagram")
    variables, rows = relation_rows(c, n)
    keys = _key_columns(c, variables)
    if len(keys) != len(quiver.basis_keys(c, n)):
        return False
    key_rows = [{column: Fraction(1)} for column in keys]
    columns = len(variables)
    match field:
        case Field.Q:
            relation_rank = linalg.rank(rows, columns)
            full_rank = linalg.rank(rows + key_rows, columns)
        case Field.F2:
            bits = [linalg.to_bitset(row) for row in rows]
            key_bits = [linalg.to_bitset(row) for row in key_rows]
            relation_rank = linalg.gf2_rank(bits, columns)
            full_rank = linalg.gf2_rank(bits + key_bits, columns)
    return columns - relation_rank == len(keys) and full_rank == columns


def oracle_coordinates(q: QuiverDiagram, n: int) -> dict[BasisKey, Fraction]:
    """Coordinates of ``q`` in the key basis, by row reduction."""
    c = q.underlying
    if c.symmetry_order != 1:
        raise errors.PreconditionError("Relation oracle needs an asymmetric chord diagram")
    if q.degree > n:
        return {}
    chords, labels = quiver.canonical_frames(q)[0]
    variables, rows = relation_rows(c, n)
    keys = set(_key_columns(c, variables))
    order = [i for i in range(len(variables)) if i not in keys] + sorted(keys)
    pivots = linalg.rref(rows, order)
    remainder = linalg.reduce_vector({variables.index(labels): Fraction(1)}, pivots)
    if any(column not in keys for column in remainder):
        raise RuntimeError("Key set does not span the quotient")
    return {BasisKey(chords, variables[column]): value for column, value in remainder.items()}
