"""
Provides star tangles, their resolutions and tangle subdiagram sums.

Branch ``i`` of the star tangle with k branches is the line through the origin
with direction ``(k - i, i - 1)`` (reduced by the gcd), so angles increase with
``i`` and every crossing of branches ``i < j`` is an arrow from ``i`` to ``j``.
Resolving moves branch ``k`` off the origin by ``+-eps_0`` times its
quarter-turned direction, then branch ``k - 1`` by ``+-eps_1`` and so on, with
``eps_0 >> eps_1 >> ...``. Positions along strands are vectors of
coefficients of the eps levels compared lexicographically.
"""

import dataclasses
import functools
import itertools
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction

from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors, invariant
from doodle_ft.common.diagram import ArrowDiagram
from doodle_ft.common.quiver import AlgebraElement
from doodle_ft.common.reports import ResolutionReport
from doodle_ft.common.types import Endpoint, Field, Role

logger = logging.getLogger(__name__)

Vector = tuple[int, int]
EpsScalar = tuple[Fraction, ...]
StrandPoint = tuple[int, int]  # (strand, rank)
TangleChord = tuple[StrandPoint, StrandPoint]  # (tail, head)


def cross(u: Vector, v: Vector) -> int:
    return u[0] * v[1] - u[1] * v[0]


# ----------------------------------------------------------------------
# Singular sites
# ----------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class SingularSite:
    """k pairwise non-parallel branches through one point, in branch order."""

    directions: tuple[Vector, ...]

    def __post_init__(self) -> None:
        if len(self.directions) < 3:
            raise errors.TangleError("A singular site needs at least 3 branches")
        for u, v in itertools.combinations(self.directions, 2):
            if cross(u, v) == 0:
                raise errors.TangleError(f"Branch directions {u} and {v} are parallel")

    @property
    def k(self) -> int:
        return len(self.directions)

    @property
    def complexity(self) -> int:
        return self.k - 1


def star_tangle(k: int) -> SingularSite:
    if k < 3:
        raise errors.TangleError(f"Star tangles need k >= 3, got {k}")
    directions = []
    for i in range(1, k + 1):
        x, y = k - i, i - 1
        g = math.gcd(x, y)
        directions.append((x // g, y // g))
    return SingularSite(tuple(directions))


# ----------------------------------------------------------------------
# Tangle diagrams
# ----------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class TangleDiagram:
    """
    Arrow diagram on ``strands`` oriented segments; ranks count endpoints
    along each strand from 0.
    """

    strands: int
    chords: tuple[TangleChord, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "chords", tuple(sorted(self.chords)))
        ranks: dict[int, list[int]] = {}
        for point in (p for chord in self.chords for p in chord):
            strand, rank = point
            if not 1 <= strand <= self.strands:
                raise errors.TangleError(f"Strand {strand} outside 1..{self.strands}")
            ranks.setdefault(strand, []).append(rank)
        for strand, found in ranks.items():
            if sorted(found) != list(range(len(found))):
                raise errors.TangleError(f"Ranks on strand {strand} are not 0..m-1")

    @property
    def size(self) -> int:
        return len(self.chords)

    def subdiagram(self, keep: Iterable[int]) -> "TangleDiagram":
        """Keeps the chords with the given indices and recomputes ranks."""
        kept = [self.chords[i] for i in keep]
        by_strand: dict[int, list[int]] = {}
        for strand, rank in (p for chord in kept for p in chord):
            by_strand.setdefault(strand, []).append(rank)
        rerank = {
            (strand, old): new
            for strand, olds in by_strand.items()
            for new, old in enumerate(sorted(olds))
        }
        return TangleDiagram(
            self.strands,
            tuple(
                tuple((s, rerank[(s, r)]) for s, r in chord)  # type: ignore[misc]
                for chord in kept
            ),
        )

    def away_from(self, strand: int) -> "TangleDiagram":
        """Drops every chord with an endpoint on ``strand``."""
        return self.subdiagram(
            i for i, chord in enumerate(self.chords) if all(s != strand for s, _ in chord)
        )

    def strand_tokens(self, strand: int, first_id: int = 1) -> list[Endpoint]:
        """Endpoints on ``strand`` in rank order; chord ``i`` gets id ``first_id + i``."""
        found = []
        for index, (tail, head) in enumerate(self.chords):
            for (s, rank), role in ((tail, Role.TAIL), (head, Role.HEAD)):
                if s == strand:
                    found.append((rank, (first_id + index, role)))
        return [token for _, token in sorted(found)]


TangleSum = dict[TangleDiagram, int]


def format_tangle(t: TangleDiagram) -> str:
    lines = [f"strands={t.strands}"]
    lines += [f"({ts},{tr})->({hs},{hr})" for (ts, tr), (hs, hr) in t.chords]
    return "\n".join(lines)


def parse_tangle(text: str) -> TangleDiagram:
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if not lines or not lines[0].startswith("strands="):
        raise errors.TangleError("Tangle text must start with 'strands=<k>'")
    try:
        strands = int(lines[0][len("strands="):])
        chords = []
        for line in lines[1:]:
            tail, _, head = line.replace(" ", "").partition("->")
            chords.append((_parse_point(tail), _parse_point(head)))
    except ValueError as exc:
        raise errors.TangleError(f"Invalid tangle text: {exc}") from exc
    return TangleDiagram(strands, tuple(chords))


def _parse_point(text: str) -> StrandPoint:
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"expected (strand,rank), got {text!r}")
    strand, rank = text[1:-1].split(",")
    return int(strand), int(rank)


# ----------------------------------------------------------------------
# Resolutions
# ----------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class Crossing:
    tail_branch: int
    head_branch: int
    tail_position: EpsScalar
    head_position: EpsScalar


@dataclasses.dataclass(frozen=True)
class PartialResolution:
    """
    Star site with its last ``len(sides)`` branches moved off the origin;
    ``sides[m]`` is the side of branch ``k - m``.
    """

    site: SingularSite
    sides: tuple[int, ...] = ()

    @property
    def k(self) -> int:
        return self.site.k

    @property
    def residual_branches(self) -> int:
        return self.k - len(self.sides)

    @property
    def is_complete(self) -> bool:
        return self.residual_branches <= 2

    @property
    def sign(self) -> int:
        return math.prod(self.sides)

    def _levels(self) -> int:
        return max(self.k - 2, 1)

    def offset(self, branch: int) -> tuple[EpsScalar, EpsScalar]:
        zero = (Fraction(0),) * self._levels()
        level = self.k - branch
        if level >= len(self.sides):
            return zero, zero
        side = self.sides[level]
        vx, vy = self.site.directions[branch - 1]
        x, y = list(zero), list(zero)
        x[level], y[level] = Fraction(-side * vy), Fraction(side * vx)
        return tuple(x), tuple(y)

    def crossings(self) -> list[Crossing]:
        """Transversal crossings; the origin counts only once two branches remain."""
        found = []
        for i, j in itertools.combinations(range(1, self.k + 1), 2):
            oi, oj = self.offset(i), self.offset(j)
            vi, vj = self.site.directions[i - 1], self.site.directions[j - 1]
            dx = tuple(b - a for a, b in zip(oi[0], oj[0]))
            dy = tuple(b - a for a, b in zip(oi[1], oj[1]))
            if not any(dx) and not any(dy) and self.residual_branches > 2:
                continue
            det = cross(vi, vj)
            t = tuple((x * vj[1] - y * vj[0]) / det for x, y in zip(dx, dy))
            s = tuple((x * vi[1] - y * vi[0]) / det for x, y in zip(dx, dy))
            found.append(Crossing(i, j, t, s))
        return found

    def to_tangle(self) -> TangleDiagram:
        if not self.is_complete:
            raise errors.TangleError(
                f"{self.residual_branches} branches still meet at the origin"
            )
        crossings = self.crossings()
        along: dict[int, list[tuple[EpsScalar, int, int]]] = {}
        for index, c in enumerate(crossings):
            along.setdefault(c.tail_branch, []).append((c.tail_position, index, 0))
            along.setdefault(c.head_branch, []).append((c.head_position, index, 1))
        ranks: dict[tuple[int, int], StrandPoint] = {}
        for strand, points in along.items():
            points.sort()
            for rank, (position, index, end) in enumerate(points):
                if rank and points[rank - 1][0] == position:
                    raise errors.TangleError(f"Two crossings coincide on strand {strand}")
                ranks[(index, end)] = (strand, rank)
        return TangleDiagram(
            self.k,
            tuple((ranks[(i, 0)], ranks[(i, 1)]) for i in range(len(crossings))),
        )


def resolve_once(s: SingularSite | PartialResolution, side: int) -> PartialResolution:
    """Moves the last branch still at the origin to side ``+1`` or ``-1``."""
    partial = s if isinstance(s, PartialResolution) else PartialResolution(s)
    if side not in (1, -1):
        raise errors.TangleError(f"Side must be +1 or -1, got {side}")
    if partial.is_complete:
        raise errors.TangleError("No singular point left to resolve")
    return PartialResolution(partial.site, partial.sides + (side,))


def resolution_paths(site: SingularSite) -> list[PartialResolution]:
    return [
        PartialResolution(site, sides)
        for sides in itertools.product((1, -1), repeat=site.k - 2)
    ]


def complete_resolution(site: SingularSite) -> TangleSum:
    terms: TangleSum = {}
    for path in resolution_paths(site):
        tangle = path.to_tangle()
        terms[tangle] = terms.get(tangle, 0) + path.sign
    return {t: c for t, c in terms.items() if c}


# ----------------------------------------------------------------------
# Subdiagram sums
# ----------------------------------------------------------------------
def tangle_subdiagram_sum(t: TangleDiagram) -> TangleSum:
    terms: TangleSum = {}
    for size in range(t.size + 1):
        for keep in itertools.combinations(range(t.size), size):
            sub = t.subdiagram(keep)
            terms[sub] = terms.get(sub, 0) + 1
    return terms


def add_sums(*sums: tuple[int, Mapping[TangleDiagram, int]]) -> TangleSum:
    total: TangleSum = {}
    for factor, terms in sums:
        for t, c in terms.items():
            total[t] = total.get(t, 0) + factor * c
    return {t: c for t, c in total.items() if c}


@functools.cache
def resolution_subdiagram_sum(site: SingularSite) -> TangleSum:
    """Sum of sign * I(term) over the complete resolution."""
    return add_sums(
        *((coefficient, tangle_subdiagram_sum(t)) for t, coefficient in complete_resolution(site).items())
    )


def min_chord_degree(terms: Mapping[TangleDiagram, int]) -> float:
    """Least chord count with a nonzero coefficient; infinity for the zero sum."""
    sizes = [t.size for t, c in terms.items() if c]
    return min(sizes) if sizes else math.inf


def format_tangle_sum(terms: Mapping[TangleDiagram, int]) -> str:
    blocks = []
    for t, c in sorted(terms.items(), key=lambda kv: (kv[0].size, kv[0].chords)):
        blocks.append(f"{c:+d}\n{format_tangle(t)}")
    return "\n".join(blocks)


# ----------------------------------------------------------------------
# Planting a star into a closed diagram
# ----------------------------------------------------------------------
def plant_star(term: TangleDiagram, host: ArrowDiagram, slots: Sequence[int]) -> ArrowDiagram:
    """
    Closes a resolved star tangle into ``host``: strand ``i`` is spliced in at
    the ``i``-th smallest slot, strands sharing a slot follow each other.
    """
    if len(slots) != term.strands:
        raise errors.TangleError(f"Expected {term.strands} slots, got {len(slots)}")
    if any(not 0 <= s <= len(host) for s in slots):
        raise errors.SlotError(f"Slots {list(slots)} outside 0..{len(host)}")
    inserts: dict[int, list[Endpoint]] = {}
    for strand, slot in enumerate(sorted(slots), 1):
        inserts.setdefault(slot, []).extend(term.strand_tokens(strand, host.size + 1))
    return diagram_lib.splice(host, inserts)


def singular_invariant(
    site: SingularSite,
    host: ArrowDiagram,
    slots: Sequence[int],
    n: int,
    field: Field = Field.Q,
    **kwargs,
) -> AlgebraElement:
    """Signed sum of invariants over the planted complete resolution."""
    total = AlgebraElement.zero(n, field)
    for term, coefficient in complete_resolution(site).items():
        planted = plant_star(term, host, slots)
        value = invariant.diagram_invariant(planted, n, field, **kwargs)
        total = total + value.element.scale(coefficient)
    return total


def resolution_report(k: int) -> ResolutionReport:
    site = star_tangle(k)
    resolution = complete_resolution(site)
    terms = resolution_subdiagram_sum(site)
    degree = min_chord_degree(terms)
    logger.info("Resolved T%d: %d terms, min chord degree %s", k, len(resolution), degree)
    return ResolutionReport(
        k=k,
        terms=[
            (coefficient, format_tangle(t))
            for t, coefficient in sorted(resolution.items(), key=lambda kv: kv[0].chords)
        ],
        subdiagram_terms=len(terms),
        positive=sum(1 for c in terms.values() if c > 0),
        negative=sum(1 for c in terms.values() if c < 0),
        min_chord_degree=None if degree == math.inf else int(degree),
    )
