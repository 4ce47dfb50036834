"""Small exact linear algebra helpers: sparse rational rows and GF(2) bitsets."""

from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction

SparseRow = dict[int, Fraction]


def _axpy(target: SparseRow, factor: Fraction, row: Mapping[int, Fraction]) -> None:
    """target -= factor * row, dropping zero entries."""
    for column, value in row.items():
        updated = target.get(column, Fraction(0)) - factor * value
        if updated:
            target[column] = updated
        else:
            target.pop(column, None)


def rref(
    rows: Iterable[Mapping[int, Fraction]], column_order: Sequence[int]
) -> list[tuple[int, SparseRow]]:
    """
    Reduced row echelon form over Q.

    Pivots are taken in ``column_order``; every pivot column is zero in all
    other returned rows.
    """
    work = [dict(row) for row in rows if row]
    pivots: list[tuple[int, SparseRow]] = []
    for column in column_order:
        index = next((i for i, row in enumerate(work) if row.get(column)), None)
        if index is None:
            continue
        pivot = work.pop(index)
        scale = 1 / pivot[column]
        pivot = {c: v * scale for c, v in pivot.items()}
        for row in work:
            if column in row:
                _axpy(row, row[column], pivot)
        for _, row in pivots:
            if column in row:
                _axpy(row, row[column], pivot)
        pivots.append((column, pivot))
        work = [row for row in work if row]
    return pivots


def rank(rows: Iterable[Mapping[int, Fraction]], columns: int) -> int:
    return len(rref(rows, range(columns)))


def reduce_vector(
    vector: Mapping[int, Fraction], pivots: Sequence[tuple[int, SparseRow]]
) -> SparseRow:
    """Remainder of ``vector`` modulo the row space of an rref basis."""
    remainder = dict(vector)
    for column, row in pivots:
        if remainder.get(column):
            _axpy(remainder, remainder[column], row)
    return remainder


def gf2_rank(rows: list[int], n_cols: int) -> int:
    """Rank over GF(2) of rows given as int bitsets."""
    work = rows[:]
    result = 0
    row_idx = 0
    for col in range(n_cols):
        pivot = None
        for r in range(row_idx, len(work)):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        for r in range(len(work)):
            if r != row_idx and ((work[r] >> col) & 1):
                work[r] ^= work[row_idx]
        result += 1
        row_idx += 1
        if row_idx == len(work):
            break
    return result


def to_bitset(row: Mapping[int, Fraction]) -> int:
    bits = 0
    for column, value in row.items():
        if Fraction(value).numerator % 2:
            bits |= 1 << column
    return bits
