"""Provides common type definitions."""

import enum
from fractions import Fraction

Position = int
ChordId = int
Coefficient = int | Fraction


class Role(enum.IntEnum):
    """Role of a chord endpoint; tails sort before heads."""

    TAIL = 0
    HEAD = 1

    @property
    def token(self) -> str:
        return "t" if self is Role.TAIL else "h"

    @property
    def opposite(self) -> "Role":
        return Role.HEAD if self is Role.TAIL else Role.TAIL


Endpoint = tuple[ChordId, Role]


class Field(enum.StrEnum):
    """Coefficient field of algebra elements."""

    Q = "Q"
    F2 = "F2"


def parse_field(text: str) -> Field:
    """Converts the given text to a coefficient field."""
    match text.strip().upper():
        case "Q" | "QQ" | "RATIONAL":
            return Field.Q
        case "F2" | "GF2" | "GF(2)":
            return Field.F2
        case _:
            error_message = f"Invalid coefficient field: {text}"
            raise ValueError(error_message)


def to_field(field: Field, value: int) -> Coefficient:
    """Maps an integer coefficient into the given field."""
    match field:
        case Field.Q:
            return Fraction(value)
        case Field.F2:
            return value % 2


def format_coefficient(value: Coefficient) -> str:
    return str(value)


def parse_coefficient(field: Field, text: str) -> Coefficient:
    match field:
        case Field.Q:
            return Fraction(text)
        case Field.F2:
            return int(text) % 2
