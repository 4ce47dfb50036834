"""Provides the machine-readable reports produced by verification runs."""

import datetime
from typing import Literal

import pydantic


class CheckResult(pydantic.BaseModel):
    """Outcome of one property check over a family of inputs."""

    name: str
    passed: bool = True
    checked: int = 0
    skipped: int = 0
    counterexamples: list[str] = pydantic.Field(default_factory=list)
    notes: str = ""

    def fail(self, example: str) -> None:
        self.passed = False
        self.counterexamples.append(example)


class VerifyReport(pydantic.BaseModel):
    kind: Literal["verify"] = "verify"
    kmax: int
    n: int
    field: str
    classes: int
    checks: list[CheckResult] = pydantic.Field(default_factory=list)
    created: datetime.datetime = pydantic.Field(default_factory=datetime.datetime.now)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class SelftestReport(pydantic.BaseModel):
    kind: Literal["selftest"] = "selftest"
    samples: int
    seed: int
    checks: list[CheckResult] = pydantic.Field(default_factory=list)
    created: datetime.datetime = pydantic.Field(default_factory=datetime.datetime.now)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class ResolutionReport(pydantic.BaseModel):
    """Signed complete resolution of a star tangle and its subdiagram sum."""

    kind: Literal["resolution"] = "resolution"
    k: int
    terms: list[tuple[int, str]]
    subdiagram_terms: int
    positive: int
    negative: int
    min_chord_degree: int | None

    @property
    def passed(self) -> bool:
        return self.min_chord_degree is None or self.min_chord_degree >= self.k - 1


Report = VerifyReport | SelftestReport | ResolutionReport
