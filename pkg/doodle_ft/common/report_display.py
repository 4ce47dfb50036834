"""Provides an abstraction for displaying verification reports."""

import abc

from doodle_ft.common import reports


class ReportDisplay(abc.ABC):
    """
    Abstract base class for displaying reports.

    Concrete implementations could be:
    - Terminal UI
    - Plain text for logs
    """

    # ------------------------------------------------------------------
    @staticmethod
    def status(passed: bool, checked: int | None = None, skipped: int = 0) -> str:
        """A skipped item never reads as a plain PASS."""
        if not passed:
            return "FAIL"
        if skipped and not checked:
            return "SKIPPED"
        if skipped:
            return f"PASS ({skipped} skipped)"
        return "PASS"

    # ------------------------------------------------------------------
    def display(self, report: reports.Report) -> None:
        """
        Displays a report depending on its kind.
        """
        match report.kind:
            case "verify":
                self.display_verify(report)
            case "selftest":
                self.display_selftest(report)
            case "resolution":
                self.display_resolution(report)
            case _:
                raise ValueError(f"Unknown report kind: {report.kind}")

    # ------------------------------------------------------------------
    @abc.abstractmethod
    def display_verify(self, report: reports.VerifyReport) -> None:
        raise NotImplementedError

    @abc.abstractmethod
    def display_selftest(self, report: reports.SelftestReport) -> None:
        raise NotImplementedError

    @abc.abstractmethod
    def display_resolution(self, report: reports.ResolutionReport) -> None:
        raise NotImplementedError

    @abc.abstractmethod
    def display_message(self, text: str, *, error: bool = False) -> None:
        raise NotImplementedError
