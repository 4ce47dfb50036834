from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from typing_extensions import override

from doodle_ft.common import reports
from doodle_ft.common.report_display import ReportDisplay


class RichReportDisplay(ReportDisplay):
    def __init__(self, console: Console | None = None):
        self.console = console or Console()

    # -------------------------
    # Helpers
    # -------------------------
    def _checks_table(self, title: str, checks: list[reports.CheckResult]) -> Table:
        table = Table(title=title)
        table.add_column("check")
        table.add_column("status")
        table.add_column("checked", justify="right")
        table.add_column("skipped", justify="right")
        table.add_column("first counterexample")
        for check in checks:
            if not check.passed:
                style = "red"
            elif check.skipped:
                style = "yellow"
            else:
                style = "green"
            table.add_row(
                check.name,
                f"[{style}]{self.status(check.passed, check.checked, check.skipped)}[/]",
                str(check.checked),
                str(check.skipped),
                check.counterexamples[0] if check.counterexamples else "",
            )
        return table

    def _verdict(self, passed: bool) -> None:
        style = "bold green" if passed else "bold red"
        self.console.print(Panel(self.status(passed), style=style))

    # -------------------------
    # Display Methods
    # -------------------------
    @override
    def display_verify(self, report: reports.VerifyReport) -> None:
        title = f"Census kmax={report.kmax} n={report.n} field={report.field} ({report.classes} classes)"
        self.console.print(self._checks_table(title, report.checks))
        self._verdict(report.passed)

    @override
    def display_selftest(self, report: reports.SelftestReport) -> None:
        title = f"Selftest samples={report.samples} seed={report.seed}"
        self.console.print(self._checks_table(title, report.checks))
        self._verdict(report.passed)

    @override
    def display_resolution(self, report: reports.ResolutionReport) -> None:
        body = "\n\n".join(f"{sign:+d}\n{tangle}" for sign, tangle in report.terms)
        self.console.print(
            Panel(body, title=f"Complete resolution of T{report.k}", style="bold blue")
        )
        degree = "inf" if report.min_chord_degree is None else str(report.min_chord_degree)
        self.console.print(
            f"subdiagram terms: {report.subdiagram_terms} "
            f"(+{report.positive} / -{report.negative}), min chord degree: {degree}"
        )
        self._verdict(report.passed)

    @override
    def display_message(self, text: str, *, error: bool = False) -> None:
        if error:
            self.console.print(f"[red]{text}[/]")
        else:
            self.console.print(text)
