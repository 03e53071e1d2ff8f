"""Internal syntax validation for PlantUML sources.

This is a proxy for running the PlantUML compiler: a source is valid when it
parses and every relationship endpoint resolves to a declared class or enum.
Unrecognized-but-skippable lines are reported as warnings and never flip
validity.  The CLI offers an external-compiler hook for exact reproduction of
compiler-based judgments.
"""

from __future__ import annotations

from .model import Diagram, Issue, IssueSeverity, ValidationReport
from .parser import UNKNOWN_ENDPOINT, ParseError, _Parser


def validate(text: str) -> ValidationReport:
    """Produce a ValidationReport for one source text."""
    _, report = parse_and_validate(text)
    return report


def parse_and_validate(text: str) -> tuple[Diagram | None, ValidationReport]:
    """Parse and validate in one pass.

    Returns the parsed Diagram (None when parsing fails fatally) along with
    the report.  Unresolved relationship endpoints are error-severity issues;
    skipped-line warnings keep the source valid.
    """
    parser = _Parser(text)
    try:
        diagram = parser.parse()
    except ParseError as exc:
        issue = Issue(exc.line, exc.kind, str(exc), IssueSeverity.ERROR)
        return None, ValidationReport(is_valid=False, issues=[issue])

    issues: list[Issue] = []
    for warning in parser.warnings:
        if warning.kind == UNKNOWN_ENDPOINT:
            issues.append(Issue(warning.line, warning.kind, warning.message,
                                IssueSeverity.ERROR))
        else:
            issues.append(warning)
    is_valid = not any(i.severity is IssueSeverity.ERROR for i in issues)
    return diagram, ValidationReport(is_valid=is_valid, issues=issues)
