"""
Text and JSON rendering of computation results and verification reports.

JSON output is deterministic: keys are sorted and every integer or rational
is written as a decimal string. Booleans stay booleans.
"""

import json
import logging
from fractions import Fraction
from typing import Any, Iterable, List, Sequence

from conecalc.catalog import TheoremRecord, VerificationReport
from conecalc.cones import PolyCone

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Recursively convert a payload so that numbers become strings."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "render"):
        return value.render()
    raise TypeError(f"Cannot serialize {type(value).__name__} to JSON")


def dump_json(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2)


def format_vector(vector: Sequence[Any]) -> str:
    return "(" + ", ".join(str(x) for x in vector) + ")"


def format_matrix(row_labels: Sequence[str], col_labels: Sequence[str], matrix: Sequence[Sequence[Any]]) -> str:
    """Aligned table with row and column labels."""
    cells = [[""] + list(col_labels)] + [
        [label] + [str(x) for x in row] for label, row in zip(row_labels, matrix)
    ]
    widths = [max(len(row[i]) for row in cells) for i in range(len(cells[0]))]
    lines = []
    for row in cells:
        lines.append("  ".join(cell.rjust(width) for cell, width in zip(row, widths)).rstrip())
    return "\n".join(lines)


def format_cone(title: str, cone: PolyCone) -> str:
    lines = [f"{title} (rank {cone.rank})", "  rays:"]
    lines += [f"    {format_vector(ray)}" for ray in cone.rays]
    lines.append("  facets:")
    lines += [f"    {format_vector(f)}" for f in cone.facets]
    return "\n".join(lines)


def _params_text(params: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in sorted(params.items())) or "-"


def format_report(report: VerificationReport) -> str:
    status = "PASS" if report.passed else "FAIL"
    lines = [f"{status} {report.case} [{_params_text(report.params)}]"]
    for check in report.checks:
        mark = "ok" if check.passed else "FAILED"
        lines.append(f"  [{mark}] {check.name}")
        if not check.passed:
            lines.append(f"      expected: {check.expected}")
            lines.append(f"      computed: {check.computed}")
    for note in report.notes:
        lines.append(f"  note: {note}")
    for assumption in report.assumptions:
        lines.append(f"  assumes: {assumption}")
    return "\n".join(lines)


def format_reports(reports: Iterable[VerificationReport]) -> str:
    reports = list(reports)
    failed = sum(1 for r in reports if not r.passed)
    body = [format_report(r) for r in reports]
    body.append(f"{len(reports) - failed}/{len(reports)} case(s) passed")
    return "\n".join(body)


def format_catalog(records: Iterable[TheoremRecord]) -> str:
    lines: List[str] = []
    for record in records:
        lines.append(f"{record.id:<14} {record.family:<14} {record.range_text()}")
        lines.append(f"    {record.description}")
    return "\n".join(lines)
