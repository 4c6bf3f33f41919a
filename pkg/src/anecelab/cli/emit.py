"""
Output writers. CSV always carries a header, uses LF line endings and
formats reals with 12 significant digits.
"""

import contextlib
import csv
from typing import Any, Iterable, Iterator, List, Mapping, Optional, Sequence, TextIO

import numpy as np

from anecelab.model import CheckResult, DofReport

CHECK_COLUMNS = ("name", "measured", "target", "tolerance", "passed", "control")


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.12g" % float(value)
    return str(value)


def write_csv(
    stream: TextIO, columns: Sequence[str], rows: Iterable[Mapping[str, Any]]
) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(col)) for col in columns])


def check_rows(results: Iterable[CheckResult]) -> Iterator[dict]:
    for r in results:
        yield {
            "name": r.name,
            "measured": r.measured,
            "target": r.target,
            "tolerance": r.tolerance,
            "passed": r.passed,
            "control": r.control,
        }


def union_columns(rows: Iterable[Mapping[str, Any]]) -> List[str]:
    """Keys of all rows in first-seen order."""
    columns: List[str] = []
    for row in rows:
        columns.extend(k for k in row if k not in columns)
    return columns


def write_json(stream: TextIO, report: DofReport) -> None:
    stream.write(report.to_json() + "\n")


@contextlib.contextmanager
def open_output(path: Optional[str], default: TextIO) -> Iterator[TextIO]:
    if path is None:
        yield default
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        yield f
