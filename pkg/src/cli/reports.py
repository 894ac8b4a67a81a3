import csv
import logging
from typing import Any, Dict, List, Sequence, TextIO

from cli.schemas import Check, ReportSchema, ScanRow
from models import OutputFormat
from utilities.constants import REPORT_FIELDS, SCAN_COLUMNS
from utilities.utils import format_float, to_json

logger = logging.getLogger(__name__)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return ";".join(str(v) for v in value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def csv_writer(stream: TextIO) -> Any:
    return csv.writer(stream, lineterminator="\n")


def write_mapping(data: Dict[str, Any], fmt: OutputFormat, stream: TextIO) -> None:
    """Write one flat record as JSON, a two-row CSV, or "key: value" lines."""
    if fmt == OutputFormat.JSON:
        stream.write(to_json(data) + "\n")
    elif fmt == OutputFormat.CSV:
        writer = csv_writer(stream)
        writer.writerow(list(data))
        writer.writerow([_cell(v) for v in data.values()])
    else:
        for key, value in data.items():
            stream.write(f"{key}: {_cell(value)}\n")
    stream.flush()


def write_report(report: ReportSchema, fmt: OutputFormat, stream: TextIO) -> None:
    record = report.to_record()
    if fmt == OutputFormat.CSV:
        extras = [key for key in record if key not in REPORT_FIELDS]
        record = {key: record[key] for key in REPORT_FIELDS + extras}
    write_mapping(record, fmt, stream)


def write_checks(checks: Sequence[Check], fmt: OutputFormat, stream: TextIO) -> None:
    records: List[Dict[str, Any]] = [check.to_record() for check in checks]
    if fmt == OutputFormat.JSON:
        stream.write(to_json(records) + "\n")
    elif fmt == OutputFormat.CSV:
        writer = csv_writer(stream)
        writer.writerow(["name", "measured", "reference", "tolerance", "pass"])
        for r in records:
            writer.writerow([_cell(r[key]) for key in ("name", "measured", "reference", "tolerance", "pass")])
    else:
        for r in records:
            status = "PASS" if r["pass"] else "FAIL"
            stream.write(f"{status} {r['name']}: measured={_cell(r['measured'])}")
            if r["reference"] is not None:
                stream.write(f" reference={_cell(r['reference'])} tolerance={_cell(r['tolerance'])}")
            stream.write("\n")
    stream.flush()


class ScanWriter:
    """CSV sink for scans; every row is flushed as soon as it is written."""

    def __init__(self, stream: TextIO):
        self.stream = stream
        self.writer = csv_writer(stream)
        self.rows = 0

    def write_header(self) -> None:
        self.writer.writerow(SCAN_COLUMNS)
        self.stream.flush()

    def write_row(self, row: ScanRow) -> None:
        data = row.model_dump()
        self.writer.writerow([_cell(data[column]) for column in SCAN_COLUMNS])
        self.stream.flush()
        self.rows += 1
        logger.debug(f"Scan row {self.rows}: N={row.N} k={row.k}")
