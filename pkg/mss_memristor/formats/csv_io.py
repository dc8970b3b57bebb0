"""Trace and Measurement CSV Files.

Files are UTF-8 with '.' as the decimal separator. Lines starting with '#' are comments; comments of the form
`# key: value` before the header row carry trace metadata. The first non-comment line is the header row.

Floats are written with 17 significant digits, so reading a written file reproduces every value exactly.
"""
from typing import Dict, List, Sequence, Tuple
from logging import getLogger
from pathlib import Path
import csv

import numpy as np

from ..trace import Trace, MeasuredTrace, TRACE_COLUMNS
from .errors import TraceFormatError

# pylint: disable=C0103
logger = getLogger(__name__)

MEASUREMENT_COLUMNS = ("t", "v", "i")

ELEMENT_VOLTAGE_PREFIX = "v_e"


def format_float(value: float) -> str:
    """Shortest text that is guaranteed to read back as the same double."""
    return format(float(value), ".17g")


class _Table:
    def __init__(self) -> None:
        self.metadata: Dict[str, str] = {}
        self.header: List[str] = []
        self.header_line = 0
        self.rows: List[Tuple[int, List[float]]] = []

    def column(self, name: str) -> np.ndarray:
        index = self.header.index(name)
        return np.asarray([row[index] for _, row in self.rows], dtype=float)


def _read_table(path: Path) -> _Table:
    table = _Table()
    with open(path, "rb") as source:
        for line_number, raw_line in enumerate(source, start=1):
            try:
                line = raw_line.decode("utf-8")
            except UnicodeDecodeError as error:
                raise TraceFormatError.parse_error(line_number, f"invalid UTF-8: {error.reason}") from error
            if not line.strip():
                continue
            if line.lstrip().startswith("#"):
                if not table.header:
                    comment = line.strip()[1:].strip()
                    key, separator, value = comment.partition(":")
                    if separator and key.strip():
                        table.metadata[key.strip()] = value.strip()
                continue

            fields = next(csv.reader([line.rstrip("\r\n")]))
            if not table.header:
                table.header = [field.strip() for field in fields]
                table.header_line = line_number
                continue

            if len(fields) != len(table.header):
                raise TraceFormatError.parse_error(
                    line_number, f"expected {len(table.header)} fields, got {len(fields)}"
                )
            try:
                table.rows.append((line_number, [float(field) for field in fields]))
            except ValueError as error:
                raise TraceFormatError.parse_error(line_number, str(error)) from error

    return table


def _load(path: Path, required: Sequence[str]) -> _Table:
    try:
        table = _read_table(path)
    except TraceFormatError as err:
        logger.warning(str(err))
        raise err

    if not table.header:
        err = TraceFormatError.validation(f"{path} has no header row")
        logger.warning(str(err))
        raise err
    missing = [name for name in required if name not in table.header]
    if missing:
        err = TraceFormatError.parse_error(table.header_line, f"header is missing columns {', '.join(missing)}")
        logger.warning(str(err))
        raise err
    return table


def read_measurement_csv(path: Path) -> MeasuredTrace:
    """
    Reads a measured I-V record from the columns `t`, `v` and `i` (other columns are ignored).

    Parameters
    ----------
    path: Path
        CSV file with a header row.

    Returns
    -------
    measured: MeasuredTrace

    Raises
    ------
    TraceFormatError
        PARSE_ERROR (with the 1-based line number) for malformed rows or headers, VALIDATION for fewer than
        10 samples or non-increasing timestamps.
    """
    table = _load(Path(path), MEASUREMENT_COLUMNS)
    measured = MeasuredTrace(table.column("t"), table.column("v"), table.column("i"), source=str(path))

    logger.debug("Read %s measured samples from %s.", len(measured), path)
    return measured


def write_measurement_csv(measured: MeasuredTrace, path: Path) -> None:
    """Writes a measured record as `t,v,i` rows."""
    with open(path, "w", encoding="utf-8", newline="") as target:
        writer = csv.writer(target, lineterminator="\n")
        if measured.source:
            target.write(f"# source: {measured.source}\n")
        writer.writerow(MEASUREMENT_COLUMNS)
        for row in zip(measured.t, measured.v, measured.i):
            writer.writerow([format_float(value) for value in row])


def write_trace_csv(trace: Trace, path: Path) -> None:
    """
    Writes `trace` as `t,v,i,g,n_a` rows (plus `v_e0, v_e1, ...` for multi-element circuits).

    The metadata is echoed into `# key: value` comments above the header, so the file is sufficient to
    re-run the simulation.
    """
    header = list(TRACE_COLUMNS)
    if trace.element_voltages is not None:
        header += [f"{ELEMENT_VOLTAGE_PREFIX}{index}" for index in range(trace.element_voltages.shape[1])]

    with open(path, "w", encoding="utf-8", newline="") as target:
        for key, value in trace.metadata.items():
            target.write(f"# {key}: {value}\n")
        if trace.saturated:
            target.write("# saturated: true\n")

        writer = csv.writer(target, lineterminator="\n")
        writer.writerow(header)
        for index in range(len(trace)):
            row = [trace.t[index], trace.v[index], trace.i[index], trace.g[index], trace.n_a[index]]
            if trace.element_voltages is not None:
                row += list(trace.element_voltages[index])
            writer.writerow([format_float(value) for value in row])

    logger.info("Wrote %s trace rows to %s.", len(trace), path)


def read_trace_csv(path: Path) -> Trace:
    """
    Reads a trace written by `write_trace_csv`, metadata included.

    Raises
    ------
    TraceFormatError
        If a row or the header is malformed or the timestamps are not increasing.
    """
    table = _load(Path(path), TRACE_COLUMNS)
    metadata = dict(table.metadata)
    saturated = metadata.pop("saturated", "false") == "true"

    element_columns = [name for name in table.header if name.startswith(ELEMENT_VOLTAGE_PREFIX)]
    element_voltages = None
    if element_columns:
        element_voltages = np.column_stack([table.column(name) for name in element_columns])

    columns = [table.column(name) for name in TRACE_COLUMNS]
    return Trace(
        *columns,
        metadata=metadata,
        element_voltages=element_voltages,
        saturated=saturated,
        integer_populations=metadata.get("mode") == "stochastic",
    )
