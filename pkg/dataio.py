"""
CSV ingestion for contingency tables, grouped observations and paired samples.

Parsing is locale independent: a decimal point only, no thousands separators.
Errors report the 1-based data row (the header, where there is one, is not
counted) and the 1-based column where one applies. Every row must have as
many fields as the first one; nothing is padded or truncated.
"""
import io
import logging
import math
import sys
from typing import List, Optional, TextIO, Tuple, Union

import pandas as pd

from anova import GroupData
from contingency import ContingencyTable
from core import ValidationError
from correlation import PairedSample

logger = logging.getLogger(__name__)

Source = Union[str, TextIO]


class ParseError(ValidationError):
    """
    Raised when an input file cannot be parsed.

    Attributes:
        row: 1-based data row of the problem, if any
        column: 1-based column of the problem, if any
    """

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        location = ""
        if row is not None:
            location = f"row {row}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(location + message, field="input")
        self.row = row
        self.column = column


def read_source(path: str) -> str:
    """
    Read an input file, or standard input when path is "-".

    Raises:
        ParseError: If the file does not exist, cannot be read or is not UTF-8
    """
    name = "standard input" if path == "-" else path
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except FileNotFoundError:
        raise ParseError(f"File not found: {path}")
    except UnicodeDecodeError as e:
        raise ParseError(f"{name} is not valid UTF-8: byte {e.object[e.start:e.start + 1]!r} at offset {e.start}")
    except OSError as e:
        raise ParseError(f"Error reading {name}: {e}")


def _text(source: Source) -> str:
    return source if isinstance(source, str) else source.read()


# appended to every line so short rows can be told apart from empty trailing cells
_END = "\x1f"


def _ragged_row(error: pd.errors.ParserError, header_rows: int) -> ParseError:
    # the C tokenizer reports "Expected N fields in line L, saw M"
    message = str(error)
    _, _, tail = message.partition("Expected ")
    expected, _, tail = tail.partition(" fields in line ")
    line, _, saw = tail.partition(", saw ")
    saw = saw.strip()
    if not (expected.isdigit() and line.isdigit() and saw.isdigit()):
        return ParseError(f"malformed CSV: {' '.join(message.split())}")
    return ParseError(f"ragged row: {int(saw) - 1} cell(s), expected {int(expected) - 1}",
                      row=int(line) - header_rows)


def _read_rows(source: Source, header_rows: int = 0) -> pd.DataFrame:
    """
    Read CSV text into a frame of stripped strings, one column per field.

    Blank lines are dropped first, so line numbers and row numbers agree.

    Args:
        source: CSV text or a readable text stream
        header_rows: Leading lines not counted as data rows in error locations

    Raises:
        ParseError: On empty input or a row whose field count differs from the first row
    """
    lines = [line for line in _text(source).splitlines() if line.strip()]
    if not lines:
        raise ParseError("empty input")
    try:
        rows = pd.read_csv(  # type: ignore
            io.StringIO("\n".join(f"{line},{_END}" for line in lines)),
            header=None,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
            skip_blank_lines=False,
        )
    except pd.errors.ParserError as e:
        raise _ragged_row(e, header_rows)

    marker = rows.iloc[:, -1]
    short = (marker != _END).to_numpy()
    if short.any():
        position = int(short.argmax())
        present = list(rows.iloc[position]).index(_END)
        raise ParseError(f"ragged row: {present} cell(s), expected {rows.shape[1] - 1}",
                         row=position + 1 - header_rows)
    return rows.iloc[:, :-1].apply(lambda column: column.str.strip())


def _parse_count(cell: str, row: int, column: int) -> int:
    digits = cell[1:] if cell[:1] in ("+", "-") else cell
    if not (digits.isascii() and digits.isdecimal()):
        raise ParseError(f"not a nonnegative integer: {cell!r}", row=row, column=column)
    if cell.startswith("-"):
        raise ParseError(f"negative count {cell!r}", row=row, column=column)
    return int(digits)


def parse_table_csv(source: Source) -> ContingencyTable:
    """
    Parse a headerless CSV of nonnegative integer counts into a table.

    Whitespace around cells is tolerated and blank lines are skipped.

    Args:
        source: CSV text or a readable text stream

    Returns:
        ContingencyTable: The validated table

    Raises:
        ParseError: On a non-integer or negative cell, ragged rows, or fewer
            than 2 rows or columns
    """
    rows = _read_rows(source)
    if len(rows) < 2:
        raise ParseError(f"a table needs at least 2 rows, got {len(rows)}")
    width = rows.shape[1]
    if width < 2:
        raise ParseError(f"a table needs at least 2 columns, got {width}", row=1)

    cells: List[Tuple[int, ...]] = [
        tuple(_parse_count(cell, i, j) for j, cell in enumerate(row, start=1))
        for i, row in enumerate(rows.itertuples(index=False), start=1)
    ]

    logger.debug("parsed %dx%d table", len(cells), width)
    try:
        return ContingencyTable(tuple(cells))
    except ValidationError as e:
        raise ParseError(str(e))


def _read_two_columns(source: Source, header: Tuple[str, str]) -> pd.DataFrame:
    expected = ",".join(header)
    try:
        rows = _read_rows(source, header_rows=1)
    except ParseError as e:
        if e.row is None and str(e) == "empty input":
            raise ParseError(f"empty input; expected header '{expected}'")
        raise

    columns = tuple(rows.iloc[0])
    if columns != header:
        raise ParseError(f"missing header '{expected}', found '{','.join(columns)}'")
    df = rows.iloc[1:].reset_index(drop=True)
    df.columns = list(header)
    return df


def _numeric_column(df: pd.DataFrame, name: str, column: int) -> pd.Series:
    raw = df[name].str.strip()
    values = pd.to_numeric(raw, errors="coerce")
    for position, (text, value) in enumerate(zip(raw, values), start=1):
        if not math.isfinite(value):
            raise ParseError(f"not a finite number: {text!r}", row=position, column=column)
    return values.astype(float)


def parse_groups_csv(source: Source) -> GroupData:
    """
    Parse long-format "group,value" CSV into grouped observations.

    Groups keep the order in which their labels first appear.

    Args:
        source: CSV text or a readable text stream

    Returns:
        GroupData: One group per distinct label

    Raises:
        ParseError: On a missing header, a non-numeric value, fewer than two
            groups, or a group with fewer than two observations
    """
    df = _read_two_columns(source, ("group", "value"))
    df["value"] = _numeric_column(df, "value", column=2)
    df["group"] = df["group"].fillna("").str.strip()
    for position, label in enumerate(df["group"], start=1):
        if not label:
            raise ParseError("empty group label", row=position, column=1)

    grouped = df.groupby("group", sort=False)["value"]
    labels: List[str] = []
    groups: List[Tuple[float, ...]] = []
    for label, values in grouped:
        labels.append(str(label))
        groups.append(tuple(values.tolist()))
    for label, values in zip(labels, groups):
        if len(values) < 2:
            raise ParseError(f"group {label!r} has {len(values)} observation(s), at least 2 are required")
    if len(groups) < 2:
        raise ParseError(f"at least 2 groups are required, got {len(groups)}")

    logger.debug("parsed %d groups, %d observations", len(groups), len(df))
    return GroupData(tuple(groups), tuple(labels))


def parse_pairs_csv(source: Source) -> PairedSample:
    """
    Parse "x,y" CSV into a paired sample.

    Args:
        source: CSV text or a readable text stream

    Returns:
        PairedSample: Pairs in file order

    Raises:
        ParseError: On a missing header, a non-numeric value or fewer than 3 rows
    """
    df = _read_two_columns(source, ("x", "y"))
    if len(df) < 3:
        raise ParseError(f"at least 3 rows are required, got {len(df)}")
    x = _numeric_column(df, "x", column=1)
    y = _numeric_column(df, "y", column=2)

    logger.debug("parsed %d pairs", len(df))
    return PairedSample(tuple(zip(x.tolist(), y.tolist())))
