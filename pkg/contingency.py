"""
Contingency tables: the Risk Quotient and its neutrality boundary value.

For a 2x2 table (a, b; c, d) with total n the Risk Quotient is 4|ad - bc| / n^2
and nb = RQ / (1 + RQ). For r x c tables RQ is the mean absolute deviation of
the observed counts from the counts expected under independence, (1/n) sum |O - E|.

Counts are exact integers throughout; RQ values are produced by a single
correctly rounded division of exact integers, so the 2x2 and r x c forms agree
bit for bit on 2x2 tables.
"""
import logging
import numbers
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np
from scipy.stats.contingency import expected_freq

from base import NbMetric
from core import Contrast, Domain, NbValue, ValidationError, canonical_transform

logger = logging.getLogger(__name__)

Cells = Tuple[Tuple[int, ...], ...]


class ContingencyError(ValidationError):
    """Base class for contingency table errors"""
    pass


class DimensionError(ContingencyError):
    """Raised when an operation needs a table of a different shape"""
    pass


class DegenerateTableError(ContingencyError):
    """Raised when a table has no observations"""
    pass


class InfeasibleExchangeError(ContingencyError):
    """Raised when a unit exchange would drive a cell below zero"""
    pass


class Direction(str, Enum):
    """Direction of a one-unit outcome exchange in a 2x2 table."""
    TOWARD_DIAGONAL = "toward_diagonal"
    TOWARD_ANTIDIAGONAL = "toward_antidiagonal"


def _as_count(value: object, row: int, col: int) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ContingencyError(
            f"cell ({row + 1}, {col + 1}) must be an integer count, got {value!r}", field="cells"
        )
    count = int(value)
    if count < 0:
        raise ContingencyError(f"cell ({row + 1}, {col + 1}) is negative: {count}", field="cells")
    return count


@dataclass(frozen=True)
class ContingencyTable:
    """
    An r x c table of nonnegative integer counts with cached margins.

    Attributes:
        cells: Counts, one tuple per row (r >= 2 rows, c >= 2 columns)
        row_totals: Sum of each row
        col_totals: Sum of each column
        n: Grand total, at least 1
    """
    cells: Cells
    row_totals: Tuple[int, ...] = field(init=False)
    col_totals: Tuple[int, ...] = field(init=False)
    n: int = field(init=False)

    def __post_init__(self):
        rows = [tuple(row) for row in self.cells]
        if len(rows) < 2:
            raise DimensionError(f"a table needs at least 2 rows, got {len(rows)}", field="cells")
        width = len(rows[0])
        if width < 2:
            raise DimensionError(f"a table needs at least 2 columns, got {width}", field="cells")
        for i, row in enumerate(rows):
            if len(row) != width:
                raise DimensionError(f"row {i + 1} has {len(row)} cells, expected {width}", field="cells")
        cells = tuple(tuple(_as_count(v, i, j) for j, v in enumerate(row)) for i, row in enumerate(rows))
        n = sum(sum(row) for row in cells)
        if n < 1:
            raise DegenerateTableError("table has no observations (n = 0)", field="cells")

        object.__setattr__(self, 'cells', cells)
        object.__setattr__(self, 'row_totals', tuple(sum(row) for row in cells))
        object.__setattr__(self, 'col_totals', tuple(sum(col) for col in zip(*cells)))
        object.__setattr__(self, 'n', n)

    @classmethod
    def fourfold(cls, a: int, b: int, c: int, d: int) -> 'ContingencyTable':
        """Build the 2x2 table (a, b; c, d)."""
        return cls(((a, b), (c, d)))

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.cells), len(self.cells[0])

    @property
    def is_2x2(self) -> bool:
        return self.shape == (2, 2)

    @property
    def has_degenerate_margins(self) -> bool:
        """True when some row or column total is zero."""
        return 0 in self.row_totals or 0 in self.col_totals

    def scaled(self, k: int) -> 'ContingencyTable':
        """
        Multiply every cell by a positive integer.

        Raises:
            ValidationError: If k is not a positive integer
        """
        if isinstance(k, bool) or not isinstance(k, numbers.Integral) or k < 1:
            raise ValidationError(f"k must be a positive integer, got {k!r}", field="k")
        return ContingencyTable(tuple(tuple(int(k) * v for v in row) for row in self.cells))

    def to_array(self) -> np.ndarray:
        return np.array(self.cells, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class ExpectedCounts:
    """
    Counts expected under independence, E_ij = row_i * col_j / n.

    Attributes:
        values: Read-only r x c array of expected counts
    """
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)


def _require_2x2(table: ContingencyTable):
    if not table.is_2x2:
        raise DimensionError(f"operation needs a 2x2 table, got {table.shape[0]}x{table.shape[1]}", field="table")


def cross_product_diff(table: ContingencyTable) -> int:
    """
    Signed cross-product difference ad - bc of a 2x2 table, in exact integers.

    Raises:
        DimensionError: If the table is not 2x2
    """
    _require_2x2(table)
    (a, b), (c, d) = table.cells
    return a * d - b * c


def rq_2x2(table: ContingencyTable) -> float:
    """
    Risk Quotient 4|ad - bc| / n^2 of a 2x2 table.

    Args:
        table: A 2x2 table

    Returns:
        float: RQ in [0, 1]; 0 on independence, 1 for the balanced diagonal table

    Raises:
        DimensionError: If the table is not 2x2
    """
    diff = cross_product_diff(table)
    return 4 * abs(diff) / (table.n * table.n)


def nb_2x2(table: ContingencyTable) -> NbValue:
    """
    Neutrality boundary value RQ / (1 + RQ) of a 2x2 table.

    Equivalent to the general form with delta = |ad - bc|, delta0 = 0 and
    scale = n^2 / 4.
    """
    return FOURFOLD.compute(table)


def expected_counts(table: ContingencyTable) -> ExpectedCounts:
    """
    Expected counts under independence.

    Args:
        table: Any validated table

    Returns:
        ExpectedCounts: row_i * col_j / n for every cell
    """
    if table.has_degenerate_margins:
        logger.debug("table %s has an all-zero row or column; some expected counts are 0", table.cells)
    return ExpectedCounts(expected_freq(table.to_array()))


def _absolute_deviation_numerator(table: ContingencyTable) -> int:
    # n * |O_ij - E_ij| = |n * O_ij - row_i * col_j|, kept in integers
    return sum(
        abs(table.n * observed - row_total * col_total)
        for row, row_total in zip(table.cells, table.row_totals)
        for observed, col_total in zip(row, table.col_totals)
    )


def rq_rxc_exact(table: ContingencyTable) -> Fraction:
    """Exact Risk Quotient (1/n) sum |O_ij - E_ij| as a rational number."""
    return Fraction(_absolute_deviation_numerator(table), table.n * table.n)


def rq_rxc(table: ContingencyTable) -> float:
    """
    Generalized Risk Quotient (1/n) sum |O_ij - E_ij| of an r x c table.

    The value is not clamped: tables such as the 3x3 diagonal exceed 1.
    For 2x2 tables it equals rq_2x2 exactly.
    """
    return _absolute_deviation_numerator(table) / (table.n * table.n)


def nb_rxc(table: ContingencyTable) -> NbValue:
    """Neutrality boundary value RQ / (1 + RQ) of an r x c table, always below 1."""
    return CONTINGENCY.compute(table)


def unit_exchange(table: ContingencyTable, direction: Direction) -> ContingencyTable:
    """
    Move one outcome between cells of a 2x2 table, keeping every margin fixed.

    toward_diagonal maps (a, b; c, d) to (a+1, b-1; c-1, d+1) and raises ad - bc
    by exactly n; toward_antidiagonal is the inverse and lowers it by n.

    Args:
        table: A 2x2 table
        direction: Which way to move the unit

    Returns:
        ContingencyTable: The exchanged table

    Raises:
        DimensionError: If the table is not 2x2
        InfeasibleExchangeError: If the exchange would make a cell negative
    """
    _require_2x2(table)
    (a, b), (c, d) = table.cells
    if Direction(direction) is Direction.TOWARD_DIAGONAL:
        step = 1
        donors = (("b", b), ("c", c))
    else:
        step = -1
        donors = (("a", a), ("d", d))
    for name, count in donors:
        if count == 0:
            raise InfeasibleExchangeError(
                f"exchange {Direction(direction).value} would make cell {name} negative", field="direction"
            )
    return ContingencyTable.fourfold(a + step, b - step, c - step, d + step)


def lattice_step(table: ContingencyTable) -> float:
    """
    Spacing 4/n between adjacent attainable RQ values under fixed margins.

    A unit exchange that does not cross ad - bc = 0 moves RQ by exactly this amount.
    """
    _require_2x2(table)
    return 4 / table.n


def neutrality_steps(table: ContingencyTable) -> int:
    """
    Number of unit exchanges that bring a 2x2 table closest to independence.

    Each exchange toward the independence line moves ad - bc by n. The count
    is |ad - bc| / n rounded to the nearest integer (ties stay on the original
    side), limited by how many exchanges the cells can supply.

    Args:
        table: A 2x2 table

    Returns:
        int: Feasible exchanges needed to minimise |ad - bc|
    """
    diff = cross_product_diff(table)
    (a, b), (c, d) = table.cells
    n = table.n
    steps = (2 * abs(diff) + n - 1) // (2 * n)
    feasible = min(a, d) if diff > 0 else min(b, c)
    return min(steps, feasible)


class FourfoldMetric(NbMetric[ContingencyTable]):
    """Risk Quotient nb of a 2x2 table: delta = |ad - bc|, delta0 = 0, scale = n^2 / 4."""
    domain = Domain.BINARY_2X2
    metric_name = "RQ-derived nb"

    def contrast(self, data: ContingencyTable) -> Contrast:
        return Contrast(float(abs(cross_product_diff(data))), 0.0, data.n * data.n / 4)

    def compute(self, data: ContingencyTable) -> NbValue:
        return self.label(canonical_transform(rq_2x2(data)))


class ContingencyMetric(NbMetric[ContingencyTable]):
    """Generalized Risk Quotient nb: delta = sum |n O_ij - row_i col_j|, delta0 = 0, scale = n^2."""
    domain = Domain.CONTINGENCY_RXC
    metric_name = "generalized RQ-derived nb"

    def contrast(self, data: ContingencyTable) -> Contrast:
        return Contrast(float(_absolute_deviation_numerator(data)), 0.0, float(data.n * data.n))

    def compute(self, data: ContingencyTable) -> NbValue:
        return self.label(canonical_transform(rq_rxc(data)))


FOURFOLD = FourfoldMetric()
CONTINGENCY = ContingencyMetric()


def table_from_counts(counts: Sequence[int]) -> ContingencyTable:
    """Build a 2x2 table from a flat (a, b, c, d) sequence."""
    if len(counts) != 4:
        raise DimensionError(f"a 2x2 table needs 4 counts, got {len(counts)}", field="counts")
    a, b, c, d = counts
    return ContingencyTable.fourfold(a, b, c, d)
