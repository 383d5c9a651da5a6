"""Ingestion and standardization of wide-format indicator time series.

Wide format: one row per (entity, indicator code), first two columns naming
entity and code, remaining column headers 4-digit years.  Rows are aligned
into one observation per (entity, year) with every indicator present, then
standardized column-wise.

All standard deviations in this package use the population divisor n, so
``standardize`` and ``summary_stats`` agree with each other.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConflictError,
    ContractError,
    DataError,
    DegenerateColumnError,
    EmptyDataError,
    ParseError,
)

MISSING_POLICIES = ("drop-incomplete", "linear-interpolate")

# Float comparisons for the standardized-matrix invariant.
_STANDARD_TOL = 1e-9


@dataclass(frozen=True)
class IndicatorSeries:
    """One indicator observed over time for one entity.

    ``year_values`` is an ordered sequence of (year, value) pairs where a
    value of ``None`` marks a missing observation.  Years must be strictly
    increasing.
    """

    indicator_code: str
    entity: str
    year_values: tuple[tuple[int, float | None], ...]

    def __post_init__(self):
        if not self.indicator_code:
            raise ContractError("indicator_code must be non-empty")
        years = [y for y, _ in self.year_values]
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ContractError(
                f"years must be strictly increasing for {self.entity}/{self.indicator_code}"
            )

    @property
    def years(self) -> tuple[int, ...]:
        return tuple(y for y, _ in self.year_values)


@dataclass(frozen=True)
class DataMatrix:
    """An n x d table of indicator values with no missing entries.

    ``column_means`` / ``column_stds`` hold the statistics of the data the
    matrix was built from: for an unstandardized matrix they are its own
    column statistics, after ``standardize`` they record the original
    (pre-scaling) values.  Standard deviations use the population divisor.
    """

    variable_names: tuple[str, ...]
    rows: np.ndarray
    column_means: np.ndarray
    column_stds: np.ndarray
    standardized: bool = False
    row_labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "column_means", np.asarray(self.column_means, dtype=float))
        object.__setattr__(self, "column_stds", np.asarray(self.column_stds, dtype=float))
        if rows.ndim != 2:
            raise ContractError("rows must be a 2-d table")
        if rows.shape[1] != len(self.variable_names):
            raise ContractError("row width does not match variable_names")
        if not np.all(np.isfinite(rows)):
            raise DataError("matrix contains missing or non-finite entries")
        if self.standardized:
            if np.any(self.column_stds <= 0):
                raise ContractError("standardized matrix requires positive column_stds")
            if np.max(np.abs(rows.mean(axis=0))) > _STANDARD_TOL:
                raise ContractError("standardized matrix must have zero column means")
            if np.max(np.abs(rows.std(axis=0) - 1.0)) > _STANDARD_TOL:
                raise ContractError("standardized matrix must have unit column stds")

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def d(self) -> int:
        return self.rows.shape[1]

    def column(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise DataError(f"unknown variable {name!r}") from None


@dataclass(frozen=True)
class VariableSummary:
    name: str
    mean: float
    std: float
    min: float
    max: float


def _parse_year(header: str, position: int) -> int:
    h = header.strip()
    if len(h) == 4 and h.isdigit():
        return int(h)
    raise ParseError(f"column {position + 1} header {header!r} is not a 4-digit year")


def parse_worldbank_wide(csv_text: str) -> list[IndicatorSeries]:
    """Parse wide-format indicator CSV text into one series per row.

    Expects a header of ``entity, indicator_code, <year>, <year>, ...``.
    Empty cells become missing values; any other non-numeric cell is a
    parse error carrying its row/column position.
    """
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input: no header row") from None
    if len(header) < 3:
        raise ParseError("header must have entity, indicator-code and year columns")
    for pos, name in enumerate(header[:2]):
        if name.strip() and name.strip()[:4].isdigit() and len(name.strip()) == 4:
            label = "entity" if pos == 0 else "indicator-code"
            raise ParseError(f"column {pos + 1} looks like a year; expected the {label} column")
    years = [_parse_year(h, i + 2) for i, h in enumerate(header[2:])]

    series = []
    for row_idx, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"row {row_idx} has {len(row)} cells, expected {len(header)}")
        entity, code = row[0].strip(), row[1].strip()
        if not code:
            raise ParseError(f"row {row_idx}: empty indicator code")
        values: list[tuple[int, float | None]] = []
        for col_idx, cell in enumerate(row[2:], start=3):
            text = cell.strip()
            if not text:
                values.append((years[col_idx - 3], None))
                continue
            try:
                values.append((years[col_idx - 3], float(text)))
            except ValueError:
                raise ParseError(
                    f"row {row_idx}, column {col_idx}: {cell!r} is not numeric"
                ) from None
        series.append(IndicatorSeries(code, entity, tuple(values)))
    return series


def serialize_worldbank_wide(series: list[IndicatorSeries]) -> str:
    """Inverse of :func:`parse_worldbank_wide` over a shared year axis."""
    if not series:
        raise ContractError("nothing to serialize")
    years = sorted({y for s in series for y in s.years})
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["entity", "indicator_code"] + [str(y) for y in years])
    for s in series:
        lookup = dict(s.year_values)
        writer.writerow(
            [s.entity, s.indicator_code]
            + [_format_cell(lookup.get(y)) for y in years]
        )
    return out.getvalue()


def _format_cell(value: float | None) -> str:
    if value is None:
        return ""
    return repr(value)


def _interpolate_interior(
    values: list[float | None], years: list[int]
) -> list[float | None]:
    """Fill interior gaps linearly in year; leading/trailing gaps stay missing."""
    known = [i for i, v in enumerate(values) if v is not None]
    if len(known) < 2:
        return list(values)
    out = list(values)
    for lo, hi in zip(known, known[1:]):
        if hi - lo > 1:
            v0, v1 = values[lo], values[hi]
            for k in range(lo + 1, hi):
                frac = (years[k] - years[lo]) / (years[hi] - years[lo])
                out[k] = v0 + (v1 - v0) * frac
    return out


def align(series: list[IndicatorSeries], policy: str = "drop-incomplete") -> DataMatrix:
    """Align series into one unstandardized observation row per (entity, year).

    ``drop-incomplete`` removes rows with any missing value;
    ``linear-interpolate`` first fills interior gaps per series, then drops
    rows that are still incomplete (leading/trailing gaps).
    """
    if policy not in MISSING_POLICIES:
        raise ContractError(f"unknown missing policy {policy!r}; expected one of {MISSING_POLICIES}")
    if len(series) < 2:
        raise ContractError("need at least two series to align")

    codes = sorted({s.indicator_code for s in series})
    entities = sorted({s.entity for s in series})
    by_key: dict[tuple[str, str], IndicatorSeries] = {}
    for s in series:
        key = (s.entity, s.indicator_code)
        if key in by_key:
            raise ConflictError(f"duplicate series for entity {s.entity!r}, indicator {s.indicator_code!r}")
        by_key[key] = s

    rows: list[list[float]] = []
    labels: list[str] = []
    for entity in entities:
        entity_series = {c: by_key.get((entity, c)) for c in codes}
        years = sorted({y for s in entity_series.values() if s is not None for y in s.years})
        per_code: dict[str, dict[int, float | None]] = {}
        for code, s in entity_series.items():
            if s is None:
                per_code[code] = {}
                continue
            values: list[float | None] = [dict(s.year_values).get(y) for y in years]
            if policy == "linear-interpolate":
                values = _interpolate_interior(values, years)
            per_code[code] = dict(zip(years, values))
        for year in years:
            row = [per_code[c].get(year) for c in codes]
            if any(v is None for v in row):
                continue
            rows.append([float(v) for v in row])  # type: ignore[arg-type]
            labels.append(f"{entity}:{year}")

    if not rows:
        raise EmptyDataError(f"no complete observation rows remain under policy {policy!r}")
    table = np.asarray(rows, dtype=float)
    return DataMatrix(
        variable_names=tuple(codes),
        rows=table,
        column_means=table.mean(axis=0),
        column_stds=table.std(axis=0),
        standardized=False,
        row_labels=tuple(labels),
    )


def standardize(matrix: DataMatrix) -> DataMatrix:
    """Column-wise z-scores with the population (n) divisor.

    Idempotent: standardizing a standardized matrix returns it unchanged.
    The original column means/stds are recorded on the result.
    """
    if matrix.standardized:
        return matrix
    means = matrix.rows.mean(axis=0)
    stds = matrix.rows.std(axis=0)
    for j, s in enumerate(stds):
        if s <= 0.0:
            raise DegenerateColumnError(
                f"variable {matrix.variable_names[j]!r} is constant; cannot standardize"
            )
    z = (matrix.rows - means) / stds
    # Exact re-centering keeps the invariant within tolerance even after
    # a prior affine transform of the raw data.
    z = z - z.mean(axis=0)
    scale = z.std(axis=0)
    z = z / scale
    return DataMatrix(
        variable_names=matrix.variable_names,
        rows=z,
        column_means=means,
        column_stds=stds,
        standardized=True,
        row_labels=matrix.row_labels,
    )


def summary_stats(matrix: DataMatrix) -> list[VariableSummary]:
    """Per-variable mean, population standard deviation, min and max."""
    if matrix.n == 0:
        raise EmptyDataError("empty matrix")
    out = []
    for j, name in enumerate(matrix.variable_names):
        col = matrix.rows[:, j]
        out.append(
            VariableSummary(
                name=name,
                mean=float(col.mean()),
                std=float(col.std()),
                min=float(col.min()),
                max=float(col.max()),
            )
        )
    return out


def select_columns(matrix: DataMatrix, indices: list[int]) -> DataMatrix:
    """Sub-matrix over the given columns, preserving the standardized flag.

    Column standardization is per column, so any column subset of a
    standardized matrix is itself standardized.
    """
    if not indices:
        raise ContractError("need at least one column")
    if any(i < 0 or i >= matrix.d for i in indices):
        raise ContractError("column index out of range")
    return DataMatrix(
        variable_names=tuple(matrix.variable_names[i] for i in indices),
        rows=matrix.rows[:, indices],
        column_means=matrix.column_means[list(indices)],
        column_stds=matrix.column_stds[list(indices)],
        standardized=matrix.standardized,
        row_labels=matrix.row_labels,
    )


def matrix_to_document(matrix: DataMatrix) -> str:
    """Serialize to the self-describing structured-text document format."""
    doc = {
        "kind": "data-matrix",
        "variable_names": list(matrix.variable_names),
        "standardized": matrix.standardized,
        "column_means": [float(v) for v in matrix.column_means],
        "column_stds": [float(v) for v in matrix.column_stds],
        "row_labels": list(matrix.row_labels),
        "rows": [[float(v) for v in row] for row in matrix.rows],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def matrix_from_document(text: str) -> DataMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a valid matrix document: {exc}") from None
    if not isinstance(doc, dict) or doc.get("kind") != "data-matrix":
        raise ParseError("document kind is not data-matrix")
    try:
        return DataMatrix(
            variable_names=tuple(doc["variable_names"]),
            rows=np.asarray(doc["rows"], dtype=float),
            column_means=np.asarray(doc["column_means"], dtype=float),
            column_stds=np.asarray(doc["column_stds"], dtype=float),
            standardized=bool(doc["standardized"]),
            row_labels=tuple(doc.get("row_labels", ())),
        )
    except KeyError as exc:
        raise ParseError(f"matrix document missing field {exc}") from None


def summaries_to_csv(summaries: list[VariableSummary]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["variable", "mean", "std", "min", "max"])
    for s in summaries:
        writer.writerow([s.name, repr(s.mean), repr(s.std), repr(s.min), repr(s.max)])
    return out.getvalue()
