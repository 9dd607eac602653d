"""Loading and validation of simulation result CSVs.

The input contract is the simulation CLI's fixed result schema: fourteen
columns, absent values empty, numbers in plain decimal. Anything else is
a hard error; figures never guess.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

SCHEMA = [
    "campaign", "policy", "epsilon", "c", "prior", "p", "q", "b",
    "rounds", "replicates", "window", "I", "I_R", "stderr_I",
]

_TEXT_COLUMNS = {"campaign", "policy"}

# panel / legend order when several policies appear in one figure
POLICY_ORDER = ("epsilon-greedy", "ucb1", "thompson")


class FigureDataError(ValueError):
    """Input rows cannot support the requested figure."""


@dataclass(frozen=True)
class ResultRow:
    campaign: str
    policy: str
    epsilon: float | None
    c: float | None
    prior: float | None
    p: float | None
    q: float | None
    b: float | None
    rounds: float | None
    replicates: float | None
    window: float | None
    I: float | None
    I_R: float | None
    stderr_I: float | None


def _parse_cell(column: str, value: str, path: Path, line: int):
    if column in _TEXT_COLUMNS:
        return value
    if value == "":
        return None
    try:
        return float(value)
    except ValueError as exc:
        raise FigureDataError(
            f"{path}:{line}: column {column!r} has non-numeric value {value!r}"
        ) from exc


def load_results(paths: list[str | Path]) -> list[ResultRow]:
    """Read and concatenate result CSVs, enforcing the exact schema."""
    if not paths:
        raise FigureDataError("no input CSVs given")
    rows: list[ResultRow] = []
    for raw_path in paths:
        path = Path(raw_path)
        try:
            handle = path.open(newline="")
        except OSError as exc:
            raise FigureDataError(f"cannot read {path}: {exc}") from exc
        with handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != SCHEMA:
                raise FigureDataError(
                    f"{path}: header does not match the result schema; "
                    f"expected {SCHEMA}, got {header}"
                )
            for line, record in enumerate(reader, start=2):
                if len(record) != len(SCHEMA):
                    raise FigureDataError(
                        f"{path}:{line}: expected {len(SCHEMA)} fields, got {len(record)}"
                    )
                rows.append(
                    ResultRow(
                        **{
                            col: _parse_cell(col, value, path, line)
                            for col, value in zip(SCHEMA, record)
                        }
                    )
                )
    if not rows:
        raise FigureDataError("input CSVs contain no data rows")
    return rows


def require_unit_interval(rows: list[ResultRow], column: str = "I") -> None:
    for row in rows:
        value = getattr(row, column)
        if value is None:
            raise FigureDataError(f"column {column!r} is empty in a data row")
        if not 0.0 <= value <= 1.0:
            raise FigureDataError(
                f"column {column!r} value {value} outside [0, 1]"
            )


def policies_in_order(rows: list[ResultRow]) -> list[str]:
    present = {row.policy for row in rows}
    ordered = [name for name in POLICY_ORDER if name in present]
    ordered += sorted(present - set(POLICY_ORDER))
    return ordered


def single_value(rows: list[ResultRow], column: str, context: str) -> float:
    values = {getattr(row, column) for row in rows}
    if len(values) != 1 or None in values:
        raise FigureDataError(
            f"{context}: expected one {column!r} value across rows, got {sorted(values, key=str)}"
        )
    return values.pop()


def rectangular_grid(
    rows: list[ResultRow], context: str
) -> tuple[list[float], list[float], list[list[float]]]:
    """Arrange sweep rows into a (p, q) matrix of cooperation indices.

    Every (p, q) pair must appear exactly once and the points must form
    the full Cartesian product of the axis values.
    """
    by_point: dict[tuple[float, float], float] = {}
    for row in rows:
        if row.p is None or row.q is None:
            raise FigureDataError(f"{context}: rows must carry both p and q")
        key = (row.p, row.q)
        if key in by_point:
            raise FigureDataError(f"{context}: duplicate grid point p={row.p}, q={row.q}")
        by_point[key] = row.I
    p_values = sorted({p for p, _ in by_point})
    q_values = sorted({q for _, q in by_point})
    if len(by_point) != len(p_values) * len(q_values):
        raise FigureDataError(
            f"{context}: grid is not rectangular "
            f"({len(by_point)} points != {len(p_values)} x {len(q_values)})"
        )
    try:
        matrix = [[by_point[(p, q)] for q in q_values] for p in p_values]
    except KeyError as exc:
        raise FigureDataError(f"{context}: missing grid point {exc}") from exc
    return p_values, q_values, matrix
