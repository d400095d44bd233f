"""Hourly capacity-factor and hydrogen-demand series.

Both series types are immutable after construction and validated on entry:
either a file parses into a complete, in-range series of exactly the
configured horizon, or a typed error is raised. Nothing is imputed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import LengthMismatch, MalformedRow, NegativeRate, OutOfRange

CF_HEADER = ("hour", "value")
DEMAND_HEADER = ("hour", "kg_per_h")


@dataclass(frozen=True)
class CapacityFactorSeries:
    """Per-source hourly availability factors in [0, 1].

    ``values[t]`` is the fraction of the booked nominal power the source
    delivers in hour ``t``; ``dt_hours`` is the step length.
    """

    source_id: str
    values: np.ndarray = field(repr=False)
    dt_hours: float = 1.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        vals.setflags(write=False)
        if self.dt_hours <= 0:
            raise OutOfRange(f"dt_hours must be > 0, got {self.dt_hours}")
        if vals.ndim != 1:
            raise OutOfRange("capacity factors must form a 1-d sequence")
        if vals.size and (np.min(vals) < 0.0 or np.max(vals) > 1.0):
            bad = vals[(vals < 0.0) | (vals > 1.0)][0]
            raise OutOfRange(
                f"capacity factor {bad!r} for source {self.source_id!r} "
                "outside [0, 1]"
            )

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class DemandSeries:
    """Hourly hydrogen demand in kg/h, all entries non-negative."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        vals.setflags(write=False)
        if vals.size and np.min(vals) < 0.0:
            raise NegativeRate(f"demand contains negative rate {np.min(vals)!r}")

    def __len__(self) -> int:
        return int(self.values.size)

    def total_mass(self, dt_hours: float = 1.0) -> float:
        """Total hydrogen mass over the series in kg."""
        return float(np.sum(self.values) * dt_hours)


def _read_two_column_csv(path: str | Path, header: tuple[str, str]) -> list[float]:
    path = Path(path)
    values: list[float] = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or [c.strip().lower() for c in first] != list(header):
            raise MalformedRow(
                f"{path}: expected header '{header[0]},{header[1]}', got {first!r}"
            )
        for lineno, row in enumerate(reader):
            if not row:
                continue
            if len(row) != 2:
                raise MalformedRow(f"{path}:{lineno + 2}: expected 2 cells, got {len(row)}")
            try:
                hour = int(row[0])
                value = float(row[1])
            except ValueError as exc:
                raise MalformedRow(f"{path}:{lineno + 2}: non-numeric cell ({exc})") from None
            if hour != lineno:
                raise MalformedRow(
                    f"{path}:{lineno + 2}: hour column must run 0..T-1 without gaps, "
                    f"got {hour} at position {lineno}"
                )
            values.append(value)
    return values


def load_capacity_factors(path: str | Path, source_id: str, horizon: int) -> CapacityFactorSeries:
    """Load and validate an hourly capacity-factor CSV (header ``hour,value``).

    Raises MalformedRow for non-numeric cells or hour gaps, OutOfRange for
    values outside [0, 1] and LengthMismatch when the row count differs from
    ``horizon``.
    """
    values = _read_two_column_csv(path, CF_HEADER)
    if len(values) != horizon:
        raise LengthMismatch(f"{path}: {len(values)} rows, expected horizon {horizon}")
    return CapacityFactorSeries(source_id=source_id, values=np.array(values))


def load_demand_series(path: str | Path, horizon: int) -> DemandSeries:
    """Load an hourly demand CSV (header ``hour,kg_per_h``)."""
    values = _read_two_column_csv(path, DEMAND_HEADER)
    if len(values) != horizon:
        raise LengthMismatch(f"{path}: {len(values)} rows, expected horizon {horizon}")
    return DemandSeries(values=np.array(values))


def constant_demand(rate: float, horizon: int) -> DemandSeries:
    """Demand series of ``horizon`` copies of ``rate`` (kg/h)."""
    if rate < 0:
        raise NegativeRate(f"demand rate must be >= 0, got {rate}")
    return DemandSeries(values=np.full(horizon, float(rate)))


def write_capacity_factors(series: CapacityFactorSeries, path: str | Path) -> None:
    """Serialize a series back to the CSV schema (round-trip safe)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CF_HEADER)
        for hour, value in enumerate(series.values):
            writer.writerow([hour, repr(float(value))])
