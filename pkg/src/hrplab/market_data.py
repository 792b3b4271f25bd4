"""Monthly return panels: CSV ingestion, synthetic generation, windowing.

File formats (UTF-8, comma separated):

* returns:   header ``date,<asset1>,<asset2>,...``; empty cell = missing
* risk-free: header ``date,rf``; gap-free, no missing values
* factors:   header ``date,mkt_rf[,smb,hml,rmw,cma,mom]``; ``mkt_rf`` mandatory

Dates are calendar months (``YYYY-MM``); returns are monthly simple
returns as decimal fractions (0.02 = 2%).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .months import is_contiguous, month_index, month_label, month_range
from .rng import SplitMix64

FACTOR_COLUMNS = ("mkt_rf", "smb", "hml", "rmw", "cma", "mom")


def _check_months_increasing(dates: tuple[str, ...], what: str) -> None:
    idx = [month_index(d) for d in dates]
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError(f"{what}: dates must be strictly increasing with no duplicates")


def _freeze(values: np.ndarray) -> np.ndarray:
    out = np.array(values, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ReturnsPanel:
    """Date-indexed matrix of monthly simple returns; NaN marks a missing cell."""

    dates: tuple[str, ...]
    assets: tuple[str, ...]
    values: np.ndarray  # shape (n_months, n_assets)

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "assets", tuple(self.assets))
        object.__setattr__(self, "values", _freeze(self.values))
        _check_months_increasing(self.dates, "returns panel")
        if len(set(self.assets)) != len(self.assets):
            raise ValueError("returns panel: duplicate asset identifiers")
        if not self.assets:
            raise ValueError("returns panel: at least one asset required")
        if self.values.shape != (len(self.dates), len(self.assets)):
            raise ValueError(
                f"returns panel: values shape {self.values.shape} does not match "
                f"{len(self.dates)} dates x {len(self.assets)} assets"
            )
        present = self.values[~np.isnan(self.values)]
        if present.size and present.min() <= -1.0:
            raise ValueError("returns panel: returns of -100% or worse are rejected")

    @property
    def n_months(self) -> int:
        return len(self.dates)

    @property
    def n_assets(self) -> int:
        return len(self.assets)

    def date_position(self, label: str) -> int:
        try:
            return self.dates.index(label)
        except ValueError:
            raise DataError(f"panel does not contain month {label}") from None


@dataclass(frozen=True)
class RiskFreeSeries:
    """Gap-free monthly risk-free rate series."""

    dates: tuple[str, ...]
    rf: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "rf", _freeze(self.rf))
        _check_months_increasing(self.dates, "risk-free series")
        if not is_contiguous(self.dates):
            raise ValueError("risk-free series: date gap within span")
        if self.rf.shape != (len(self.dates),):
            raise ValueError("risk-free series: one value per date required")
        if np.isnan(self.rf).any():
            raise ValueError("risk-free series: missing values are not allowed")

    def at(self, label: str) -> float:
        i = month_index(label) - month_index(self.dates[0])
        if not 0 <= i < len(self.dates):
            raise DataError(f"risk-free series does not cover month {label}")
        return float(self.rf[i])


@dataclass(frozen=True)
class FactorSeries:
    """Monthly factor series; ``mkt_rf`` is mandatory and gap-free."""

    dates: tuple[str, ...]
    columns: tuple[str, ...]
    values: np.ndarray  # shape (n_months, n_columns)

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "values", _freeze(self.values))
        _check_months_increasing(self.dates, "factor series")
        if not is_contiguous(self.dates):
            raise ValueError("factor series: date gap within span")
        unknown = [c for c in self.columns if c not in FACTOR_COLUMNS]
        if unknown:
            raise ValueError(f"factor series: unknown columns {unknown}")
        if "mkt_rf" not in self.columns:
            raise ValueError("factor series: mkt_rf column is mandatory")
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("factor series: duplicate columns")
        if self.values.shape != (len(self.dates), len(self.columns)):
            raise ValueError("factor series: values shape mismatch")
        if np.isnan(self.series("mkt_rf")).any():
            raise ValueError("factor series: mkt_rf must be present for every date")

    def series(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise ValueError(f"factor series has no column {name!r}")
        return self.values[:, self.columns.index(name)]

    def mkt_rf_at(self, label: str) -> float:
        i = month_index(label) - month_index(self.dates[0])
        if not 0 <= i < len(self.dates):
            raise DataError(f"factor series does not cover month {label}")
        return float(self.series("mkt_rf")[i])


@dataclass(frozen=True)
class WindowSpec:
    """Allocation date plus look-back and holding lengths in months."""

    as_of: str
    lookback_months: int
    hold_months: int

    def __post_init__(self) -> None:
        month_index(self.as_of)  # validates the label
        if self.lookback_months < 1:
            raise ValueError("lookback_months must be positive")
        if self.hold_months < 1:
            raise ValueError("hold_months must be positive")


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters for the seeded one-market / K-sector factor model."""

    n_assets: int
    n_sectors: int
    n_months: int
    seed: int
    market_beta_range: tuple[float, float] = (0.8, 1.2)
    sector_loading_range: tuple[float, float] = (0.5, 1.5)
    idio_vol: float = 0.03
    sector_vol: float = 0.03
    market_vol: float = 0.04
    rf_const: float = 0.002
    start_month: str = "2000-01"

    def __post_init__(self) -> None:
        if self.n_assets < 1 or self.n_months < 1:
            raise ValueError("n_assets and n_months must be positive")
        if not 1 <= self.n_sectors <= self.n_assets:
            raise ValueError("n_sectors must be in [1, n_assets]")
        if not 0 <= self.seed <= (1 << 64) - 1:
            raise ValueError("seed must fit in 64 unsigned bits")
        for name, (lo, hi) in (
            ("market_beta_range", self.market_beta_range),
            ("sector_loading_range", self.sector_loading_range),
        ):
            if lo > hi:
                raise ValueError(f"{name} is empty")
        for name, vol in (
            ("idio_vol", self.idio_vol),
            ("sector_vol", self.sector_vol),
            ("market_vol", self.market_vol),
        ):
            if vol <= 0:
                raise ValueError(f"{name} must be positive")
        month_index(self.start_month)

    def sector_of(self, asset_index: int) -> int:
        """Round-robin sector assignment."""
        return asset_index % self.n_sectors


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------


def _read_rows(path: str | Path) -> list[list[str]]:
    p = Path(path)
    if not p.exists():
        raise DataError(f"file not found: {p}")
    with p.open(newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh)]
    if not rows:
        raise DataError(f"{p}: empty file")
    return rows


def _parse_month_cell(raw: str, path: Path | str, row_no: int) -> str:
    try:
        month_index(raw)
    except ValueError as exc:
        raise DataError(f"{path}: row {row_no}: {exc}") from None
    return raw


def load_returns_csv(path: str | Path) -> ReturnsPanel:
    """Parse a returns CSV; empty cells become missing (NaN), never zero."""
    rows = _read_rows(path)
    header = rows[0]
    if len(header) < 2 or header[0] != "date":
        raise DataError(f"{path}: malformed header, expected date,<asset>,...")
    assets = tuple(header[1:])
    if len(set(assets)) != len(assets):
        raise DataError(f"{path}: duplicate asset id in header")
    dates: list[str] = []
    values = np.full((len(rows) - 1, len(assets)), np.nan)
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(f"{path}: row {r}: expected {len(header)} fields, got {len(row)}")
        label = _parse_month_cell(row[0], path, r)
        if dates and month_index(label) <= month_index(dates[-1]):
            raise DataError(f"{path}: row {r}: duplicate or out-of-order date {label}")
        dates.append(label)
        for c, cell in enumerate(row[1:]):
            if cell == "":
                continue
            try:
                v = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {r} ({label}), column {assets[c]}: unparseable cell {cell!r}"
                ) from None
            if v <= -1.0:
                raise DataError(
                    f"{path}: row {r} ({label}), column {assets[c]}: return {v} is <= -100%"
                )
            values[r - 2, c] = v
    return ReturnsPanel(dates=tuple(dates), assets=assets, values=values)


def write_returns_csv(panel: ReturnsPanel, path: str | Path) -> None:
    """Inverse of :func:`load_returns_csv`; round-trips cell-for-cell."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *panel.assets])
        for i, label in enumerate(panel.dates):
            cells = ["" if np.isnan(v) else repr(float(v)) for v in panel.values[i]]
            writer.writerow([label, *cells])


def load_riskfree_csv(path: str | Path) -> RiskFreeSeries:
    rows = _read_rows(path)
    if rows[0] != ["date", "rf"]:
        raise DataError(f"{path}: malformed header, expected date,rf")
    dates: list[str] = []
    rf: list[float] = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise DataError(f"{path}: row {r}: expected 2 fields")
        label = _parse_month_cell(row[0], path, r)
        if row[1] == "":
            raise DataError(f"{path}: row {r} ({label}): missing rf value")
        try:
            rf.append(float(row[1]))
        except ValueError:
            raise DataError(f"{path}: row {r} ({label}): unparseable rf {row[1]!r}") from None
        dates.append(label)
    try:
        return RiskFreeSeries(dates=tuple(dates), rf=np.array(rf))
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def load_factors_csv(path: str | Path) -> FactorSeries:
    rows = _read_rows(path)
    header = rows[0]
    if not header or header[0] != "date":
        raise DataError(f"{path}: malformed header, expected date,mkt_rf[,smb,hml,rmw,cma,mom]")
    file_cols = header[1:]
    unknown = [c for c in file_cols if c not in FACTOR_COLUMNS]
    if unknown:
        raise DataError(f"{path}: unknown factor columns {unknown}")
    if "mkt_rf" not in file_cols:
        raise DataError(f"{path}: missing mandatory column mkt_rf")
    if len(set(file_cols)) != len(file_cols):
        raise DataError(f"{path}: duplicate factor column")
    # store in canonical order regardless of file order
    columns = tuple(c for c in FACTOR_COLUMNS if c in file_cols)
    dates: list[str] = []
    values = np.full((len(rows) - 1, len(columns)), np.nan)
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(f"{path}: row {r}: expected {len(header)} fields, got {len(row)}")
        label = _parse_month_cell(row[0], path, r)
        dates.append(label)
        for c, cell in enumerate(row[1:]):
            name = file_cols[c]
            if cell == "":
                if name == "mkt_rf":
                    raise DataError(f"{path}: row {r} ({label}): missing mkt_rf value")
                continue
            try:
                values[r - 2, columns.index(name)] = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {r} ({label}), column {name}: unparseable cell {cell!r}"
                ) from None
    try:
        return FactorSeries(dates=tuple(dates), columns=columns, values=values)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_riskfree_csv(series: RiskFreeSeries, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "rf"])
        for label, v in zip(series.dates, series.rf):
            writer.writerow([label, repr(float(v))])


def write_factors_csv(series: FactorSeries, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *series.columns])
        for i, label in enumerate(series.dates):
            cells = ["" if np.isnan(v) else repr(float(v)) for v in series.values[i]]
            writer.writerow([label, *cells])


# ---------------------------------------------------------------------------
# Transformations
# ---------------------------------------------------------------------------


def excess_returns(panel: ReturnsPanel, rf: RiskFreeSeries) -> ReturnsPanel:
    """Subtract the month's risk-free rate from every present cell."""
    rf_values = np.array([rf.at(d) for d in panel.dates])
    return ReturnsPanel(
        dates=panel.dates,
        assets=panel.assets,
        values=panel.values - rf_values[:, None],
    )


def _slice_rows(panel: ReturnsPanel, labels: list[str], what: str) -> np.ndarray:
    positions = []
    for label in labels:
        try:
            positions.append(panel.dates.index(label))
        except ValueError:
            raise DataError(
                f"{what} window out of range: panel does not contain month {label}"
            ) from None
    return panel.values[positions]


def _complete_case(assets: tuple[str, ...], *blocks: np.ndarray) -> list[int]:
    keep = [
        j for j in range(len(assets))
        if not any(np.isnan(block[:, j]).any() for block in blocks)
    ]
    if len(keep) < 2:
        raise DataError("fewer than 2 assets with complete data in the window")
    return keep


def window(panel: ReturnsPanel, spec: WindowSpec) -> tuple[ReturnsPanel, ReturnsPanel]:
    """Slice the look-back and holding windows around ``spec.as_of``.

    Assets with any missing cell in either window are dropped from both,
    so the two panels always share one universe (in panel column order).
    """
    as_of = month_index(spec.as_of)
    lb_labels = [month_label(as_of - spec.lookback_months + i) for i in range(spec.lookback_months)]
    hold_labels = [month_label(as_of + i) for i in range(spec.hold_months)]
    lb_values = _slice_rows(panel, lb_labels, "look-back")
    hold_values = _slice_rows(panel, hold_labels, "holding")
    keep = _complete_case(panel.assets, lb_values, hold_values)
    assets = tuple(panel.assets[j] for j in keep)
    return (
        ReturnsPanel(dates=tuple(lb_labels), assets=assets, values=lb_values[:, keep]),
        ReturnsPanel(dates=tuple(hold_labels), assets=assets, values=hold_values[:, keep]),
    )


def lookback_panel(panel: ReturnsPanel, as_of: str, lookback_months: int) -> ReturnsPanel:
    """Look-back slice only (single-date allocation needs no holding data)."""
    if lookback_months < 1:
        raise ValueError("lookback_months must be positive")
    base = month_index(as_of)
    labels = [month_label(base - lookback_months + i) for i in range(lookback_months)]
    values = _slice_rows(panel, labels, "look-back")
    keep = _complete_case(panel.assets, values)
    assets = tuple(panel.assets[j] for j in keep)
    return ReturnsPanel(dates=tuple(labels), assets=assets, values=values[:, keep])


# ---------------------------------------------------------------------------
# Synthetic generation
# ---------------------------------------------------------------------------


def asset_names(n: int) -> tuple[str, ...]:
    return tuple(f"A{i:03d}" for i in range(n))


def generate_synthetic(spec: SyntheticSpec) -> tuple[ReturnsPanel, RiskFreeSeries, FactorSeries]:
    """Generate a seeded factor-model panel plus matching rf and factor series.

    Model: asset ``i`` belongs to sector ``i % n_sectors``; its monthly excess
    return is ``beta_i * market_t + loading_i * sector_{t, s(i)} + idio_{t, i}``
    and the reported return adds the constant risk-free rate.

    Draw order (fixed so equal seeds give identical panels everywhere):
    market betas for assets 0..N-1, then sector loadings for assets 0..N-1,
    then month-major factor draws — for each month the market shock, the
    ``n_sectors`` sector shocks, and the ``n_assets`` idiosyncratic shocks.
    """
    rng = SplitMix64(spec.seed)
    n, s, t = spec.n_assets, spec.n_sectors, spec.n_months
    betas = np.array([rng.uniform(*spec.market_beta_range) for _ in range(n)])
    loadings = np.array([rng.uniform(*spec.sector_loading_range) for _ in range(n)])
    sectors = np.array([spec.sector_of(i) for i in range(n)])

    market = np.empty(t)
    excess = np.empty((t, n))
    for m in range(t):
        market[m] = rng.normal(0.0, spec.market_vol)
        sector_shocks = np.array([rng.normal(0.0, spec.sector_vol) for _ in range(s)])
        idio = np.array([rng.normal(0.0, spec.idio_vol) for _ in range(n)])
        excess[m] = betas * market[m] + loadings * sector_shocks[sectors] + idio

    dates = tuple(month_range(spec.start_month, t))
    panel = ReturnsPanel(dates=dates, assets=asset_names(n), values=excess + spec.rf_const)
    rf = RiskFreeSeries(dates=dates, rf=np.full(t, spec.rf_const))
    factors = FactorSeries(dates=dates, columns=("mkt_rf",), values=market[:, None])
    return panel, rf, factors
