"""Sample covariance, shrinkage, correlation and the correlation distance.

The pairwise distance between assets i and j is

    d_ij = sqrt(0.5 * (1 - rho_ij))

which maps perfectly correlated pairs to 0 and perfectly anti-correlated
pairs to 1.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, NumericalError
from .market_data import ReturnsPanel

_SYM_TOL = 1e-12


def _frozen(matrix: np.ndarray) -> np.ndarray:
    out = np.array(matrix, dtype=float)
    out.flags.writeable = False
    return out


def _check_square(assets: tuple[str, ...], matrix: np.ndarray, what: str) -> None:
    n = len(assets)
    if matrix.shape != (n, n):
        raise ValueError(f"{what}: matrix shape {matrix.shape} does not match {n} assets")
    if not np.isfinite(matrix).all():
        raise ValueError(f"{what}: non-finite entries")
    if np.abs(matrix - matrix.T).max() > _SYM_TOL:
        raise ValueError(f"{what}: matrix is not symmetric within {_SYM_TOL}")


@dataclass(frozen=True)
class CovarianceEstimate:
    assets: tuple[str, ...]
    matrix: np.ndarray
    lookback_months: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "assets", tuple(self.assets))
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        if len(self.assets) < 2:
            raise ValueError("covariance: at least 2 assets required")
        _check_square(self.assets, self.matrix, "covariance")
        if np.diag(self.matrix).min() <= 0:
            raise ValueError("covariance: diagonal must be strictly positive")


@dataclass(frozen=True)
class CorrelationMatrix:
    assets: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "assets", tuple(self.assets))
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        _check_square(self.assets, self.matrix, "correlation")
        if np.abs(np.diag(self.matrix) - 1.0).max() > _SYM_TOL:
            raise ValueError("correlation: diagonal must be 1")
        if self.matrix.min() < -1.0 or self.matrix.max() > 1.0:
            raise ValueError("correlation: entries must lie in [-1, 1]")


@dataclass(frozen=True)
class DistanceMatrix:
    assets: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "assets", tuple(self.assets))
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        _check_square(self.assets, self.matrix, "distance")
        if np.abs(np.diag(self.matrix)).max() != 0.0:
            raise ValueError("distance: diagonal must be exactly 0")
        if self.matrix.min() < 0.0 or self.matrix.max() > 1.0:
            raise ValueError("distance: entries must lie in [0, 1]")


def sample_covariance(panel: ReturnsPanel) -> CovarianceEstimate:
    """Unbiased (T-1 divisor) sample covariance of a complete look-back panel."""
    values = panel.values
    if np.isnan(values).any():
        raise ValueError("sample_covariance: panel has missing cells")
    t = values.shape[0]
    if t < 2:
        raise ValueError("sample_covariance: at least 2 months required")
    centered = values - values.mean(axis=0)
    matrix = centered.T @ centered / (t - 1)
    variances = np.diag(matrix)
    if variances.min() <= 0:
        dead = panel.assets[int(np.argmin(variances))]
        raise NumericalError(f"zero-variance column: {dead}")
    matrix = (matrix + matrix.T) / 2.0  # kill rounding asymmetry
    return CovarianceEstimate(assets=panel.assets, matrix=matrix, lookback_months=t)


def correlation(cov: CovarianceEstimate) -> CorrelationMatrix:
    """rho_ij = cov_ij / sqrt(cov_ii * cov_jj), clamped to [-1, 1]."""
    d = np.sqrt(np.diag(cov.matrix))
    rho = cov.matrix / np.outer(d, d)
    rho = np.clip(rho, -1.0, 1.0)
    np.fill_diagonal(rho, 1.0)
    return CorrelationMatrix(assets=cov.assets, matrix=rho)


def shrink(cov: CovarianceEstimate, delta: float) -> CovarianceEstimate:
    """Convex blend toward the scaled identity: (1-d)*S + d*(tr(S)/N)*I.

    Preserves the trace for every delta and guarantees invertibility for
    delta > 0; delta = 0 returns the input unchanged.
    """
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"shrinkage delta must be in [0, 1], got {delta}")
    n = len(cov.assets)
    target = (np.trace(cov.matrix) / n) * np.eye(n)
    matrix = (1.0 - delta) * cov.matrix + delta * target
    return CovarianceEstimate(assets=cov.assets, matrix=matrix, lookback_months=cov.lookback_months)


def distance_matrix(corr: CorrelationMatrix) -> DistanceMatrix:
    """d_ij = sqrt(0.5 * (1 - rho_ij)); diagonal forced to exactly 0."""
    radicand = np.clip(0.5 * (1.0 - corr.matrix), 0.0, 1.0)
    d = np.sqrt(radicand)
    d = (d + d.T) / 2.0
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(assets=corr.assets, matrix=d)


# ---------------------------------------------------------------------------
# Matrix CSV export (consumed by the heatmap command)
# ---------------------------------------------------------------------------


def matrix_to_csv(m: CovarianceEstimate | CorrelationMatrix | DistanceMatrix) -> str:
    """Matrix as CSV with a header row and leading column of asset ids."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["", *m.assets])
    for i, asset in enumerate(m.assets):
        writer.writerow([asset, *[repr(float(v)) for v in m.matrix[i]]])
    return buf.getvalue()


def matrix_from_csv(path: str | Path) -> CovarianceEstimate | CorrelationMatrix:
    """Load an exported matrix; classified by its diagonal (unit -> correlation)."""
    p = Path(path)
    if not p.exists():
        raise DataError(f"file not found: {p}")
    with p.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or len(rows[0]) < 3:
        raise DataError(f"{p}: malformed matrix CSV")
    assets = tuple(rows[0][1:])
    if len(rows) - 1 != len(assets):
        raise DataError(f"{p}: expected {len(assets)} matrix rows, got {len(rows) - 1}")
    matrix = np.empty((len(assets), len(assets)))
    for i, row in enumerate(rows[1:]):
        if len(row) != len(assets) + 1 or row[0] != assets[i]:
            raise DataError(f"{p}: row {i + 2}: row label does not match header order")
        try:
            matrix[i] = [float(c) for c in row[1:]]
        except ValueError as exc:
            raise DataError(f"{p}: row {i + 2}: {exc}") from None
    try:
        if np.abs(np.diag(matrix) - 1.0).max() <= 1e-9:
            return CorrelationMatrix(assets=assets, matrix=matrix)
        return CovarianceEstimate(assets=assets, matrix=matrix, lookback_months=0)
    except ValueError as exc:
        raise DataError(f"{p}: {exc}") from None
