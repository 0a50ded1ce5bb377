"""Data ingestion: prices -> log returns -> period covariance matrices.

File formats
------------
prices.csv: header ``date,SYM1,...,SYMk``; ISO-8601 dates; strictly positive
decimal prices.  An optional calendar file (one ISO date per line) declares
the full set of observation dates; dates missing from the prices are
forward-filled with the previous observation (a forward-fill on the first
calendar date is impossible and raises).

matrices.csv: header ``m=<dim>``, then one row per matrix:
``id,a11,a12,...,a1m,a22,...,amm`` — the upper triangle in row-major order,
written with repr-exact precision so a round trip is lossless.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import (
    DataFormatError,
    DataQualityWarning,
    DegenerateSampleError,
    NotPositiveDefiniteError,
)
from .linalg import SPD_TOL

__all__ = [
    "PriceTable",
    "MatrixSample",
    "load_prices",
    "load_calendar",
    "log_returns",
    "period_covariances",
    "save_matrices",
    "load_matrices",
]


@dataclass(frozen=True)
class PriceTable:
    """Strictly positive price observations on strictly increasing dates."""

    dates: tuple  # of datetime.date
    symbols: tuple  # of str
    prices: np.ndarray  # (len(dates), len(symbols)), > 0

    def __post_init__(self):
        if self.prices.shape != (len(self.dates), len(self.symbols)):
            raise DataFormatError(
                f"price array shape {self.prices.shape} does not match "
                f"{len(self.dates)} dates x {len(self.symbols)} symbols"
            )
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise DataFormatError("dates must be strictly increasing")
        if not np.all(self.prices > 0):
            raise DataFormatError("prices must be strictly positive")


@dataclass(frozen=True)
class MatrixSample:
    """An ordered, identified sample of SPD matrices of common dimension."""

    m: int
    ids: tuple  # of str
    matrices: np.ndarray  # (n, m, m)

    @property
    def n(self) -> int:
        return len(self.ids)


def _parse_iso_date(text: str, where: str) -> date:
    try:
        return date.fromisoformat(text.strip())
    except ValueError as exc:
        raise DataFormatError(f"{where}: bad ISO date {text!r}") from exc


def load_calendar(path) -> tuple:
    """Calendar file: one ISO-8601 date per line (blank lines ignored)."""
    days = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            days.append(_parse_iso_date(text, f"{path}:{lineno}"))
    if any(b <= a for a, b in zip(days, days[1:])):
        raise DataFormatError(f"{path}: calendar dates must be increasing")
    if not days:
        raise DataFormatError(f"{path}: empty calendar")
    return tuple(days)


def load_prices(path, calendar=None) -> PriceTable:
    """Read a prices CSV; optionally expand onto a full calendar.

    With a calendar, every calendar date missing from the file is
    forward-filled with the most recent prior observation; file dates not in
    the calendar are rejected.  Errors: non-positive price, unparseable row,
    duplicate date, forward-fill before the first observation.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        if len(header) < 2 or header[0].strip().lower() != "date":
            raise DataFormatError(
                f"{path}: header must be 'date,SYM1,...', got {header!r}"
            )
        symbols = tuple(s.strip() for s in header[1:])
        if any(not s for s in symbols):
            raise DataFormatError(f"{path}: blank symbol name in header")

        seen: dict[date, int] = {}
        dates: list[date] = []
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(symbols) + 1:
                raise DataFormatError(
                    f"{path}:{lineno}: expected {len(symbols) + 1} fields, "
                    f"got {len(row)}"
                )
            day = _parse_iso_date(row[0], f"{path}:{lineno}")
            if day in seen:
                raise DataFormatError(
                    f"{path}:{lineno}: duplicate date {day.isoformat()}"
                )
            seen[day] = lineno
            try:
                vals = [float(v) for v in row[1:]]
            except ValueError as exc:
                raise DataFormatError(
                    f"{path}:{lineno}: unparseable price in {row[1:]!r}"
                ) from exc
            if any(not np.isfinite(v) or v <= 0 for v in vals):
                raise DataFormatError(
                    f"{path}:{lineno}: prices must be finite and positive, "
                    f"got {row[1:]!r}"
                )
            dates.append(day)
            rows.append(vals)

    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    order = np.argsort(np.array([d.toordinal() for d in dates]))
    dates = [dates[i] for i in order]
    prices = np.array([rows[i] for i in order], dtype=float)

    if calendar is None:
        return PriceTable(tuple(dates), symbols, prices)

    cal = tuple(calendar)
    by_date = {d: i for i, d in enumerate(dates)}
    unknown = sorted(set(dates) - set(cal))
    if unknown:
        raise DataFormatError(
            f"{path}: dates not in the supplied calendar: "
            f"{', '.join(d.isoformat() for d in unknown[:5])}"
        )
    filled = np.empty((len(cal), len(symbols)))
    last = None
    n_filled = 0
    for i, day in enumerate(cal):
        j = by_date.get(day)
        if j is not None:
            last = prices[j]
        elif last is None:
            raise DataFormatError(
                f"{path}: calendar starts at {day.isoformat()} before the "
                f"first observation; cannot forward-fill"
            )
        else:
            n_filled += 1
        filled[i] = last
    if n_filled:
        warnings.warn(
            f"forward-filled {n_filled} calendar date(s) with the previous "
            f"observation",
            DataQualityWarning,
            stacklevel=2,
        )
    return PriceTable(cal, symbols, filled)


def log_returns(table: PriceTable) -> np.ndarray:
    """Daily logarithmic returns: r[j] = log(prices[j+1] / prices[j])."""
    if len(table.dates) < 2:
        raise DataFormatError("need at least two dates for returns")
    return np.diff(np.log(table.prices), axis=0)


def period_covariances(returns, period_length: int) -> MatrixSample:
    """Per-period sample covariance matrices of consecutive return blocks.

    Returns are mean-centered within each period and the unbiased
    denominator (period_length - 1) is used; this convention is surfaced as
    a DataQualityWarning so reports can carry it.  Requires period_length >=
    m + 1 (otherwise the covariance is singular with probability one); a
    trailing remainder shorter than one period is dropped with a warning.
    """
    arr = np.asarray(returns, dtype=float)
    if arr.ndim != 2:
        raise DataFormatError("returns must be a 2-D (days x assets) array")
    rows, m = arr.shape
    if period_length < m + 1:
        raise DegenerateSampleError(
            f"period_length={period_length} must be at least m+1={m + 1}; "
            f"shorter periods give singular covariances"
        )
    n = rows // period_length
    if n == 0:
        raise DegenerateSampleError(
            f"only {rows} return rows; need at least one full period of "
            f"{period_length}"
        )
    dropped = rows - n * period_length
    if dropped:
        warnings.warn(
            f"dropped {dropped} trailing return row(s) not filling a period",
            DataQualityWarning,
            stacklevel=2,
        )
    blocks = arr[: n * period_length].reshape(n, period_length, m)
    centered = blocks - blocks.mean(axis=1, keepdims=True)
    covs = np.einsum("npi,npj->nij", centered, centered) / (period_length - 1)
    covs = 0.5 * (covs + covs.transpose(0, 2, 1))

    eig = np.linalg.eigvalsh(covs)
    bad = eig[:, 0] <= SPD_TOL * np.maximum(eig[:, -1], 0.0)
    if np.any(bad):
        j = int(np.argmax(bad))
        raise DegenerateSampleError(
            f"period {j + 1} covariance is singular (smallest eigenvalue "
            f"{eig[j, 0]:.3e}); returns within the period are linearly "
            f"dependent"
        )
    warnings.warn(
        "covariance=centered,ddof=1 (per-period mean-centered, unbiased "
        "denominator)",
        DataQualityWarning,
        stacklevel=2,
    )
    ids = tuple(f"period{j + 1}" for j in range(n))
    return MatrixSample(m=m, ids=ids, matrices=covs)


def _upper_triangle(mat: np.ndarray) -> list[float]:
    m = mat.shape[0]
    return [float(mat[i, j]) for i in range(m) for j in range(i, m)]


def save_matrices(sample: MatrixSample, path_or_file) -> None:
    """Write a MatrixSample in the matrices.csv format (lossless)."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", encoding="utf-8", newline="") if own \
        else path_or_file
    try:
        fh.write(f"m={sample.m}\n")
        for ident, mat in zip(sample.ids, sample.matrices):
            cells = ",".join(f"{v!r}" for v in _upper_triangle(mat))
            fh.write(f"{ident},{cells}\n")
    finally:
        if own:
            fh.close()


def _matrix_from_upper(values: list[float], m: int) -> np.ndarray:
    mat = np.empty((m, m))
    it = iter(values)
    for i in range(m):
        for j in range(i, m):
            v = next(it)
            mat[i, j] = v
            mat[j, i] = v
    return mat


def load_matrices(path_or_file) -> MatrixSample:
    """Read a matrices.csv file; checks dimension, symmetry by construction,
    and positive definiteness of every matrix."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "r", encoding="utf-8", newline="") if own \
        else path_or_file
    name = path_or_file if own else getattr(fh, "name", "<matrices>")
    try:
        header = fh.readline().strip()
        if not header.startswith("m=") or not header[2:].isdigit():
            raise DataFormatError(
                f"{name}: first line must be 'm=<dim>', got {header!r}"
            )
        m = int(header[2:])
        if m < 1:
            raise DataFormatError(f"{name}: dimension must be positive")
        want = m * (m + 1) // 2
        ids: list[str] = []
        mats: list[np.ndarray] = []
        for lineno, line in enumerate(fh, start=2):
            text = line.strip()
            if not text:
                continue
            parts = text.split(",")
            if len(parts) != want + 1:
                raise DataFormatError(
                    f"{name}:{lineno}: expected id plus {want} entries, got "
                    f"{len(parts) - 1}"
                )
            try:
                values = [float(v) for v in parts[1:]]
            except ValueError as exc:
                raise DataFormatError(
                    f"{name}:{lineno}: unparseable matrix entry"
                ) from exc
            ids.append(parts[0])
            mats.append(_matrix_from_upper(values, m))
    finally:
        if own:
            fh.close()
    if not mats:
        raise DataFormatError(f"{name}: no matrices")
    arr = np.array(mats)
    eig = np.linalg.eigvalsh(arr)
    bad = eig[:, 0] <= SPD_TOL * np.maximum(eig[:, -1], 0.0)
    if np.any(bad):
        j = int(np.argmax(bad))
        raise NotPositiveDefiniteError(
            f"{name}: matrix {ids[j]!r} is not positive definite"
        )
    return MatrixSample(m=m, ids=tuple(ids), matrices=arr)


def sample_to_csv_text(sample: MatrixSample) -> str:
    """The matrices.csv serialization as a string (convenience for tests)."""
    buf = io.StringIO()
    save_matrices(sample, buf)
    return buf.getvalue()
