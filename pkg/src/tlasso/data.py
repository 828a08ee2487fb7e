"""Numeric containers, standardization, and CSV I/O.

All fitting happens on centered/scaled data: each design column has mean 0 and
sample sd 1 (sd computed with denominator n, so (1/n)||X_j||^2 = 1 after
scaling), and the response has mean 0.  No intercept enters the penalized
problem; ``destandardize`` restores slopes and intercept on the raw scale.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConstantColumnError,
    DimensionMismatchError,
    LengthMismatchError,
    MissingColumnError,
    ParseError,
)


def _as_readonly(a, dtype=np.float64):
    out = np.array(a, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Dataset:
    """An (n x p) design matrix with its length-n response.

    Immutable after construction; safe to share across concurrent fits.
    """

    X: np.ndarray
    y: np.ndarray
    column_names: tuple = None

    def __post_init__(self):
        X = _as_readonly(np.atleast_2d(self.X))
        y = _as_readonly(np.ravel(self.y))
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise DimensionMismatchError(f"X must be a 2-D matrix with n,p >= 1, got shape {X.shape}")
        if X.shape[0] != y.shape[0]:
            raise DimensionMismatchError(f"X has {X.shape[0]} rows but y has {y.shape[0]} entries")
        if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
            raise DimensionMismatchError("X and y must be finite (no NaN/Inf)")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if self.column_names is not None:
            names = tuple(str(c) for c in self.column_names)
            if len(names) != X.shape[1]:
                raise LengthMismatchError(f"{len(names)} column names for p={X.shape[1]} columns")
            object.__setattr__(self, "column_names", names)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]


@dataclass(frozen=True)
class Standardizer:
    """Per-column affine maps that center/scale a dataset, plus the y mean."""

    x_means: np.ndarray
    x_sds: np.ndarray
    y_mean: float

    def __post_init__(self):
        object.__setattr__(self, "x_means", _as_readonly(np.ravel(self.x_means)))
        object.__setattr__(self, "x_sds", _as_readonly(np.ravel(self.x_sds)))
        object.__setattr__(self, "y_mean", float(self.y_mean))
        if self.x_means.shape != self.x_sds.shape:
            raise LengthMismatchError("x_means and x_sds lengths differ")
        if np.any(self.x_sds <= 0):
            raise ConstantColumnError(int(np.argmax(self.x_sds <= 0)))

    @property
    def p(self):
        return self.x_means.shape[0]

    def apply(self, d: Dataset) -> Dataset:
        """Transform a raw dataset into this standardizer's scale."""
        if d.p != self.p:
            raise DimensionMismatchError(f"dataset has p={d.p}, standardizer has p={self.p}")
        X = (d.X - self.x_means) / self.x_sds
        y = d.y - self.y_mean
        return Dataset(X, y, d.column_names)

    def coefficients_to_standardized(self, c: "Coefficients") -> "Coefficients":
        """Map raw-scale slopes into this scale so both describe one predictor.

        The raw intercept is dropped: standardized fitting is intercept-free.
        """
        if c.p != self.p:
            raise LengthMismatchError(f"coefficients have p={c.p}, standardizer has p={self.p}")
        return Coefficients(c.beta * self.x_sds, 0.0)


@dataclass(frozen=True)
class Coefficients:
    """A slope vector plus intercept (0 whenever fitted on standardized data)."""

    beta: np.ndarray
    intercept: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "beta", _as_readonly(np.ravel(self.beta)))
        object.__setattr__(self, "intercept", float(self.intercept))
        if not np.all(np.isfinite(self.beta)) or not np.isfinite(self.intercept):
            raise DimensionMismatchError("coefficients must be finite")

    @property
    def p(self):
        return self.beta.shape[0]

    def predict(self, X):
        return np.asarray(X) @ self.beta + self.intercept

    @staticmethod
    def zeros(p):
        return Coefficients(np.zeros(p), 0.0)


def standardize(d: Dataset):
    """Center y and center/scale every column of X to mean 0, sd 1 (denominator n).

    Returns the transformed dataset and the Standardizer that produced it.
    Raises ConstantColumnError for any zero-sd column; silently dropping one
    would desynchronize anchor indices downstream, so the caller must decide.
    """
    means = d.X.mean(axis=0)
    sds = d.X.std(axis=0)  # ddof=0: population sd, keeps (1/n)||X_j||^2 = 1
    zero = np.flatnonzero(sds == 0)
    if zero.size:
        j = int(zero[0])
        raise ConstantColumnError(j, d.column_names[j] if d.column_names else None)
    s = Standardizer(means, sds, d.y.mean())
    return s.apply(d), s


def destandardize(c: Coefficients, s: Standardizer) -> Coefficients:
    """Map standardized-scale coefficients back to the raw data scale.

    The returned coefficients predict identically on raw rows:
    raw_x @ beta_raw + intercept == std_x @ beta_std + y_mean.
    """
    if c.p != s.p:
        raise LengthMismatchError(f"coefficients have p={c.p}, standardizer has p={s.p}")
    beta_raw = c.beta / s.x_sds
    intercept = s.y_mean + c.intercept - float(beta_raw @ s.x_means)
    return Coefficients(beta_raw, intercept)


def load_csv(path, response_column) -> Dataset:
    """Load a headered, all-numeric CSV; the named column becomes y, the rest X.

    Column order is preserved.  UTF-8, comma separator, '.' decimal point.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(0, 0, "<empty file>") from None
        header = [h.strip() for h in header]
        if response_column not in header:
            raise MissingColumnError(f"response column {response_column!r} not in header {header}")
        y_idx = header.index(response_column)
        rows = []
        for r, rec in enumerate(reader, start=1):
            vals = []
            for cidx, cell in enumerate(rec):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise ParseError(r, header[cidx] if cidx < len(header) else cidx, cell) from None
            if len(vals) != len(header):
                raise ParseError(r, len(vals), f"expected {len(header)} cells, got {len(vals)}")
            rows.append(vals)
    if not rows:
        raise ParseError(1, 0, "<no data rows>")
    arr = np.asarray(rows, dtype=np.float64)
    y = arr[:, y_idx]
    X = np.delete(arr, y_idx, axis=1)
    names = tuple(h for i, h in enumerate(header) if i != y_idx)
    return Dataset(X, y, names)
