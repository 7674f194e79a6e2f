"""Toeplitz correlation matrices, validated vectors and the two norms used by reports."""

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple

import numpy as np
from scipy.linalg import toeplitz

from utils.errors import ValidationError


def as_vector(values: Sequence[float], name: str = "vector") -> np.ndarray:
    """Return a read-only float64 copy of `values`, rejecting NaN/inf and non-1-D input."""
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    arr.flags.writeable = False
    return arr


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Read-only float64 2-D copy with finite entries."""
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric Toeplitz R built from the autocorrelation sequence r_0..r_{N-1}."""

    autocorr: Tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.autocorr)

    @property
    def r0(self) -> float:
        return self.autocorr[0]

    @cached_property
    def dense(self) -> np.ndarray:
        m = toeplitz(np.asarray(self.autocorr, dtype=np.float64))
        m.flags.writeable = False
        return m

    def entry(self, i: int, j: int) -> float:
        return self.autocorr[abs(i - j)]

    def __len__(self) -> int:
        return self.n


def toeplitz_from_autocorr(r: Sequence[float]) -> CorrelationMatrix:
    """Build R with entry (i, j) = r[|i - j|]."""
    arr = np.asarray(list(r), dtype=np.float64)
    if arr.size == 0:
        raise ValidationError("autocorrelation sequence is empty")
    if arr.ndim != 1:
        raise ValidationError("autocorrelation sequence must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("autocorrelation sequence has non-finite entries")
    if arr[0] <= 0:
        raise ValidationError(f"r[0] must be positive (signal power), got {arr[0]}")
    return CorrelationMatrix(autocorr=tuple(float(v) for v in arr))


def norm2(v: Sequence[float]) -> float:
    """Euclidean norm."""
    return float(np.linalg.norm(np.asarray(v, dtype=np.float64), 2))


def norm_inf(m) -> float:
    """Maximum absolute row sum."""
    arr = np.atleast_2d(np.asarray(m, dtype=np.float64))
    if arr.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(arr), axis=1)))
