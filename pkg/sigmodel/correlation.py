"""Exact and empirical Wiener-Hopf quantities R and b, plus the MSE surface."""

from typing import Sequence, Tuple

import numpy as np

from corrmath.matrices import CorrelationMatrix, as_vector, toeplitz_from_autocorr
from sigmodel.models import InputKind, InputModel, Plant, SampleSet
from utils.errors import ValidationError


def estimate_autocorr(x: Sequence[float], maxlag: int) -> np.ndarray:
    """Biased estimate r_k = (1/n) sum_{t=0}^{n-1-k} x_t x_{t+k}, k = 0..maxlag."""
    xs = np.asarray(x, dtype=np.float64)
    n = xs.size
    if maxlag < 0 or maxlag >= n:
        raise ValidationError(f"maxlag must be in [0, {n - 1}], got {maxlag}")
    return np.array([np.dot(xs[: n - k], xs[k:]) for k in range(maxlag + 1)]) / n


def estimate_crosscorr(x: Sequence[float], d: Sequence[float], N: int) -> np.ndarray:
    """Biased estimate b_k = (1/n) sum_t x_{t-k} d_t with zero prehistory, k = 0..N-1."""
    xs = np.asarray(x, dtype=np.float64)
    ds = np.asarray(d, dtype=np.float64)
    if xs.shape != ds.shape:
        raise ValidationError(f"x and d lengths differ: {xs.size} vs {ds.size}")
    n = xs.size
    if not 1 <= N <= n:
        raise ValidationError(f"N must be in [1, {n}], got {N}")
    return np.array([np.dot(xs[: n - k], ds[k:]) for k in range(N)]) / n


def exact_correlations(plant: Plant, model: InputModel) -> Tuple[CorrelationMatrix, np.ndarray]:
    """Closed-form R and b = R h for the configured input process."""
    N = plant.n
    if model.kind is InputKind.IID:
        r = np.zeros(N)
        r[0] = model.variance
    else:
        r = model.variance * model.ar_coefficient ** np.arange(N)
    R = toeplitz_from_autocorr(r)
    if model.kind is InputKind.IID:
        b = model.variance * plant.taps
    else:
        b = R.dense @ plant.taps
    return R, as_vector(b, "b")


def empirical_correlations(samples: SampleSet, N: int) -> Tuple[CorrelationMatrix, np.ndarray]:
    """R and b estimated from a sample record."""
    r = estimate_autocorr(samples.x, N - 1)
    if r[0] <= 0:
        raise ValidationError("input record has zero power; cannot form R")
    return toeplitz_from_autocorr(r), as_vector(estimate_crosscorr(samples.x, samples.d, N), "b")


def output_power(plant: Plant, model: InputModel) -> float:
    """E{d^2} = h' R h for the noiseless plant."""
    R, _ = exact_correlations(plant, model)
    h = plant.taps
    return float(h @ R.dense @ h)


def mse_surface(R: CorrelationMatrix, b: Sequence[float], d_power: float, w: Sequence[float]) -> float:
    """E{e^2} = E{d^2} - 2 b'w + w'R w."""
    bv = np.asarray(b, dtype=np.float64)
    wv = np.asarray(w, dtype=np.float64)
    if bv.size != R.n or wv.size != R.n:
        raise ValidationError("b and w must match the order of R")
    return float(d_power - 2.0 * bv @ wv + wv @ R.dense @ wv)
