"""Input generation and FIR plant simulation."""

import logging
from typing import Sequence

import numpy as np
from scipy.signal import lfilter

from sigmodel.models import InputKind, InputModel, Plant, SampleSet
from utils.errors import ValidationError

logger = logging.getLogger(__name__)


def generate_input(model: InputModel, n: int, seed: int) -> np.ndarray:
    """Zero-mean Gaussian input of length n, bit-identical for identical (model, n, seed).

    AR1 starts from the stationary distribution, so the whole sequence has
    variance `model.variance`, not just its tail.
    """
    if n < 1:
        raise ValidationError(f"sample count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    e = rng.standard_normal(n)
    sigma = np.sqrt(model.variance)

    if model.kind is InputKind.IID:
        return sigma * e

    a = model.ar_coefficient
    x = np.empty(n)
    x[0] = sigma * e[0]
    if n > 1:
        gain = sigma * np.sqrt(1.0 - a * a)
        x[1:], _ = lfilter([gain], [1.0, -a], e[1:], zi=[a * x[0]])
    return x


def fir_output(h: Sequence[float], x: Sequence[float]) -> np.ndarray:
    """d_n = sum_k h_k x_{n-k}, with x_m = 0 for m < 0."""
    taps = np.asarray(h, dtype=np.float64)
    if taps.size == 0:
        raise ValidationError("FIR taps are empty")
    xs = np.asarray(x, dtype=np.float64)
    if xs.size == 0:
        raise ValidationError("input sequence is empty")
    return lfilter(taps, [1.0], xs)


def simulate(plant: Plant, model: InputModel, n: int, seed: int) -> SampleSet:
    """Noiseless system-identification samples."""
    x = generate_input(model, n, seed)
    d = fir_output(plant.taps, x)
    logger.debug("simulated %d samples (kind=%s, seed=%d)", n, model.kind.value, seed)
    return SampleSet(x=x, d=d, seed=seed)
