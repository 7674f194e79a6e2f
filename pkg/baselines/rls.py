"""Exponentially weighted RLS."""

from typing import Dict, Optional, Tuple

import numpy as np

from baselines.base import Algorithm, BaseAdaptiveFilter
from utils.errors import ValidationError

# per-step count 3N^2 + 4N + 1 never exceeds RLS_MULT_CONSTANT * N^2
RLS_MULT_CONSTANT = 8


class RLSFilter(BaseAdaptiveFilter):
    """P starts at delta^{-1} I; `delta` is the regularization, not the P scale."""

    algorithm = Algorithm.RLS
    defaults = {"lambda": 1.0, "delta": 1e-2}

    def check_ranges(self, params: Dict[str, float]) -> None:
        if not 0.0 < params["lambda"] <= 1.0:
            raise ValidationError(f"rls: lambda must be in (0, 1], got {params['lambda']}")
        if params["delta"] <= 0:
            raise ValidationError(f"rls: delta must be positive, got {params['delta']}")

    def initial_aux(self, n: int, params: Dict[str, float]) -> np.ndarray:
        return np.eye(n) / params["delta"]

    def update(self, w: np.ndarray, aux: Optional[np.ndarray], x: np.ndarray, d: float,
               params: Dict[str, float]) -> Tuple[np.ndarray, Optional[np.ndarray], int]:
        n = w.size
        P = aux
        mults = 0

        Px = P @ x
        mults += n * n
        denom = params["lambda"] + float(x @ Px)
        mults += n
        k = Px / denom
        mults += n
        e = d - float(w @ x)
        mults += n
        w = w + k * e
        mults += n
        # P symmetric, so x'P == (Px)'
        inv_lam = 1.0 / params["lambda"]
        mults += 1
        P = (P - np.outer(k, Px)) * inv_lam
        mults += 2 * n * n
        return w, P, mults

    def mults_per_step(self, n: int) -> int:
        return 3 * n * n + 4 * n + 1
