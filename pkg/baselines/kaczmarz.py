"""Relaxed Kaczmarz row projection on the streaming equations x' w = d."""

from typing import Dict, Optional, Tuple

import numpy as np

from baselines.base import Algorithm, BaseAdaptiveFilter
from utils.errors import ValidationError, ZeroRegressorError


class KaczmarzFilter(BaseAdaptiveFilter):
    algorithm = Algorithm.KACZMARZ
    defaults = {"mu": 1.0}

    def check_ranges(self, params: Dict[str, float]) -> None:
        if not 0.0 < params["mu"] < 2.0:
            raise ValidationError(f"kaczmarz: relaxation mu must be in (0, 2), got {params['mu']}")

    def update(self, w: np.ndarray, aux: Optional[np.ndarray], x: np.ndarray, d: float,
               params: Dict[str, float]) -> Tuple[np.ndarray, Optional[np.ndarray], int]:
        n = w.size
        mults = 0
        e = d - float(w @ x)
        mults += n
        energy = float(x @ x)
        mults += n
        if energy == 0.0:
            raise ZeroRegressorError("kaczmarz: cannot project onto a zero-norm regressor")
        g = params["mu"] * e / energy
        mults += 2
        w = w + g * x
        mults += n
        return w, aux, mults

    def mults_per_step(self, n: int) -> int:
        return 3 * n + 2
