"""LMS and NLMS.

LMS uses w + mu e x (no factor 2; fold it into mu if you want the other
convention).
"""

from typing import Dict, Optional, Tuple

import numpy as np

from baselines.base import Algorithm, BaseAdaptiveFilter
from utils.errors import ValidationError, ZeroRegressorError


class LMSFilter(BaseAdaptiveFilter):
    algorithm = Algorithm.LMS
    required = ("mu",)

    def check_ranges(self, params: Dict[str, float]) -> None:
        if params["mu"] <= 0:
            raise ValidationError(f"lms: mu must be positive, got {params['mu']}")

    def update(self, w: np.ndarray, aux: Optional[np.ndarray], x: np.ndarray, d: float,
               params: Dict[str, float]) -> Tuple[np.ndarray, Optional[np.ndarray], int]:
        n = w.size
        mults = 0
        e = d - float(w @ x)
        mults += n
        g = params["mu"] * e
        mults += 1
        w = w + g * x
        mults += n
        return w, aux, mults

    def mults_per_step(self, n: int) -> int:
        return 2 * n + 1


class NLMSFilter(BaseAdaptiveFilter):
    algorithm = Algorithm.NLMS
    required = ("mu",)
    defaults = {"epsilon": 0.0}

    def check_ranges(self, params: Dict[str, float]) -> None:
        if params["mu"] <= 0:
            raise ValidationError(f"nlms: mu must be positive, got {params['mu']}")
        if params["epsilon"] < 0:
            raise ValidationError(f"nlms: epsilon must be >= 0, got {params['epsilon']}")

    def update(self, w: np.ndarray, aux: Optional[np.ndarray], x: np.ndarray, d: float,
               params: Dict[str, float]) -> Tuple[np.ndarray, Optional[np.ndarray], int]:
        n = w.size
        mults = 0
        e = d - float(w @ x)
        mults += n
        energy = params["epsilon"] + float(x @ x)
        mults += n
        if energy == 0.0:
            raise ZeroRegressorError("nlms: zero-norm regressor with epsilon = 0")
        g = params["mu"] / energy * e
        mults += 2
        w = w + g * x
        mults += n
        return w, aux, mults

    def mults_per_step(self, n: int) -> int:
        return 3 * n + 2
