"""Base class and shared state for adaptive-filter baselines."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from corrmath.matrices import as_vector
from utils.errors import ValidationError


class Algorithm(str, Enum):
    LMS = "lms"
    NLMS = "nlms"
    RLS = "rls"
    KACZMARZ = "kaczmarz"
    MCMC = "mcmc"


@dataclass(eq=False)
class FilterState:
    """Weights plus algorithm memory. Owned by one caller and stepped sequentially."""

    w: np.ndarray
    algorithm: Algorithm
    params: Dict[str, float]
    aux: Optional[np.ndarray] = None
    mult_count: int = 0

    @property
    def n(self) -> int:
        return int(self.w.size)


@dataclass(frozen=True, eq=False)
class RegressorFrame:
    """Most recent N inputs, newest first, and the desired sample."""

    x_vec: np.ndarray
    d: float

    def __post_init__(self):
        object.__setattr__(self, "x_vec", as_vector(self.x_vec, "regressor"))
        if not np.isfinite(self.d):
            raise ValidationError("desired sample is not finite")


class BaseAdaptiveFilter(ABC):
    """One update recursion. Subclasses count every real multiplication they perform."""

    algorithm: Algorithm
    defaults: Dict[str, float] = {}
    required: Tuple[str, ...] = ()

    def validate(self, params: Dict[str, float]) -> Dict[str, float]:
        """Merge defaults and check ranges. Returns the full parameter map."""
        unknown = set(params) - set(self.defaults) - set(self.required)
        if unknown:
            raise ValidationError(f"{self.algorithm.value}: unknown parameters {sorted(unknown)}")
        merged = {**self.defaults, **params}
        missing = [name for name in self.required if name not in merged]
        if missing:
            raise ValidationError(f"{self.algorithm.value}: missing parameters {missing}")
        for name, value in merged.items():
            if not np.isfinite(value):
                raise ValidationError(f"{self.algorithm.value}: {name} is not finite")
        self.check_ranges(merged)
        return merged

    def check_ranges(self, params: Dict[str, float]) -> None:
        pass

    def initial_aux(self, n: int, params: Dict[str, float]) -> Optional[np.ndarray]:
        return None

    @abstractmethod
    def update(self, w: np.ndarray, aux: Optional[np.ndarray], x: np.ndarray, d: float,
               params: Dict[str, float]) -> Tuple[np.ndarray, Optional[np.ndarray], int]:
        """Return (new weights, new aux, multiplications performed)."""

    @abstractmethod
    def mults_per_step(self, n: int) -> int:
        """Documented per-iteration multiplication count."""
