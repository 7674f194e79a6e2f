"""Input process, plant and sample containers."""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from corrmath.matrices import as_vector
from utils.errors import ValidationError

MAX_TAPS = 64


class InputKind(str, Enum):
    IID = "iid"
    AR1 = "ar1"


@dataclass(frozen=True)
class InputModel:
    """Zero-mean Gaussian WSS input; AR1 uses x_t = a x_{t-1} + innovation."""

    kind: InputKind = InputKind.IID
    ar_coefficient: float = 0.0
    variance: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", InputKind(self.kind))
        if not np.isfinite(self.variance) or self.variance <= 0:
            raise ValidationError(f"variance must be positive, got {self.variance}")
        if self.kind is InputKind.AR1 and not -1.0 < self.ar_coefficient < 1.0:
            raise ValidationError(f"AR(1) coefficient must lie in (-1, 1), got {self.ar_coefficient}")


@dataclass(frozen=True)
class Plant:
    """Unknown FIR system h."""

    h: Tuple[float, ...]
    max_taps: int = MAX_TAPS

    def __post_init__(self):
        taps = as_vector(self.h, "plant h")
        if not 1 <= taps.size <= self.max_taps:
            raise ValidationError(f"plant length must be in [1, {self.max_taps}], got {taps.size}")
        object.__setattr__(self, "h", tuple(float(v) for v in taps))

    @property
    def n(self) -> int:
        return len(self.h)

    @property
    def taps(self) -> np.ndarray:
        return np.asarray(self.h, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class SampleSet:
    x: np.ndarray
    d: np.ndarray
    seed: int

    def __post_init__(self):
        x = as_vector(self.x, "x")
        d = as_vector(self.d, "d")
        if x.shape != d.shape:
            raise ValidationError(f"x and d lengths differ: {x.size} vs {d.size}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "d", d)

    def __len__(self) -> int:
        return int(self.x.size)
