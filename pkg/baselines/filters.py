"""Registry and functional entry points for the adaptive baselines."""

import logging
from dataclasses import replace
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from baselines.base import Algorithm, BaseAdaptiveFilter, FilterState, RegressorFrame
from baselines.kaczmarz import KaczmarzFilter
from baselines.lms import LMSFilter, NLMSFilter
from baselines.rls import RLSFilter
from sigmodel.models import SampleSet
from utils.errors import ValidationError

logger = logging.getLogger(__name__)

FILTERS: Dict[Algorithm, BaseAdaptiveFilter] = {
    Algorithm.LMS: LMSFilter(),
    Algorithm.NLMS: NLMSFilter(),
    Algorithm.RLS: RLSFilter(),
    Algorithm.KACZMARZ: KaczmarzFilter(),
}


def get_filter(algorithm) -> BaseAdaptiveFilter:
    algorithm = Algorithm(algorithm)
    if algorithm not in FILTERS:
        raise ValidationError(f"{algorithm.value} is not an adaptive filter")
    return FILTERS[algorithm]


def init(algorithm, n: int, params: Optional[Dict[str, float]] = None,
         signal_power: float = 1.0) -> FilterState:
    """Zero weights, validated parameters, fresh memory.

    RLS without an explicit delta regularizes with 1e-2 * signal_power,
    i.e. P starts at (1e2 / r_0) I.
    """
    if n < 1:
        raise ValidationError(f"filter length must be >= 1, got {n}")
    flt = get_filter(algorithm)
    params = dict(params or {})
    if flt.algorithm is Algorithm.RLS and "delta" not in params:
        params["delta"] = 1e-2 * signal_power
    merged = flt.validate(params)
    return FilterState(
        w=np.zeros(n),
        algorithm=flt.algorithm,
        params=merged,
        aux=flt.initial_aux(n, merged),
        mult_count=0,
    )


def step(state: FilterState, frame: RegressorFrame) -> FilterState:
    """Apply one update; e = d - w'x."""
    if frame.x_vec.size != state.n:
        raise ValidationError(f"frame has {frame.x_vec.size} taps, filter has {state.n}")
    flt = FILTERS[state.algorithm]
    w, aux, mults = flt.update(state.w, state.aux, frame.x_vec, frame.d, state.params)
    if not np.all(np.isfinite(w)):
        raise ValidationError(f"{state.algorithm.value}: weights diverged to non-finite values")
    return replace(state, w=w, aux=aux, mult_count=state.mult_count + mults)


def mult_count_per_step(algorithm, n: int) -> int:
    """Per-iteration multiplication count; MCMC is one per unknown."""
    if n < 1:
        raise ValidationError(f"filter length must be >= 1, got {n}")
    algorithm = Algorithm(algorithm)
    if algorithm is Algorithm.MCMC:
        return n
    return FILTERS[algorithm].mults_per_step(n)


def regressor_frames(samples: SampleSet, n: int) -> Iterator[RegressorFrame]:
    """Newest-first windows [x_t, x_{t-1}, ..., x_{t-n+1}] with zero prehistory."""
    padded = np.concatenate([np.zeros(n - 1), samples.x])
    for t in range(len(samples)):
        window = padded[t : t + n][::-1]
        yield RegressorFrame(x_vec=window, d=float(samples.d[t]))


def run_filter(state: FilterState, frames: Iterable[RegressorFrame]) -> Tuple[FilterState, List[np.ndarray]]:
    """Feed frames in order; returns the final state and the weight trajectory."""
    trajectory = []
    for frame in frames:
        state = step(state, frame)
        trajectory.append(state.w)
    logger.debug("%s: %d steps, %d multiplications", state.algorithm.value, len(trajectory), state.mult_count)
    return state, trajectory
