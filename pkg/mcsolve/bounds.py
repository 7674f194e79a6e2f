"""Walk-count minima, truncated Neumann sums and error lower bounds."""

import logging
import math
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from corrmath.direct import direct_solve
from corrmath.matrices import CorrelationMatrix, as_matrix, as_vector
from mcsolve.convergence import require_convergent
from mcsolve.splitting import ProbabilityScheme, SplitSystem, build_transition, split
from utils.errors import NoPathError, ValidationError

logger = logging.getLogger(__name__)

MAX_ENUMERATED_PATHS = 1_000_000


class BoundRow(NamedTuple):
    depth: int
    min_walks: Optional[int]
    lower_bound: float


def _ceil_count(x: float) -> int:
    # products of probabilities carry rounding noise; snap values that are integers in exact arithmetic
    nearest = round(x)
    if abs(x - nearest) <= 1e-9 * max(1.0, x):
        return int(nearest)
    return math.ceil(x)


def min_path_walks(P, j: int, start: Optional[int] = None) -> int:
    """ceil(1 / min product of probabilities over j-step transient paths).

    P is the transient block only. Paths may revisit states; only moves with
    p > 0 count.
    """
    Pm = as_matrix(P, "P")
    if j < 1:
        raise ValidationError(f"path length must be >= 1, got {j}")
    N = Pm.shape[0]
    if start is not None and not 0 <= start < N:
        raise ValidationError(f"start state must be in [0, {N}), got {start}")

    Q = np.where(Pm > 0, Pm, np.inf)
    best = np.ones(N)
    for _ in range(j):
        best = np.min(Q * best[None, :], axis=1)

    value = best[start] if start is not None else float(np.min(best))
    if not np.isfinite(value):
        origin = f"state {start}" if start is not None else "any state"
        raise NoPathError(f"no {j}-step transient path from {origin}")
    return _ceil_count(1.0 / value)


def min_walks(system: SplitSystem, j: int, start: Optional[int] = None) -> int:
    """M^(j): walks needed to reach every j-step terminating point at least once in expectation."""
    return min_path_walks(system.transient, j, start)


def truncated_sum(F, b: Sequence[float], i: int, m: int) -> float:
    """s_im = (b + F b + ... + F^{m-1} b)_i."""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    Fm = np.asarray(F, dtype=np.float64)
    term = np.array(as_vector(b, "b"))
    parts = [term[i]]
    for _ in range(m - 1):
        term = Fm @ term
        parts.append(term[i])
    return math.fsum(parts)


def path_expectation(system: SplitSystem, i: int, m: int) -> float:
    """Exact expected collision score over the first m moves, by enumerating every path."""
    N = system.N
    if m < 0:
        raise ValidationError(f"m must be >= 0, got {m}")
    if N ** m > MAX_ENUMERATED_PATHS:
        raise ValidationError(f"{N}^{m} paths is too many to enumerate")

    P, V, b = system.transient, system.V, system.b
    parts: List[float] = []

    def visit(state: int, prob: float, weight: float, depth: int) -> None:
        parts.append(prob * weight * b[state])
        if depth == m:
            return
        for nxt in range(N):
            if P[state, nxt] > 0:
                visit(nxt, prob * P[state, nxt], weight * V[state, nxt], depth + 1)

    visit(i, 1.0, 1.0, 0)
    return math.fsum(parts)


def error_bounds(R: CorrelationMatrix, b: Sequence[float], i: int, j_max: int,
                 scheme: ProbabilityScheme = ProbabilityScheme()) -> List[BoundRow]:
    """Pairs (M^(j), |w_i - s_{i,j+1}|) for j = 0..j_max.

    The bound after M^(j) walks is the tail the walks have not yet reached;
    it is nonincreasing and tends to 0. M^(0) = 1; M^(j) is None when no
    j-step path exists.
    """
    if j_max < 0:
        raise ValidationError(f"depth must be >= 0, got {j_max}")
    bv = as_vector(b, "b")
    if not 0 <= i < R.n:
        raise ValidationError(f"component must be in [0, {R.n}), got {i}")
    require_convergent(R)

    w = direct_solve(R, bv)
    F = split(R)
    system = build_transition(F, bv, scheme)

    rows = []
    term = np.array(bv)
    parts = [term[i]]
    for j in range(j_max + 1):
        if j > 0:
            term = F @ term
            parts.append(term[i])
        partial = math.fsum(parts)
        if j == 0:
            walks = 1
        else:
            try:
                walks = min_walks(system, j, start=i)
            except NoPathError:
                walks = None
        rows.append(BoundRow(depth=j, min_walks=walks, lower_bound=abs(w[i] - partial)))
    return rows
