"""Random walks on the split system and their averaging into estimates.

Collision estimator: a walk starting at state i scores b_i, and on every
move k -> k' it multiplies its weight by v_kk' and adds weight * b_k'. The
expected score is the Neumann-series value w_i whenever rho(F) < 1.

Walk w of component i belongs to block w // WALK_BLOCK and sits in column
w % WALK_BLOCK of it. Block k draws from a generator seeded by
SeedSequence([seed, i, k]), and every step draws a full row of WALK_BLOCK
uniforms whatever the number of walks in the block. A walk's uniforms
therefore depend only on (seed, i, w): the first M walks of a larger run
are the M-walk run, and blocks can run on a thread pool in any order.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

from corrmath.matrices import CorrelationMatrix, as_vector
from mcsolve.convergence import require_convergent
from mcsolve.splitting import ProbabilityScheme, SplitSystem, build_transition, split
from utils.errors import ValidationError

logger = logging.getLogger(__name__)

MAX_STEPS = 10_000
WALK_BLOCK = 4096
ROW_SUM_TOL = 1e-12


class WalkResult(NamedTuple):
    score: float
    length: int
    truncated: bool


class WalkSample(NamedTuple):
    scores: np.ndarray
    lengths: np.ndarray
    truncated: np.ndarray


@dataclass(frozen=True)
class WalkEstimate:
    mean: float
    stderr: float
    walks: int
    mean_length: float
    max_length: int
    truncated_walks: int


def transition_rule(p_row: Sequence[float], u: float) -> int:
    """Smallest state s with u < p_0 + ... + p_s (half-open partition of [0, 1))."""
    row = np.asarray(p_row, dtype=np.float64)
    if row.ndim != 1 or row.size == 0 or np.any(row < 0):
        raise ValidationError("transition row must be a non-empty vector of probabilities")
    if abs(float(np.sum(row)) - 1.0) > ROW_SUM_TOL:
        raise ValidationError(f"transition row sums to {np.sum(row)!r}, not 1")
    if not 0.0 <= u < 1.0:
        raise ValidationError(f"u must lie in [0, 1), got {u}")
    s = int(np.searchsorted(np.cumsum(row), u, side="right"))
    return min(s, row.size - 1)


def run_walk(system: SplitSystem, start: int, u_stream: Iterable[float], max_steps: int = MAX_STEPS) -> WalkResult:
    """One walk driven by an explicit stream of uniforms."""
    N = system.N
    if not 0 <= start < N:
        raise ValidationError(f"start state must be in [0, {N}), got {start}")
    if max_steps < 1:
        raise ValidationError(f"max_steps must be >= 1, got {max_steps}")

    uniforms = iter(u_stream)
    k = start
    weight = 1.0
    score = float(system.b[start])
    length = 0
    for _ in range(max_steps):
        try:
            u = next(uniforms)
        except StopIteration:
            raise ValidationError("uniform stream exhausted before the walk ended") from None
        nxt = min(int(np.searchsorted(system.cumulative[k], u, side="right")), N)
        if nxt == N:
            return WalkResult(score, length, False)
        weight *= system.V[k, nxt]
        score += weight * system.b[nxt]
        k = nxt
        length += 1
    return WalkResult(score, length, True)


def walk_generator(seed: int, component: int, block: int) -> np.random.Generator:
    """Generator feeding block `block` of walks for `component`."""
    return np.random.default_rng(np.random.SeedSequence([seed, component, block]))


def _walk_block(system: SplitSystem, start: int, count: int, rng: np.random.Generator,
                max_steps: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    N = system.N
    cum, V, b = system.cumulative, system.V, system.b

    state = np.full(count, start, dtype=np.intp)
    weight = np.ones(count)
    score = np.full(count, b[start])
    length = np.zeros(count, dtype=np.int64)
    active = np.ones(count, dtype=bool)

    for _ in range(max_steps):
        if not active.any():
            break
        u = rng.random(WALK_BLOCK)
        idx = np.flatnonzero(active)
        nxt = np.minimum((u[idx, None] >= cum[state[idx]]).sum(axis=1), N)
        absorbed = nxt == N
        active[idx[absorbed]] = False

        moving = idx[~absorbed]
        dest = nxt[~absorbed]
        weight[moving] *= V[state[moving], dest]
        score[moving] += weight[moving] * b[dest]
        state[moving] = dest
        length[moving] += 1

    return score, length, active


def sample_walks(system: SplitSystem, i: int, walks: int, seed: int,
                 max_steps: int = MAX_STEPS, workers: int = 1) -> WalkSample:
    """Per-walk scores, lengths and truncation flags for walks 0..walks-1 from state i."""
    if walks < 1:
        raise ValidationError(f"walks must be >= 1, got {walks}")
    if not 0 <= i < system.N:
        raise ValidationError(f"component must be in [0, {system.N}), got {i}")
    if max_steps < 1:
        raise ValidationError(f"max_steps must be >= 1, got {max_steps}")

    sizes = [WALK_BLOCK] * (walks // WALK_BLOCK)
    if walks % WALK_BLOCK:
        sizes.append(walks % WALK_BLOCK)

    def run_block(k: int):
        return _walk_block(system, i, sizes[k], walk_generator(seed, i, k), max_steps)

    if workers > 1 and len(sizes) > 1:
        results = {}
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(run_block, k): k for k in range(len(sizes))}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
        parts = [results[k] for k in range(len(sizes))]
    else:
        parts = [run_block(k) for k in range(len(sizes))]

    return WalkSample(
        scores=np.concatenate([p[0] for p in parts]),
        lengths=np.concatenate([p[1] for p in parts]),
        truncated=np.concatenate([p[2] for p in parts]),
    )


def estimate_component(system: SplitSystem, i: int, walks: int, seed: int,
                       max_steps: int = MAX_STEPS, workers: int = 1) -> WalkEstimate:
    """Average `walks` independent walks started at state i."""
    sample = sample_walks(system, i, walks, seed, max_steps, workers)
    scores, lengths = sample.scores, sample.lengths
    truncated = int(sample.truncated.sum())
    if truncated:
        logger.warning("component %d: %d of %d walks hit the %d-step cap", i, truncated, walks, max_steps)

    if np.all(scores == scores[0]):
        mean, stderr = float(scores[0]), 0.0
    else:
        mean = math.fsum(scores) / walks
        stderr = float(np.std(scores, ddof=1) / math.sqrt(walks))

    return WalkEstimate(
        mean=mean,
        stderr=stderr,
        walks=walks,
        mean_length=math.fsum(lengths) / walks,
        max_length=int(lengths.max()),
        truncated_walks=truncated,
    )


def solve(R: CorrelationMatrix, b: Sequence[float], scheme: ProbabilityScheme = ProbabilityScheme(),
          walks: int = 10_000, seed: int = 0, force: bool = False,
          max_steps: int = MAX_STEPS, workers: int = 1) -> Tuple[np.ndarray, List[WalkEstimate]]:
    """Estimate every unknown of R w = b by random walks.

    DIVERGENT systems are refused with DivergentSystemError unless `force`.
    """
    bv = as_vector(b, "b")
    if bv.size != R.n:
        raise ValidationError(f"b has length {bv.size}, R is {R.n}x{R.n}")
    require_convergent(R, force=force)

    system = build_transition(split(R), bv, scheme)
    estimates = [estimate_component(system, i, walks, seed, max_steps, workers) for i in range(R.n)]
    w = np.array([e.mean for e in estimates])
    logger.info("solved N=%d with %d walks per unknown (scheme=%s)", R.n, walks, scheme.kind.value)
    return w, estimates
