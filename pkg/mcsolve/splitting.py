"""Splitting R = I - F and the absorbing Markov chain that walks F.

Each transient entry is factored as f_ij = p_ij * v_ij. State N is the
absorbing state: its row is [0, ..., 0, 1] and every transient row leaves
at least `absorb` probability for it, so walks terminate geometrically.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Sequence

import numpy as np

from corrmath.matrices import CorrelationMatrix, as_matrix, as_vector
from utils.errors import ValidationError

DEFAULT_ABSORB = 0.2
ROW_SUM_TOL = 1e-12


class SchemeKind(str, Enum):
    UNIFORM = "uniform"
    MAGNITUDE = "magnitude"


@dataclass(frozen=True)
class ProbabilityScheme:
    """How transition probabilities are assigned.

    UNIFORM: every transient move gets (1 - absorb)/N, absorption gets absorb.
    MAGNITUDE: moves proportional to |f_ij|, absorb is the absorption floor.
    MAGNITUDE is an extension for variance reduction.
    """

    kind: SchemeKind = SchemeKind.UNIFORM
    absorb: float = DEFAULT_ABSORB

    def __post_init__(self):
        object.__setattr__(self, "kind", SchemeKind(self.kind))
        if not (0.0 < self.absorb < 1.0):
            raise ValidationError(f"absorb must lie in (0, 1), got {self.absorb}")


@dataclass(frozen=True, eq=False)
class SplitSystem:
    F: np.ndarray
    V: np.ndarray
    P: np.ndarray
    b: np.ndarray
    scheme: ProbabilityScheme

    @property
    def N(self) -> int:
        return int(self.F.shape[0])

    @property
    def transient(self) -> np.ndarray:
        """Transient-to-transient block of P."""
        return self.P[: self.N, : self.N]

    @property
    def absorption(self) -> np.ndarray:
        return self.P[: self.N, self.N]

    @cached_property
    def cumulative(self) -> np.ndarray:
        """Cumulative transient rows; the last column is pinned to 1 so u < 1 always lands."""
        cum = np.cumsum(self.P[: self.N], axis=1)
        cum[:, -1] = 1.0
        cum.flags.writeable = False
        return cum


def split(R: CorrelationMatrix) -> np.ndarray:
    """F = I - R."""
    F = np.eye(R.n) - R.dense
    F.flags.writeable = False
    return F


def build_transition(F, b: Sequence[float], scheme: ProbabilityScheme = ProbabilityScheme()) -> SplitSystem:
    """Factor F into probabilities and values and attach the absorbing state.

    A transient row of F that is entirely zero becomes pure absorption under
    either scheme. Wherever p_ij = 0 the matching f_ij is 0, so the walk
    estimator stays unbiased.
    """
    Fm = as_matrix(F, "F")
    if Fm.shape[0] != Fm.shape[1]:
        raise ValidationError(f"F must be square, got shape {Fm.shape}")
    bv = as_vector(b, "b")
    N = Fm.shape[0]
    if bv.size != N:
        raise ValidationError(f"b has length {bv.size}, F is {N}x{N}")

    P = np.zeros((N + 1, N + 1))
    V = np.zeros((N, N))
    move = 1.0 - scheme.absorb

    for i in range(N):
        row = Fm[i]
        if not np.any(row):
            P[i, N] = 1.0
            continue
        if scheme.kind is SchemeKind.UNIFORM:
            p = np.full(N, move / N)
        else:
            mag = np.abs(row)
            p = move * mag / np.sum(mag)
        P[i, :N] = p
        nz = p > 0
        V[i, nz] = row[nz] / p[nz]
        P[i, N] = 1.0 - float(np.sum(p))
    P[N, N] = 1.0

    for arr in (P, V):
        arr.flags.writeable = False
    system = SplitSystem(F=Fm, V=V, P=P, b=bv, scheme=scheme)
    _check_invariants(system)
    return system


def _check_invariants(system: SplitSystem) -> None:
    N = system.N
    P = system.P
    if np.any(P < 0) or np.any(P > 1):
        raise ValidationError("transition probabilities outside [0, 1]")
    if np.any(np.abs(P.sum(axis=1) - 1.0) > ROW_SUM_TOL):
        raise ValidationError("transition matrix is not row-stochastic")
    if np.any(system.absorption <= 0):
        raise ValidationError("a transient row has no absorption probability")
    zero_p = system.transient == 0
    if np.any(system.F[zero_p] != 0):
        raise ValidationError("nonzero f_ij with zero transition probability")
    if not np.array_equal(P[N], np.eye(N + 1)[N]):
        raise ValidationError("absorbing row must be [0, ..., 0, 1]")
