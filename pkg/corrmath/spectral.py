"""Eigenvalue localisation: Gershgorin discs and a power-iteration spectral radius."""

import logging
from typing import List, NamedTuple, Tuple

import numpy as np

from corrmath.matrices import CorrelationMatrix
from utils.errors import ValidationError

logger = logging.getLogger(__name__)


class SpectralEstimate(NamedTuple):
    value: float
    converged: bool
    iterations: int


def gershgorin_disc(R: CorrelationMatrix) -> Tuple[float, float]:
    """Full-sum disc C(r_0, sum_{k>=1} |r_k|).

    Matches the worst row disc for N <= 2. Interior rows of a longer
    Toeplitz matrix see every lag twice, so use gershgorin_bound when an
    eigenvalue enclosure is needed.
    """
    r = np.abs(np.asarray(R.autocorr[1:], dtype=np.float64))
    return float(R.r0), float(np.sum(r))


def gershgorin_row_discs(R: CorrelationMatrix) -> List[Tuple[float, float]]:
    """Per-row discs C(r_0, sum_{j != i} |r_{|i-j|}|)."""
    A = np.abs(R.dense)
    radii = np.sum(A, axis=1) - np.diag(A)
    return [(float(R.r0), float(rad)) for rad in radii]


def gershgorin_bound(R: CorrelationMatrix) -> Tuple[float, float]:
    """Smallest disc at r_0 holding every row disc; encloses all eigenvalues."""
    radius = max(rad for _, rad in gershgorin_row_discs(R))
    return float(R.r0), float(radius)


def spectral_radius(F, tol: float = 1e-10, max_iter: int = 10_000, seed: int = 0) -> SpectralEstimate:
    """Dominant |eigenvalue| of a symmetric F by power iteration on F^2.

    F^2 has the single dominant eigenvalue rho^2 even when +rho and -rho are
    both eigenvalues of F. For the unit iterate x, theta = x'F^2 x = ||F x||^2
    and the estimate is sqrt(theta). The loop stops once the residual
    ||F^2 x - theta x|| is at most tol * sqrt(theta); for symmetric F that
    puts sqrt(theta) within tol of |lambda| for an eigenvalue lambda of F.
    A run that exhausts max_iter still returns its best estimate, flagged
    converged=False.
    """
    A = np.asarray(F, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"spectral_radius needs a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n == 0 or not np.any(A):
        return SpectralEstimate(0.0, True, 0)

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)

    rho = 0.0
    for it in range(1, max_iter + 1):
        y = A @ x
        theta = float(y @ y)
        if theta == 0.0:
            # landed in the nullspace; restart from a fresh direction
            x = rng.standard_normal(n)
            x /= np.linalg.norm(x)
            continue
        z = A @ y
        rho = float(np.sqrt(theta))
        residual = float(np.linalg.norm(z - theta * x))
        if residual <= tol * rho:
            return SpectralEstimate(rho, True, it)
        x = z / np.linalg.norm(z)

    logger.warning("power iteration did not converge in %d steps; estimate %.6g", max_iter, rho)
    return SpectralEstimate(rho, False, max_iter)


def eigen_interval_ok(rho_f: float) -> bool:
    """Open-interval check 0 < lambda(R) < 2, i.e. every lambda(F) in (-1, 1)."""
    return rho_f < 1.0
