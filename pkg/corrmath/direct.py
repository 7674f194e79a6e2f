"""Dense LU oracle for R w = b."""

import logging
import warnings
from typing import Sequence

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from corrmath.matrices import CorrelationMatrix, as_vector
from utils.errors import SingularMatrixError, ValidationError

logger = logging.getLogger(__name__)

# reject when |pivot| < PIVOT_RTOL * max|a_ij|
PIVOT_RTOL = 1e-12


def direct_solve(R: CorrelationMatrix, b: Sequence[float]) -> np.ndarray:
    """Solve R w = b by LU with partial pivoting.

    Raises SingularMatrixError when any pivot falls below the relative
    threshold, so near-singular systems never return garbage silently.
    """
    A = np.array(R.dense)
    rhs = as_vector(b, "b")
    if rhs.shape[0] != A.shape[0]:
        raise ValidationError(f"b has length {rhs.shape[0]}, R is {A.shape[0]}x{A.shape[0]}")

    scale = float(np.max(np.abs(A)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = lu_factor(A)
    pivots = np.abs(np.diag(lu))
    if scale == 0.0 or float(np.min(pivots)) < PIVOT_RTOL * scale:
        raise SingularMatrixError(
            f"matrix is singular to working precision (min pivot {np.min(pivots):.3g}, "
            f"threshold {PIVOT_RTOL * scale:.3g})"
        )

    w = lu_solve((lu, piv), rhs)
    residual = float(np.max(np.abs(A @ w - rhs)))
    logger.debug("direct_solve N=%d residual=%.3e", A.shape[0], residual)
    return w
