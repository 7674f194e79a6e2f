"""Convergence precheck: Neumann series for (I - F)^{-1} needs rho(F) < 1."""

import logging
from dataclasses import asdict, dataclass
from enum import Enum

from corrmath.matrices import CorrelationMatrix
from corrmath.spectral import eigen_interval_ok, gershgorin_bound, gershgorin_disc, spectral_radius
from mcsolve.splitting import split
from utils.errors import DivergentSystemError

logger = logging.getLogger(__name__)

DEFAULT_MARGIN = 1e-6


class Verdict(str, Enum):
    CONVERGENT = "CONVERGENT"
    DIVERGENT = "DIVERGENT"
    MARGINAL = "MARGINAL"


@dataclass(frozen=True)
class PrecheckReport:
    gershgorin_center: float
    gershgorin_radius: float
    spectral_radius_F: float
    eigen_interval_ok: bool
    verdict: Verdict
    power_iteration_converged: bool = True
    gershgorin_bound_radius: float = 0.0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["verdict"] = self.verdict.value
        return out


def precheck_convergence(R: CorrelationMatrix, margin: float = DEFAULT_MARGIN) -> PrecheckReport:
    center, radius = gershgorin_disc(R)
    _, bound_radius = gershgorin_bound(R)
    est = spectral_radius(split(R))
    rho = est.value
    if rho < 1.0 - margin:
        verdict = Verdict.CONVERGENT
    elif rho < 1.0:
        verdict = Verdict.MARGINAL
    else:
        verdict = Verdict.DIVERGENT
    logger.debug("precheck: disc=(%.6g, %.6g) rho(F)=%.6g -> %s", center, radius, rho, verdict.value)
    return PrecheckReport(
        gershgorin_center=center,
        gershgorin_radius=radius,
        spectral_radius_F=rho,
        eigen_interval_ok=eigen_interval_ok(rho),
        verdict=verdict,
        power_iteration_converged=est.converged,
        gershgorin_bound_radius=bound_radius,
    )


def require_convergent(R: CorrelationMatrix, force: bool = False) -> PrecheckReport:
    """Run the precheck and refuse DIVERGENT systems unless forced."""
    report = precheck_convergence(R)
    if report.verdict is Verdict.DIVERGENT:
        if not force:
            raise DivergentSystemError(report.spectral_radius_F)
        logger.warning("forcing solve of divergent system (rho(F)=%.6g)", report.spectral_radius_F)
    elif report.verdict is Verdict.MARGINAL:
        logger.warning("marginal system: rho(F)=%.9g is within margin of 1", report.spectral_radius_F)
    return report
