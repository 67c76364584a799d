"""Prescribed performance envelope and the erf error transformation."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import DomainError, InfeasibleStateError
from .scalarmath import erf, erf_inv

__all__ = [
    "PerformanceFunction",
    "TransformedState",
    "FEASIBILITY_MARGIN",
    "rho",
    "rho_dot",
    "xi_from_state",
    "state_from_xi",
    "scaled_disturbance_bound",
]

HALF_SQRT_PI = 0.5 * math.sqrt(math.pi)

# |x|/rho at or above 1 - FEASIBILITY_MARGIN is treated as on the envelope.
FEASIBILITY_MARGIN = 1e-12


@dataclass(frozen=True)
class PerformanceFunction:
    """Exponential envelope ``(rho0 - rho_inf) * exp(-lam * t) + rho_inf``."""

    rho0: float
    rho_inf: float
    lam: float

    def __post_init__(self):
        if not (self.rho0 > self.rho_inf > 0):
            raise ValueError(
                f"need rho0 > rho_inf > 0, got rho0={self.rho0}, rho_inf={self.rho_inf}"
            )
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")

    def __call__(self, t: float) -> float:
        return rho(self, t)

    def derivative(self, t: float) -> float:
        return rho_dot(self, t)


@dataclass(frozen=True)
class TransformedState:
    xi: float
    chi: float


def _check_time(t: float) -> None:
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t}")


def rho(pf: PerformanceFunction, t: float) -> float:
    _check_time(t)
    return (pf.rho0 - pf.rho_inf) * math.exp(-pf.lam * t) + pf.rho_inf


def rho_dot(pf: PerformanceFunction, t: float) -> float:
    _check_time(t)
    return -pf.lam * (pf.rho0 - pf.rho_inf) * math.exp(-pf.lam * t)


def chi(xi: float, rho_t: float) -> float:
    """Scaling factor ``1 / (rho * d erf/d xi)``."""
    return HALF_SQRT_PI * math.exp(xi * xi) / rho_t


def xi_from_state(pf: PerformanceFunction, x: float, t: float) -> TransformedState:
    """Map a state strictly inside the envelope to ``(xi, chi)``.

    Raises
    ------
    InfeasibleStateError
        If ``|x| >= rho(t)`` (within ``FEASIBILITY_MARGIN``).
    """
    r = rho(pf, t)
    ratio = x / r
    if not abs(ratio) < 1.0 - FEASIBILITY_MARGIN:
        raise InfeasibleStateError(
            f"|x(t)| < rho(t) violated at t={t:.6g}: |x|={abs(x):.9g}, rho={r:.9g}"
        )
    xi = erf_inv(ratio)
    return TransformedState(xi=xi, chi=chi(xi, r))


def state_from_xi(pf: PerformanceFunction, xi: float, t: float) -> float:
    return rho(pf, t) * erf(xi)


def scaled_disturbance_bound(pf: PerformanceFunction, xi_bound: float, d_max: float) -> float:
    """Worst-case ``|chi * d|`` over ``|xi| <= xi_bound``, using ``rho >= rho_inf``."""
    if xi_bound < 0 or d_max < 0:
        raise DomainError(f"need xi_bound >= 0 and d_max >= 0, got {xi_bound}, {d_max}")
    return HALF_SQRT_PI * math.exp(xi_bound * xi_bound) * d_max / pf.rho_inf
