"""Hybrid gain schedule, tuning feasibility checks and closed-form time bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .exceptions import InfeasibleGainError
from .ppf import PerformanceFunction, scaled_disturbance_bound
from .scalarmath import Tolerance, bisect

__all__ = [
    "MixedPowerGain",
    "GaussianGain",
    "InnerGain",
    "HybridGainSpec",
    "FeasibilityReport",
    "eval_gain",
    "residual_radius",
    "check_feasibility_first_order",
    "check_feasibility_second_order",
    "reach_time_bounds",
    "inner_settle_bound",
]

SQRT_HALF_PI = math.sqrt(0.5 * math.pi)

# width test disabled in practice; stops on |G(r) - d_bar| or float exhaustion
_RESIDUAL_TOL = Tolerance(abs_tol=1e-300, max_iter=2200)


@dataclass(frozen=True)
class MixedPowerGain:
    """Inner gain ``a*w**gamma + b*w**alpha`` with ``0 < gamma < 1 < alpha``."""

    a: float
    b: float
    gamma: float
    alpha: float

    variant = "mixed_power"

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"need a > 0 and b > 0, got a={self.a}, b={self.b}")
        if not (0 < self.gamma < 1 < self.alpha):
            raise ValueError(
                f"need 0 < gamma < 1 < alpha, got gamma={self.gamma}, alpha={self.alpha}"
            )

    def __call__(self, w: float) -> float:
        return self.a * w**self.gamma + self.b * w**self.alpha

    def floor(self, eps: float) -> float:
        """Smallest gain at the tube edge that still dominates: ``G(eps)``."""
        return self(eps)

    def scaled(self, factor: float) -> "MixedPowerGain":
        return MixedPowerGain(self.a * factor, self.b * factor, self.gamma, self.alpha)


@dataclass(frozen=True)
class GaussianGain:
    """Inner gain ``Lambda * sqrt(pi/2) * exp(-w**2 / 2)``."""

    Lambda: float

    variant = "gaussian"

    def __post_init__(self):
        if not self.Lambda > 0:
            raise ValueError(f"Lambda must be positive, got {self.Lambda}")

    def __call__(self, w: float) -> float:
        return self.Lambda * SQRT_HALF_PI * math.exp(-0.5 * w * w)

    @property
    def peak(self) -> float:
        return self.Lambda * SQRT_HALF_PI

    def floor(self, eps: float) -> float:
        # decreasing in w, so the tube edge is the uniform lower bound
        return self(eps)


InnerGain = Union[MixedPowerGain, GaussianGain]


@dataclass(frozen=True)
class HybridGainSpec:
    """Outer saturating gain for ``w > eps``, inner gain for ``w <= eps``."""

    k0: float
    k1: float
    gamma_out: float
    eps0: float
    eps: float
    inner: InnerGain

    def __post_init__(self):
        if not self.k0 > 0:
            raise ValueError(f"k0 must be positive, got {self.k0}")
        if not self.k1 > 0:
            raise ValueError(f"k1 must be positive, got {self.k1}")
        if not 0 < self.gamma_out < 1:
            raise ValueError(f"gamma_out must lie in (0, 1), got {self.gamma_out}")
        if not 0 < self.eps <= self.eps0:
            raise ValueError(f"need 0 < eps <= eps0, got eps={self.eps}, eps0={self.eps0}")

    def outer(self, w: float) -> float:
        wg = w**self.gamma_out
        return self.k0 + self.k1 * wg / (self.eps0**self.gamma_out + wg)

    def __call__(self, w: float) -> float:
        return eval_gain(self, w)

    @property
    def max_gain(self) -> float:
        """Upper bound of the schedule over ``w >= 0`` (outer sup vs inner on the tube)."""
        inner = self.inner
        if isinstance(inner, GaussianGain):
            inner_max = inner.peak
        else:
            inner_max = inner(self.eps)
        return max(self.k0 + self.k1, inner_max)


@dataclass(frozen=True)
class FeasibilityReport:
    outer_ok: bool
    inner_ok: bool
    d_bar_outer: float
    d_bar_inner: float
    eta0: float
    eta_eps: float
    inner_edge_gain: float
    residual_radius: Optional[float]

    @property
    def ok(self) -> bool:
        return self.outer_ok and self.inner_ok


def eval_gain(spec: HybridGainSpec, w: float) -> float:
    """Hybrid gain at magnitude ``w = |xi|`` or ``w = |s|``."""
    if w > spec.eps:
        return spec.outer(w)
    return spec.inner(w)


def residual_radius(inner: InnerGain, d_bar: float, eps: float) -> Optional[float]:
    """Radius of the residual set, or ``None`` when it is not contained in the tube.

    Mixed-power gains solve ``a r**gamma + b r**alpha = d_bar`` on ``(0, eps]``.
    Gaussian gains dominate the whole tube whenever their edge value exceeds
    ``d_bar``, in which case the radius is 0.
    """
    if d_bar <= 0:
        return 0.0
    if isinstance(inner, GaussianGain):
        return 0.0 if inner.floor(eps) > d_bar else None
    if inner(eps) < d_bar:
        return None
    return bisect(lambda r: inner(r) - d_bar, 0.0, eps, _RESIDUAL_TOL)


def _report(spec: HybridGainSpec, d_bar_outer: float, d_bar_inner: float) -> FeasibilityReport:
    edge = spec.inner.floor(spec.eps)
    eta0 = spec.k0 - d_bar_outer
    eta_eps = edge - d_bar_inner
    return FeasibilityReport(
        outer_ok=eta0 > 0,
        inner_ok=eta_eps > 0,
        d_bar_outer=d_bar_outer,
        d_bar_inner=d_bar_inner,
        eta0=eta0,
        eta_eps=eta_eps,
        inner_edge_gain=edge,
        residual_radius=residual_radius(spec.inner, d_bar_inner, spec.eps),
    )


def check_feasibility_first_order(
    spec: HybridGainSpec, pf: PerformanceFunction, d_max: float, xi0: float
) -> FeasibilityReport:
    """Tuning inequalities for the first-order design.

    The outer check compares ``k0`` with the scaled disturbance bound at the
    a-priori transformed magnitude ``xi0``; the inner check compares the
    inner gain at the tube edge with the bound at ``eps``.
    """
    return _report(
        spec,
        scaled_disturbance_bound(pf, xi0, d_max),
        scaled_disturbance_bound(pf, spec.eps, d_max),
    )


def check_feasibility_second_order(spec: HybridGainSpec, d_max: float) -> FeasibilityReport:
    # sliding dynamics see d(t) directly, so no chi scaling
    return _report(spec, d_max, d_max)


def reach_time_bounds(
    spec: HybridGainSpec, d_bar_outer: float, w0: float
) -> tuple[float, float, float]:
    """Upper bounds ``(T_A, T_B, T_out)`` on the time to reach ``w <= eps``.

    ``T_A`` covers ``w >= eps0`` at rate ``eta0 + k1/2``; ``T_B`` integrates
    ``dw/dt <= -k1 w**gamma / (2 eps0**gamma)`` from ``eps0`` down to ``eps``.
    """
    eta0 = spec.k0 - d_bar_outer
    if eta0 <= 0:
        raise InfeasibleGainError(
            f"k0={spec.k0:.6g} does not exceed the outer disturbance bound {d_bar_outer:.6g}"
        )
    g = spec.gamma_out
    t_a = max(0.0, w0 - spec.eps0) / (eta0 + 0.5 * spec.k1)
    t_b = (
        2.0 * spec.eps0**g / (spec.k1 * (1.0 - g))
        * (spec.eps0 ** (1.0 - g) - spec.eps ** (1.0 - g))
    )
    return t_a, t_b, t_a + t_b


def inner_settle_bound(inner: InnerGain, eps0: float, d_bar_inner: float) -> float:
    if isinstance(inner, GaussianGain):
        margin = inner.peak - d_bar_inner
        if margin <= 0:
            raise InfeasibleGainError(
                f"Lambda*sqrt(pi/2)={inner.peak:.6g} does not exceed {d_bar_inner:.6g}"
            )
        return eps0 / margin
    return 1.0 / (inner.a * (1.0 - inner.gamma)) + 1.0 / (inner.b * (inner.alpha - 1.0))
