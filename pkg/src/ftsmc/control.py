"""First-order and second-order PPF-aware laws plus the non-PPF baseline.

Every law is a pure function of the current state and time; nothing is
remembered between calls.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import InfeasibleStateError
from .gain import HybridGainSpec, eval_gain
from .ppf import FEASIBILITY_MARGIN, PerformanceFunction, rho, rho_dot, xi_from_state
from .scalarmath import erf, erf_inv, hard_sign, smooth_sign

__all__ = [
    "SecondOrderPlant",
    "SlidingConfig",
    "first_order_control",
    "sliding_variable",
    "second_order_ppf_control",
    "second_order_baseline_control",
]

SIGN_MODES = ("hard", "smoothed")


@dataclass(frozen=True)
class SecondOrderPlant:
    """``e1' = e2``, ``e2' = -2 zeta omega_n e2 - omega_n**2 e1 + u + d``."""

    omega_n: float
    zeta: float

    def __post_init__(self):
        if not self.omega_n > 0:
            raise ValueError(f"omega_n must be positive, got {self.omega_n}")
        if not self.zeta > 0:
            raise ValueError(f"zeta must be positive, got {self.zeta}")

    def drift(self, e1: float, e2: float) -> float:
        return -2.0 * self.zeta * self.omega_n * e2 - self.omega_n**2 * e1


@dataclass(frozen=True)
class SlidingConfig:
    """Surface slope and switching-function choice.

    First-order runs only use the sign settings; ``c`` is ignored there.
    """

    c: float = 1.0
    boundary_layer: float = 1e-2
    sign_mode: str = "hard"

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if self.sign_mode not in SIGN_MODES:
            raise ValueError(f"sign_mode must be one of {SIGN_MODES}, got {self.sign_mode!r}")
        if self.sign_mode == "smoothed" and not self.boundary_layer > 0:
            raise ValueError(
                f"boundary_layer must be positive for smoothed sign, got {self.boundary_layer}"
            )

    def sign(self, s: float) -> float:
        if self.sign_mode == "smoothed":
            return smooth_sign(s, self.boundary_layer)
        return hard_sign(s)


def _psi(pf: PerformanceFunction, e1: float, t: float) -> tuple[float, float]:
    # erf(erf_inv(e1/rho)) == e1/rho, so the laws never need xi itself
    r = rho(pf, t)
    psi = e1 / r
    if not abs(psi) < 1.0 - FEASIBILITY_MARGIN:
        raise InfeasibleStateError(
            f"|e1(t)| < rho(t) violated at t={t:.6g}: |e1|={abs(e1):.9g}, rho={r:.9g}"
        )
    return psi, r


def first_order_control(
    pf: PerformanceFunction,
    spec: HybridGainSpec,
    x: float,
    t: float,
    sign_cfg: SlidingConfig,
) -> float:
    """``u = rho' erf(xi) - G_hyb(|xi|) sgn(xi) / chi`` for ``x' = u + d``.

    Closes the loop to ``xi' = -G_hyb(|xi|) sgn(xi) + chi d``.
    """
    ts = xi_from_state(pf, x, t)
    switching = eval_gain(spec, abs(ts.xi)) * sign_cfg.sign(ts.xi)
    return rho_dot(pf, t) * erf(ts.xi) - switching / ts.chi


def sliding_variable(
    pf: PerformanceFunction, cfg: SlidingConfig, e1: float, e2: float, t: float
) -> tuple[float, float]:
    """PPF-aware surface ``s = e2 + c erf(xi)``; returns ``(s, xi)``."""
    psi, _ = _psi(pf, e1, t)
    return e2 + cfg.c * psi, erf_inv(psi)


def second_order_ppf_control(
    pf: PerformanceFunction,
    plant: SecondOrderPlant,
    spec: HybridGainSpec,
    cfg: SlidingConfig,
    e1: float,
    e2: float,
    t: float,
    *,
    extend: bool = False,
) -> float:
    """Feedback-linearising law giving ``s' = -G_hyb(|s|) sgn(s) + d``.

    With ``extend=True`` the law is evaluated with ``psi = e1/rho`` even on or
    beyond the envelope (where ``xi`` no longer exists). This is only used to
    keep integrating a run after the constraint has been lost.
    """
    if extend:
        r = rho(pf, t)
        psi = e1 / r
    else:
        psi, r = _psi(pf, e1, t)
    s = e2 + cfg.c * psi
    wn, c = plant.omega_n, cfg.c
    return (
        wn * wn * r * psi
        + (2.0 * plant.zeta * wn - c / r) * e2
        + c * rho_dot(pf, t) / r * psi
        - eval_gain(spec, abs(s)) * cfg.sign(s)
    )


def second_order_baseline_control(
    plant: SecondOrderPlant,
    spec: HybridGainSpec,
    cfg: SlidingConfig,
    e1: float,
    e2: float,
) -> float:
    """Non-PPF hybrid-gain law on the linear surface ``s_b = e2 + c e1``.

    Same gains, slope and sign function as the PPF law, with exact model
    cancellation, so ``s_b' = -G_hyb(|s_b|) sgn(s_b) + d``.
    """
    wn, c = plant.omega_n, cfg.c
    s_b = e2 + c * e1
    return (
        wn * wn * e1
        + (2.0 * plant.zeta * wn - c) * e2
        - eval_gain(spec, abs(s_b)) * cfg.sign(s_b)
    )
