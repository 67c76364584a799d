"""Seeded generators for feasible closed-loop scenarios."""

import math
from dataclasses import dataclass

import numpy as np

from ftsmc import (
    Disturbance,
    GaussianGain,
    HybridGainSpec,
    MixedPowerGain,
    PerformanceFunction,
    SecondOrderPlant,
)
from ftsmc.gain import check_feasibility_first_order, inner_settle_bound, reach_time_bounds
from ftsmc.ppf import scaled_disturbance_bound, xi_from_state


@dataclass(frozen=True)
class FirstOrderCase:
    pf: PerformanceFunction
    spec: HybridGainSpec
    dist: Disturbance
    x0: float
    xi0: float

    @property
    def bound(self) -> float:
        """``T_out + T_in`` for the reaching-time check."""
        d_out = scaled_disturbance_bound(self.pf, abs(self.xi0), self.dist.d_max)
        d_in = scaled_disturbance_bound(self.pf, self.spec.eps, self.dist.d_max)
        t_out = reach_time_bounds(self.spec, d_out, abs(self.xi0))[2]
        return t_out + inner_settle_bound(self.spec.inner, self.spec.eps0, d_in)

    @property
    def t_out(self) -> float:
        d_out = scaled_disturbance_bound(self.pf, abs(self.xi0), self.dist.d_max)
        return reach_time_bounds(self.spec, d_out, abs(self.xi0))[2]


def feasible_first_order(rng: np.random.Generator) -> FirstOrderCase:
    """Draw envelope, disturbance and gains, then size k0 and the inner gain to pass."""
    rho_inf = rng.uniform(0.1, 0.6)
    pf = PerformanceFunction(rho_inf + rng.uniform(0.5, 4.0), rho_inf, rng.uniform(0.3, 3.0))
    eps0 = rng.uniform(0.3, 1.0)
    # start outside the knee so every reaching phase is exercised
    x0 = rng.choice([-1.0, 1.0]) * pf.rho0 * math.erf(rng.uniform(1.05 * eps0, 1.8))
    xi0 = xi_from_state(pf, x0, 0.0).xi
    dist = Disturbance(rng.uniform(0.0, 0.3), 10.0)
    eps = eps0 * rng.uniform(0.3, 1.0)
    d_out = scaled_disturbance_bound(pf, abs(xi0), dist.d_max)
    d_in = scaled_disturbance_bound(pf, eps, dist.d_max)
    base = MixedPowerGain(1.0, 1.0, rng.uniform(0.4, 0.9), rng.uniform(1.2, 2.0))
    inner = base.scaled((d_in * rng.uniform(1.3, 3.0) + 0.1) / base(eps))
    spec = HybridGainSpec(
        k0=d_out * rng.uniform(1.2, 2.5) + 0.2,
        k1=rng.uniform(0.5, 3.0),
        gamma_out=rng.uniform(0.3, 0.9),
        eps0=eps0,
        eps=eps,
        inner=inner,
    )
    assert check_feasibility_first_order(spec, pf, dist.d_max, abs(xi0)).ok
    return FirstOrderCase(pf, spec, dist, x0, xi0)


# A second-order configuration whose envelope decays slower than the surface
# slope can track (c > |rho'(0)|), so the PPF law stays well defined.
SLOW_PF = PerformanceFunction(2.5, 0.35, 0.3)
SLOW_PLANT = SecondOrderPlant(2.0, 0.15)
SLOW_SPEC = HybridGainSpec(0.8, 1.6, 0.7, 0.3, 0.01, GaussianGain(0.9))
