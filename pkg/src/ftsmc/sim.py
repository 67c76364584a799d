"""Fixed-step closed-loop simulation of the first- and second-order plants."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .control import (
    SecondOrderPlant,
    SlidingConfig,
    first_order_control,
    second_order_baseline_control,
    second_order_ppf_control,
)
from .exceptions import DomainError, InfeasibleStateError, NumericDivergenceError
from .gain import HybridGainSpec
from .ppf import FEASIBILITY_MARGIN, PerformanceFunction, rho, xi_from_state
from .scalarmath import erf_inv

__all__ = [
    "Disturbance",
    "SimConfig",
    "Event",
    "Trajectory",
    "eval_disturbance",
    "inflate_envelope",
    "run_first_order",
    "run_second_order",
    "measure_reaching_time",
    "aborted_trajectory",
]

logger = logging.getLogger(__name__)

INTEGRATORS = ("rk4", "euler")
CONTROLLERS = ("ppf", "baseline")
MAX_STEPS = 100_000_000
INFLATION_FACTOR = 1.1


@dataclass(frozen=True)
class Disturbance:
    """Matched sinusoid ``d_max * sin(freq * t)``."""

    d_max: float
    freq: float = 10.0

    def __post_init__(self):
        if not self.d_max >= 0:
            raise ValueError(f"d_max must be non-negative, got {self.d_max}")
        if not self.freq > 0:
            raise ValueError(f"freq must be positive, got {self.freq}")

    def __call__(self, t: float) -> float:
        return eval_disturbance(self, t)


def eval_disturbance(dist: Disturbance, t: float) -> float:
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t}")
    return dist.d_max * math.sin(dist.freq * t)


@dataclass(frozen=True)
class SimConfig:
    """Integration settings.

    ``continue_on_violation`` lets a second-order PPF run keep integrating
    after leaving the envelope (default: halt). ``u_sat`` clips the control
    magnitude when set.
    """

    horizon: float = 10.0
    dt: float = 1e-3
    integrator: str = "rk4"
    record_stride: int = 1
    continue_on_violation: bool = False
    u_sat: Optional[float] = None

    def __post_init__(self):
        if not (self.dt > 0 and self.horizon > 0):
            raise ValueError(f"need positive dt and horizon, got dt={self.dt}, horizon={self.horizon}")
        if self.dt > self.horizon:
            raise ValueError(f"dt={self.dt} exceeds horizon={self.horizon}")
        if self.integrator not in INTEGRATORS:
            raise ValueError(f"integrator must be one of {INTEGRATORS}, got {self.integrator!r}")
        if self.record_stride < 1:
            raise ValueError(f"record_stride must be >= 1, got {self.record_stride}")
        if self.n_steps > MAX_STEPS:
            raise ValueError(f"horizon/dt = {self.n_steps} exceeds the sample budget {MAX_STEPS}")
        if self.u_sat is not None and not self.u_sat > 0:
            raise ValueError(f"u_sat must be positive, got {self.u_sat}")

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))


class Event(NamedTuple):
    kind: str  # tube_entry | envelope_violation | infeasible_abort
    time: float


@dataclass
class Trajectory:
    """Sampled closed-loop run.

    ``states`` is 1-D for first-order runs and ``(n, 2)`` for second-order
    runs. ``xi`` is NaN where undefined (baseline runs, or outside the
    envelope); ``s_var`` is NaN for first-order runs.
    """

    order: int
    controller: str
    times: np.ndarray
    states: np.ndarray
    xi: np.ndarray
    s_var: np.ndarray
    u: np.ndarray
    d: np.ndarray
    rho: np.ndarray
    tube_level: float
    events: list[Event] = field(default_factory=list)
    completed: bool = True

    def __len__(self) -> int:
        return len(self.times)

    @property
    def e1(self) -> np.ndarray:
        return self.states if self.order == 1 else self.states[:, 0]

    @property
    def e2(self) -> np.ndarray:
        if self.order == 1:
            raise AttributeError("first-order trajectories have no e2")
        return self.states[:, 1]

    @property
    def tube_signal(self) -> np.ndarray:
        return self.xi if self.order == 1 else self.s_var

    def first_event(self, kind: str) -> Optional[Event]:
        for ev in self.events:
            if ev.kind == kind:
                return ev
        return None

    @property
    def violated(self) -> bool:
        return self.first_event("envelope_violation") is not None


def inflate_envelope(pf: PerformanceFunction, e0: float, kappa: float = INFLATION_FACTOR) -> PerformanceFunction:
    """Widen ``rho0`` to ``kappa * |e0|`` when the initial error is outside the envelope."""
    if abs(e0) < pf.rho0:
        return pf
    new_rho0 = kappa * abs(e0)
    logger.warning(
        "initial error |%g| >= rho0=%g: inflating rho0 to %g", e0, pf.rho0, new_rho0
    )
    return PerformanceFunction(rho0=new_rho0, rho_inf=pf.rho_inf, lam=pf.lam)


def _step(rhs, t: float, y: tuple, dt: float, integrator: str) -> tuple:
    k1 = rhs(t, y)
    if integrator == "euler":
        return tuple(yi + dt * ki for yi, ki in zip(y, k1))
    h = 0.5 * dt
    k2 = rhs(t + h, tuple(yi + h * ki for yi, ki in zip(y, k1)))
    k3 = rhs(t + h, tuple(yi + h * ki for yi, ki in zip(y, k2)))
    k4 = rhs(t + dt, tuple(yi + dt * ki for yi, ki in zip(y, k3)))
    return tuple(
        yi + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d)
        for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
    )


def aborted_trajectory(order: int, controller: str, tube_level: float) -> Trajectory:
    """Empty record for a run refused at t=0 (initial error outside the envelope)."""
    z = np.empty(0)
    states = z if order == 1 else np.empty((0, 2))
    return Trajectory(
        order, controller, z, states, z, z, z, z, z, tube_level,
        [Event("infeasible_abort", 0.0)], completed=False,
    )


def _simulate(
    *,
    order: int,
    controller: str,
    y0: tuple,
    cfg: SimConfig,
    dist: Disturbance,
    control: Callable[[float, tuple], float],
    dynamics: Callable[[tuple, float], tuple],
    sample: Callable[[float, tuple], tuple[float, float, float]],
    envelope: Optional[Callable[[float], float]],
    enforce_envelope: bool,
    tube_level: float,
) -> Trajectory:
    """Shared loop. ``sample(t, y)`` returns ``(xi, s, rho)`` for recording and events."""
    u_sat = cfg.u_sat

    def u_of(t, y):
        u = control(t, y)
        if u_sat is not None:
            u = min(u_sat, max(-u_sat, u))
        return u

    def rhs(t, y):
        return dynamics(y, u_of(t, y) + dist(t))

    dt, n_steps, stride = cfg.dt, cfg.n_steps, cfg.record_stride
    rec_t, rec_y, rec_xi, rec_s, rec_u, rec_d, rec_rho = ([] for _ in range(7))
    events: list[Event] = []
    entered = False
    outside = False
    completed = True

    y = y0
    for n in range(n_steps + 1):
        t = n * dt
        xi, s, r = sample(t, y)
        if not entered and abs(xi if order == 1 else s) <= tube_level:
            entered = True
            events.append(Event("tube_entry", t))
        if n % stride == 0:
            rec_t.append(t)
            rec_y.append(y)
            rec_xi.append(xi)
            rec_s.append(s)
            rec_u.append(u_of(t, y))
            rec_d.append(dist(t))
            rec_rho.append(r)
        if n == n_steps:
            break

        try:
            y_next = _step(rhs, t, y, dt, cfg.integrator)
        except InfeasibleStateError:
            # a stage left the envelope; the law is undefined there
            events.append(Event("envelope_violation", t + dt))
            completed = False
            break
        if not all(math.isfinite(v) for v in y_next):
            raise NumericDivergenceError(
                f"non-finite state after t={t:.6g}", time=t
            )
        if envelope is not None:
            now_outside = not abs(y_next[0]) < envelope(t + dt) * (1.0 - FEASIBILITY_MARGIN)
            if now_outside and not outside:
                events.append(Event("envelope_violation", t + dt))
                if enforce_envelope:
                    completed = False
                    break
            outside = now_outside
        y = y_next

    times = np.asarray(rec_t)
    states = np.asarray(rec_y, dtype=float)
    if order == 1:
        states = states.reshape(-1)
    return Trajectory(
        order=order,
        controller=controller,
        times=times,
        states=states,
        xi=np.asarray(rec_xi, dtype=float),
        s_var=np.asarray(rec_s, dtype=float),
        u=np.asarray(rec_u, dtype=float),
        d=np.asarray(rec_d, dtype=float),
        rho=np.asarray(rec_rho, dtype=float),
        tube_level=tube_level,
        events=events,
        completed=completed,
    )


def run_first_order(
    pf: PerformanceFunction,
    spec: HybridGainSpec,
    dist: Disturbance,
    cfg: SimConfig,
    x0: float,
    sign_cfg: SlidingConfig = SlidingConfig(),
) -> Trajectory:
    """Simulate ``x' = u + d`` under the first-order PPF law.

    An infeasible ``x0`` yields an empty trajectory carrying an
    ``infeasible_abort`` event. Leaving the envelope halts the run.
    """
    if not abs(x0) < rho(pf, 0.0) * (1.0 - FEASIBILITY_MARGIN):
        return aborted_trajectory(1, "ppf", spec.eps)

    def sample(t, y):
        ts = xi_from_state(pf, y[0], t)
        return ts.xi, math.nan, rho(pf, t)

    return _simulate(
        order=1,
        controller="ppf",
        y0=(float(x0),),
        cfg=cfg,
        dist=dist,
        control=lambda t, y: first_order_control(pf, spec, y[0], t, sign_cfg),
        dynamics=lambda y, f: (f,),
        sample=sample,
        envelope=lambda t: rho(pf, t),
        enforce_envelope=True,
        tube_level=spec.eps,
    )


def run_second_order(
    pf: Optional[PerformanceFunction],
    plant: SecondOrderPlant,
    spec: HybridGainSpec,
    dist: Disturbance,
    cfg: SimConfig,
    e0: Sequence[float],
    sliding_cfg: SlidingConfig,
    controller: str = "ppf",
) -> Trajectory:
    """Simulate the second-order error dynamics under the PPF law or the baseline.

    For the baseline the envelope (if ``pf`` is given) is only monitored:
    violations are logged as events and integration continues.
    """
    if controller not in CONTROLLERS:
        raise ValueError(f"controller must be one of {CONTROLLERS}, got {controller!r}")
    e1_0, e2_0 = float(e0[0]), float(e0[1])
    c = sliding_cfg.c

    if controller == "ppf":
        if pf is None:
            raise ValueError("the PPF controller needs a PerformanceFunction")
        if not abs(e1_0) < rho(pf, 0.0) * (1.0 - FEASIBILITY_MARGIN):
            return aborted_trajectory(2, controller, spec.eps)
        extend = cfg.continue_on_violation

        def control(t, y):
            return second_order_ppf_control(pf, plant, spec, sliding_cfg, y[0], y[1], t, extend=extend)

        def sample(t, y):
            r = rho(pf, t)
            psi = y[0] / r
            xi = erf_inv(psi) if abs(psi) < 1.0 else math.nan
            return xi, y[1] + c * psi, r

        enforce = not extend
    else:
        def control(t, y):
            return second_order_baseline_control(plant, spec, sliding_cfg, y[0], y[1])

        def sample(t, y):
            r = rho(pf, t) if pf is not None else math.nan
            return math.nan, y[1] + c * y[0], r

        enforce = False

    def dynamics(y, f):
        return (y[1], plant.drift(y[0], y[1]) + f)

    return _simulate(
        order=2,
        controller=controller,
        y0=(e1_0, e2_0),
        cfg=cfg,
        dist=dist,
        control=control,
        dynamics=dynamics,
        sample=sample,
        envelope=(lambda t: rho(pf, t)) if pf is not None else None,
        enforce_envelope=enforce,
        tube_level=spec.eps,
    )


def measure_reaching_time(
    traj: Trajectory, which: str, level: float, dwell: float = 0.0
) -> Optional[float]:
    """Earliest sample time after which ``|signal| <= level`` holds for ``dwell`` seconds.

    ``which`` is ``"xi"`` or ``"s"``. A window running past the end of the
    record only needs to hold over the recorded part; ``dwell=math.inf``
    therefore means "stays inside until the end".
    """
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    if which == "xi":
        sig = traj.xi
    elif which == "s":
        sig = traj.s_var
    else:
        raise ValueError(f"which must be 'xi' or 's', got {which!r}")

    inside = np.abs(sig) <= level
    times = traj.times
    n = len(times)
    # index of the first outside sample at or after i (n if none)
    next_out = np.full(n + 1, n)
    for i in range(n - 1, -1, -1):
        next_out[i] = next_out[i + 1] if inside[i] else i
    for i in range(n):
        if not inside[i]:
            continue
        j = next_out[i]
        if j == n or times[j] > times[i] + dwell:
            return float(times[i])
    return None
