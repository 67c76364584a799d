"""Integral performance metrics and side-by-side comparison."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .ppf import PerformanceFunction
from .sim import Trajectory, measure_reaching_time

__all__ = ["MetricsReport", "Comparison", "compute_metrics", "compare", "GAIN_METRICS"]

GAIN_METRICS = ("J_u", "IAE", "ISE")


@dataclass(frozen=True)
class MetricsReport:
    J_u: float
    J_peak: float
    J_viol: float
    IAE: float
    ISE: float
    u_max: float
    reaching_time: Optional[float]
    halted: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def _trapezoid(y: np.ndarray, t: np.ndarray) -> float:
    if len(t) < 2:
        return 0.0
    return float(np.trapezoid(y, t))


def compute_metrics(traj: Trajectory, pf: Optional[PerformanceFunction]) -> MetricsReport:
    """Metrics over the recorded samples, integrals by composite trapezoid.

    ``halted`` flags a run stopped before the horizon; its metrics cover the
    completed prefix only. Without an envelope ``J_peak`` and ``J_viol`` are NaN.
    """
    if len(traj) == 0:
        raise ValueError("cannot compute metrics of an empty trajectory")
    t = traj.times
    e1 = np.abs(traj.e1)
    if pf is not None:
        r = (pf.rho0 - pf.rho_inf) * np.exp(-pf.lam * t) + pf.rho_inf
        j_peak = float(np.max(e1 / r))
        j_viol = _trapezoid(np.maximum(0.0, e1 - r), t)
    else:
        j_peak = j_viol = math.nan
    reach = measure_reaching_time(
        traj, "xi" if traj.order == 1 else "s", traj.tube_level, dwell=math.inf
    )
    return MetricsReport(
        J_u=_trapezoid(traj.u**2, t),
        J_peak=j_peak,
        J_viol=j_viol,
        IAE=_trapezoid(e1, t),
        ISE=_trapezoid(e1**2, t),
        u_max=float(np.max(np.abs(traj.u))),
        reaching_time=reach,
        halted=not traj.completed,
    )


@dataclass(frozen=True)
class Comparison:
    """PPF-vs-baseline comparison; a gain of ``None`` means undefined (zero baseline)."""

    ppf: MetricsReport
    baseline: MetricsReport
    gains: dict
    verdict: str

    def rows(self) -> list[tuple[str, float, float, str]]:
        """Table rows ``(metric, baseline, ppf, gain text)``."""
        out = []
        for name in ("J_u", "J_peak", "J_viol", "IAE", "ISE"):
            if name in self.gains:
                g = self.gains[name]
                gain = "undefined" if g is None else f"{g:.1f}"
            elif name == "J_peak":
                gain = self.verdict
            else:
                gain = "--"
            out.append((name, getattr(self.baseline, name), getattr(self.ppf, name), gain))
        return out


def _gain(baseline: float, ppf: float) -> Optional[float]:
    if baseline == 0:
        return 0.0 if ppf == 0 else None
    return 100.0 * (baseline - ppf) / baseline


def compare(ppf_report: MetricsReport, baseline_report: MetricsReport) -> Comparison:
    gains = {
        name: _gain(getattr(baseline_report, name), getattr(ppf_report, name))
        for name in GAIN_METRICS
    }
    verdict = "No violation" if ppf_report.J_viol == 0 else "Violation"
    return Comparison(ppf=ppf_report, baseline=baseline_report, gains=gains, verdict=verdict)
