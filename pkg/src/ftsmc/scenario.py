"""Scenario files: a flat INI document with one section per concern.

Example (second order)::

    [plant]
    omega_n = 2.0
    zeta = 0.15
    e1_0 = 2.0
    e2_0 = -0.3

    [ppf]
    rho0 = 2.5
    rho_inf = 0.35
    lambda = 1.4

    [gain]
    k0 = 0.8
    ...

A first-order scenario gives ``x0`` instead of ``e1_0``/``e2_0`` and omits
``omega_n``/``zeta``.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .control import SecondOrderPlant, SlidingConfig
from .exceptions import ConfigError
from .gain import GaussianGain, HybridGainSpec, MixedPowerGain
from .ppf import FEASIBILITY_MARGIN, PerformanceFunction
from .sim import (
    Disturbance,
    SimConfig,
    Trajectory,
    aborted_trajectory,
    inflate_envelope,
    run_first_order,
    run_second_order,
)

__all__ = ["Scenario", "load_scenario", "loads_scenario", "dumps_scenario", "run_scenario"]

SCHEMA: dict[str, tuple[str, ...]] = {
    "plant": ("omega_n", "zeta", "x0", "e1_0", "e2_0"),
    "ppf": ("rho0", "rho_inf", "lambda", "allow_envelope_inflation"),
    "gain": ("k0", "k1", "gamma_out", "eps0", "eps", "inner.variant",
             "a", "b", "gamma_in", "alpha", "Lambda"),
    "disturbance": ("d_max", "freq"),
    "sim": ("horizon", "dt", "integrator", "record_stride", "continue_on_violation"),
    "controller": ("controller", "c", "boundary_layer", "sign_mode", "u_sat"),
}

_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_RE = re.compile(r"^\s*([^\s=:#;][^=:]*?)\s*[=:]")
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class Scenario:
    order: int
    controller: str
    pf: Optional[PerformanceFunction]
    spec: HybridGainSpec
    dist: Disturbance
    sim: SimConfig
    sliding: SlidingConfig
    plant: Optional[SecondOrderPlant] = None
    x0: Optional[float] = None
    e0: Optional[tuple[float, float]] = None
    allow_envelope_inflation: bool = False

    @property
    def initial_error(self) -> float:
        return self.x0 if self.order == 1 else self.e0[0]


class _Reader:
    def __init__(self, text: str, source: str):
        self.source = source
        self.lines: dict[tuple[str, str], int] = {}
        section = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            m = _SECTION_RE.match(raw)
            if m:
                section = m.group(1).strip()
                continue
            m = _KEY_RE.match(raw)
            if m and section is not None:
                self.lines.setdefault((section, m.group(1)), lineno)

        self.cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        self.cp.optionxform = str
        try:
            self.cp.read_string(text, source=source)
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            raise ConfigError(f"{source}: {exc.message if hasattr(exc, 'message') else exc}",
                              key="syntax", line=line) from exc

        for section in self.cp.sections():
            if section not in SCHEMA:
                raise ConfigError(f"unknown section in {source}", key=section,
                                  line=self._section_line(text, section))
            for key in self.cp[section]:
                if key not in SCHEMA[section]:
                    raise ConfigError(f"unknown key in {source}", key=f"{section}.{key}",
                                      line=self.lines.get((section, key)))

    @staticmethod
    def _section_line(text: str, section: str) -> Optional[int]:
        for lineno, raw in enumerate(text.splitlines(), start=1):
            m = _SECTION_RE.match(raw)
            if m and m.group(1).strip() == section:
                return lineno
        return None

    def has(self, section: str, key: str) -> bool:
        return self.cp.has_option(section, key)

    def _raw(self, section: str, key: str, default):
        if not self.has(section, key):
            if default is _REQUIRED:
                raise ConfigError(f"missing required key in {self.source}", key=f"{section}.{key}")
            return None, default
        return self.cp.get(section, key).strip(), None

    def _fail(self, section, key, msg):
        return ConfigError(msg, key=f"{section}.{key}", line=self.lines.get((section, key)))

    def float(self, section, key, default=None):
        raw, dflt = self._raw(section, key, default)
        if raw is None:
            return dflt
        try:
            return float(raw)
        except ValueError:
            raise self._fail(section, key, f"expected a number, got {raw!r}") from None

    def int(self, section, key, default=None):
        raw, dflt = self._raw(section, key, default)
        if raw is None:
            return dflt
        try:
            return int(raw)
        except ValueError:
            raise self._fail(section, key, f"expected an integer, got {raw!r}") from None

    def bool(self, section, key, default=None):
        raw, dflt = self._raw(section, key, default)
        if raw is None:
            return dflt
        low = raw.lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise self._fail(section, key, f"expected true/false, got {raw!r}")

    def str(self, section, key, choices, default=None):
        raw, dflt = self._raw(section, key, default)
        if raw is None:
            return dflt
        if raw not in choices:
            raise self._fail(section, key, f"expected one of {choices}, got {raw!r}")
        return raw

    def build(self, section: str, key: str, factory, keys=None, **kwargs):
        """Construct ``factory(**kwargs)``, blaming the key the error message names.

        ``keys`` maps argument names to file keys (or ``(section, key)``
        pairs) where they differ; ``key`` is the fallback when no argument
        name appears in the message.
        """
        try:
            return factory(**kwargs)
        except ValueError as exc:
            msg = str(exc)
            hits = []
            for name in kwargs:
                target = (keys or {}).get(name, name)
                alias = target if isinstance(target, str) else target[1]
                for word in {name, alias}:
                    m = re.search(rf"(?<![\w.]){re.escape(word)}(?![\w.])", msg)
                    if m:
                        hits.append((m.start(), target))
            if hits:
                target = min(hits, key=lambda h: h[0])[1]
                section, key = target if isinstance(target, tuple) else (section, target)
            raise self._fail(section, key, msg) from None


_REQUIRED = object()


def loads_scenario(text: str, source: str = "<string>") -> Scenario:
    rd = _Reader(text, source)
    R = _REQUIRED

    has_x0 = rd.has("plant", "x0")
    has_e = rd.has("plant", "e1_0") or rd.has("plant", "e2_0")
    if has_x0 == has_e:
        raise ConfigError(
            "give either x0 (first order) or e1_0 and e2_0 (second order)", key="plant"
        )
    order = 1 if has_x0 else 2

    controller = rd.str("controller", "controller", ("ppf", "baseline"), "ppf")
    if order == 1 and controller != "ppf":
        raise rd._fail("controller", "controller", "first-order scenarios only support 'ppf'")

    pf = None
    if controller == "ppf" or rd.cp.has_section("ppf"):
        pf = rd.build(
            "ppf", "rho0", PerformanceFunction, {"lam": "lambda"},
            rho0=rd.float("ppf", "rho0", R),
            rho_inf=rd.float("ppf", "rho_inf", R),
            lam=rd.float("ppf", "lambda", R),
        )
    inflation = rd.bool("ppf", "allow_envelope_inflation", False)

    variant = rd.str("gain", "inner.variant", ("mixed_power", "gaussian"), R)
    gamma_out = rd.float("gain", "gamma_out", R)
    if variant == "gaussian":
        inner = rd.build("gain", "Lambda", GaussianGain, Lambda=rd.float("gain", "Lambda", R))
    else:
        inner = rd.build(
            "gain", "inner.variant", MixedPowerGain, {"gamma": "gamma_in"},
            a=rd.float("gain", "a", R),
            b=rd.float("gain", "b", R),
            gamma=rd.float("gain", "gamma_in", gamma_out),
            alpha=rd.float("gain", "alpha", R),
        )
    spec = rd.build(
        "gain", "k0", HybridGainSpec,
        k0=rd.float("gain", "k0", R),
        k1=rd.float("gain", "k1", R),
        gamma_out=gamma_out,
        eps0=rd.float("gain", "eps0", R),
        eps=rd.float("gain", "eps", R),
        inner=inner,
    )

    dist = rd.build(
        "disturbance", "d_max", Disturbance,
        d_max=rd.float("disturbance", "d_max", R),
        freq=rd.float("disturbance", "freq", 10.0),
    )
    sim = rd.build(
        "sim", "dt", SimConfig, {"u_sat": ("controller", "u_sat")},
        horizon=rd.float("sim", "horizon", 10.0),
        dt=rd.float("sim", "dt", 1e-3),
        integrator=rd.str("sim", "integrator", ("rk4", "euler"), "rk4"),
        record_stride=rd.int("sim", "record_stride", 1),
        continue_on_violation=rd.bool("sim", "continue_on_violation", False),
        u_sat=rd.float("controller", "u_sat", None),
    )
    sliding = rd.build(
        "controller", "c", SlidingConfig,
        c=rd.float("controller", "c", R if order == 2 else 1.0),
        boundary_layer=rd.float("controller", "boundary_layer", 1e-2),
        sign_mode=rd.str("controller", "sign_mode", ("hard", "smoothed"), "hard"),
    )

    if order == 1:
        return Scenario(
            order=1, controller=controller, pf=pf, spec=spec, dist=dist, sim=sim,
            sliding=sliding, x0=rd.float("plant", "x0", R),
            allow_envelope_inflation=inflation,
        )
    plant = rd.build(
        "plant", "omega_n", SecondOrderPlant,
        omega_n=rd.float("plant", "omega_n", R),
        zeta=rd.float("plant", "zeta", R),
    )
    e0 = (rd.float("plant", "e1_0", R), rd.float("plant", "e2_0", R))
    return Scenario(
        order=2, controller=controller, pf=pf, spec=spec, dist=dist, sim=sim,
        sliding=sliding, plant=plant, e0=e0, allow_envelope_inflation=inflation,
    )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc.strerror}") from None
    return loads_scenario(text, source=str(path))


def dumps_scenario(scn: Scenario) -> str:
    """Serialise a scenario so that ``loads_scenario(dumps_scenario(s)) == s``."""
    sections: dict[str, dict[str, str]] = {name: {} for name in SCHEMA}
    plant = sections["plant"]
    if scn.order == 1:
        plant["x0"] = repr(scn.x0)
    else:
        plant["omega_n"] = repr(scn.plant.omega_n)
        plant["zeta"] = repr(scn.plant.zeta)
        plant["e1_0"] = repr(scn.e0[0])
        plant["e2_0"] = repr(scn.e0[1])
    if scn.pf is not None:
        sections["ppf"].update(
            rho0=repr(scn.pf.rho0), rho_inf=repr(scn.pf.rho_inf), **{"lambda": repr(scn.pf.lam)}
        )
        sections["ppf"]["allow_envelope_inflation"] = str(scn.allow_envelope_inflation).lower()

    g, inner = sections["gain"], scn.spec.inner
    g.update(k0=repr(scn.spec.k0), k1=repr(scn.spec.k1), gamma_out=repr(scn.spec.gamma_out),
             eps0=repr(scn.spec.eps0), eps=repr(scn.spec.eps))
    g["inner.variant"] = inner.variant
    if isinstance(inner, GaussianGain):
        g["Lambda"] = repr(inner.Lambda)
    else:
        g.update(a=repr(inner.a), b=repr(inner.b), gamma_in=repr(inner.gamma),
                 alpha=repr(inner.alpha))

    sections["disturbance"].update(d_max=repr(scn.dist.d_max), freq=repr(scn.dist.freq))
    sections["sim"].update(
        horizon=repr(scn.sim.horizon), dt=repr(scn.sim.dt), integrator=scn.sim.integrator,
        record_stride=str(scn.sim.record_stride),
        continue_on_violation=str(scn.sim.continue_on_violation).lower(),
    )
    ctl = sections["controller"]
    ctl.update(controller=scn.controller, c=repr(scn.sliding.c),
               boundary_layer=repr(scn.sliding.boundary_layer), sign_mode=scn.sliding.sign_mode)
    if scn.sim.u_sat is not None:
        ctl["u_sat"] = repr(scn.sim.u_sat)

    out = []
    for name, items in sections.items():
        if not items:
            continue
        out.append(f"[{name}]")
        out.extend(f"{k} = {v}" for k, v in items.items())
        out.append("")
    return "\n".join(out)


def resolve_envelope(scn: Scenario) -> Optional[PerformanceFunction]:
    """Envelope to simulate with, or ``None`` if the initial error is infeasible.

    Baseline scenarios only monitor the envelope, so they are never refused.
    """
    pf = scn.pf
    if pf is None or scn.controller == "baseline":
        return pf
    if abs(scn.initial_error) < pf.rho0 * (1.0 - FEASIBILITY_MARGIN):
        return pf
    if scn.allow_envelope_inflation:
        return inflate_envelope(pf, scn.initial_error)
    return None


def run_scenario(scn: Scenario, record_stride: Optional[int] = None) -> tuple[Trajectory, Optional[PerformanceFunction]]:
    """Simulate a scenario; returns the trajectory and the envelope actually used."""
    sim = scn.sim if record_stride is None else replace(scn.sim, record_stride=record_stride)
    pf = resolve_envelope(scn)
    if pf is None:
        return aborted_trajectory(scn.order, scn.controller, scn.spec.eps), scn.pf
    if scn.order == 1:
        traj = run_first_order(pf, scn.spec, scn.dist, sim, scn.x0, scn.sliding)
    else:
        traj = run_second_order(pf, scn.plant, scn.spec, scn.dist, sim, scn.e0, scn.sliding, scn.controller)
    return traj, pf
