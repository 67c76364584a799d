from pathlib import Path

import pytest

from ftsmc import (
    Disturbance,
    GaussianGain,
    HybridGainSpec,
    MixedPowerGain,
    PerformanceFunction,
    SecondOrderPlant,
    SlidingConfig,
)

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"


@pytest.fixture(scope="session")
def scenarios_dir():
    return SCENARIOS


# first-order study
@pytest.fixture(scope="session")
def pf1():
    return PerformanceFunction(4.0, 0.05, 4.0)


@pytest.fixture(scope="session")
def spec1():
    return HybridGainSpec(
        k0=9.0, k1=1.9, gamma_out=0.7, eps0=0.6, eps=0.2,
        inner=MixedPowerGain(0.2, 0.5, 0.7, 1.5),
    )


# second-order study
@pytest.fixture(scope="session")
def pf2():
    return PerformanceFunction(2.5, 0.35, 1.4)


@pytest.fixture(scope="session")
def plant():
    return SecondOrderPlant(omega_n=2.0, zeta=0.15)


@pytest.fixture(scope="session")
def spec2():
    return HybridGainSpec(
        k0=0.8, k1=1.6, gamma_out=0.7, eps0=0.3, eps=0.01, inner=GaussianGain(0.9),
    )


@pytest.fixture(scope="session")
def sliding():
    return SlidingConfig(c=0.8, boundary_layer=1e-2, sign_mode="smoothed")


@pytest.fixture(scope="session")
def dist():
    return Disturbance(0.25, 10.0)


def pytest_terminal_summary(terminalreporter):
    from .acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
