import csv
import subprocess
import sys

import pytest

from ftsmc import ConfigError, dumps_scenario, load_scenario, loads_scenario
from ftsmc.cli import main

from .conftest import SCENARIOS


def scenario(name):
    return str(SCENARIOS / name)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.fixture
def write_ini(tmp_path):
    def _write(text, name="s.ini"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


FIRST_ORDER = """\
[plant]
x0 = 1.0
[ppf]
rho0 = 4.0
rho_inf = 0.05
lambda = 4.0
[gain]
k0 = 9.0
k1 = 1.9
gamma_out = 0.7
eps0 = 0.6
eps = 0.2
inner.variant = mixed_power
a = 0.2
b = 0.5
alpha = 1.5
[disturbance]
d_max = 0.25
[sim]
horizon = 0.5
"""


class TestSimulate:
    def test_reference_first_order(self, tmp_path, capsys):
        assert main(["simulate", scenario("first_order_x3_0.ini"), "--out", str(tmp_path)]) == 0
        rows = read_csv(tmp_path / "trajectory.csv")
        assert rows[0] == ["t", "x", "xi", "u", "d", "rho"]
        assert len(rows) == 10_002
        assert abs(float(rows[-1][1])) <= 0.05
        # at least 9 significant digits
        assert rows[1][3] == "-35.2579908892"
        metrics = (tmp_path / "metrics.txt").read_text()
        assert "J_viol = 0" in metrics and "event = tube_entry" in metrics

    @pytest.mark.parametrize("name", ["first_order_x4_5.ini", "first_order_x4_0.ini"])
    def test_infeasible_initial_condition(self, tmp_path, capsys, name):
        assert main(["simulate", scenario(name), "--out", str(tmp_path)]) == 3
        assert "|x(0)| < rho(0)" in capsys.readouterr().err

    def test_inflation_flag(self, tmp_path):
        assert main(["simulate", scenario("first_order_x4_5_inflated.ini"), "--out", str(tmp_path)]) == 0

    def test_equilibrium(self, tmp_path):
        assert main(["simulate", scenario("equilibrium.ini"), "--out", str(tmp_path)]) == 0
        rows = read_csv(tmp_path / "trajectory.csv")[1:]
        assert all(float(r[1]) == 0.0 and float(r[3]) == 0.0 for r in rows)

    def test_deterministic(self, tmp_path):
        for d in ("a", "b"):
            main(["simulate", scenario("second_order_baseline.ini"), "--out", str(tmp_path / d)])
        assert (tmp_path / "a" / "trajectory.csv").read_bytes() == (tmp_path / "b" / "trajectory.csv").read_bytes()

    def test_second_order_header(self, tmp_path):
        main(["simulate", scenario("second_order_baseline.ini"), "--out", str(tmp_path)])
        rows = read_csv(tmp_path / "trajectory.csv")
        assert rows[0] == ["t", "e1", "e2", "xi", "s", "u", "d", "rho"]
        assert rows[1][3] == "nan"

    def test_strict_ppf_violation_exit(self, tmp_path, capsys):
        assert main(["simulate", scenario("second_order_ppf.ini"), "--out", str(tmp_path)]) == 2
        assert "envelope_violation" in capsys.readouterr().err
        assert (tmp_path / "trajectory.csv").exists()

    def test_stride_override(self, tmp_path, monkeypatch, write_ini):
        monkeypatch.setenv("FTSMC_RECORD_STRIDE", "10")
        assert main(["simulate", write_ini(FIRST_ORDER), "--out", str(tmp_path)]) == 0
        assert len(read_csv(tmp_path / "trajectory.csv")) == 52

    def test_bad_stride_env(self, tmp_path, monkeypatch, write_ini, capsys):
        monkeypatch.setenv("FTSMC_RECORD_STRIDE", "zero")
        assert main(["simulate", write_ini(FIRST_ORDER), "--out", str(tmp_path)]) == 1

    def test_divergence_exit(self, tmp_path, write_ini, capsys):
        # explicit Euler with c*dt = 3 overflows
        text = (
            scenario_text("second_order_baseline.ini")
            .replace("c = 0.8", "c = 30.0")
            .replace("horizon = 10.0", "horizon = 200.0")
            .replace("dt = 0.001", "dt = 0.1")
            .replace("integrator = rk4", "integrator = euler")
        )
        assert main(["simulate", write_ini(text), "--out", str(tmp_path)]) == 4
        assert "numeric divergence" in capsys.readouterr().err


def scenario_text(name):
    return (SCENARIOS / name).read_text()


class TestParsing:
    def test_unknown_key(self, tmp_path, write_ini, capsys):
        path = write_ini(FIRST_ORDER.replace("k1 = 1.9", "k1 = 1.9\nkappa = 2"))
        assert main(["simulate", path, "--out", str(tmp_path)]) == 1
        err = capsys.readouterr().err
        assert "gain.kappa" in err and "line 10" in err

    def test_unknown_section(self, write_ini):
        with pytest.raises(ConfigError, match="observer"):
            load_scenario(write_ini(FIRST_ORDER + "[observer]\ngain = 1\n"))

    def test_invalid_value_names_key(self, write_ini):
        with pytest.raises(ConfigError, match=r"\[gain\.eps\]"):
            load_scenario(write_ini(FIRST_ORDER.replace("eps = 0.2", "eps = 0.9")))
        with pytest.raises(ConfigError, match="rho_inf"):
            load_scenario(write_ini(FIRST_ORDER.replace("rho_inf = 0.05", "rho_inf = abc")))
        with pytest.raises(ConfigError, match=r"\[ppf\.lambda\] \(line 6\)"):
            load_scenario(write_ini(FIRST_ORDER.replace("lambda = 4.0", "lambda = -1")))
        with pytest.raises(ConfigError, match=r"\[gain\.k1\]"):
            load_scenario(write_ini(FIRST_ORDER.replace("k1 = 1.9", "k1 = 0")))
        with pytest.raises(ConfigError, match=r"\[controller\.u_sat\]"):
            load_scenario(write_ini(FIRST_ORDER + "[controller]\nu_sat = -1\n"))

    def test_usage_errors(self, capsys):
        assert main([]) == 1
        assert main(["simulate"]) == 1
        assert main(["--version"]) == 0

    def test_missing_file(self, capsys):
        assert main(["feasibility", "/nonexistent/x.ini"]) == 1

    @pytest.mark.parametrize("path", sorted(SCENARIOS.glob("*.ini")), ids=lambda p: p.name)
    def test_shipped_scenarios_round_trip(self, path):
        scn = load_scenario(path)
        again = loads_scenario(dumps_scenario(scn))
        assert again == scn
        assert loads_scenario(dumps_scenario(again)) == scn


class TestCompare:
    def test_reference_pair(self, tmp_path, capsys):
        status = main([
            "compare", scenario("second_order_ppf_continued.ini"),
            scenario("second_order_baseline.ini"), "--out", str(tmp_path),
        ])
        assert status == 0
        rows = {r[0]: r[1:] for r in read_csv(tmp_path / "comparison.csv")}
        assert rows["Metric"] == ["non-PPF", "PPF-aware", "Gain(%)"]
        assert float(rows["J_viol"][0]) > 0
        out = capsys.readouterr().out
        assert "matched-peak" in out
        for name in ("J_u", "IAE", "ISE"):
            assert float(rows[name][2]) > 0

    def test_strict_pair_has_clean_ppf_column(self, tmp_path, capsys):
        status = main([
            "compare", scenario("second_order_ppf.ini"),
            scenario("second_order_baseline.ini"), "--out", str(tmp_path),
        ])
        assert status == 2
        rows = {r[0]: r[1:] for r in read_csv(tmp_path / "comparison.csv")}
        assert float(rows["J_viol"][1]) == 0.0
        assert rows["J_peak"][2] == "No violation"

    def test_identical(self, tmp_path, capsys):
        b = scenario("second_order_baseline.ini")
        assert main(["compare", b, b, "--out", str(tmp_path)]) == 0
        rows = read_csv(tmp_path / "comparison.csv")
        gains = {r[0]: r[3] for r in rows[1:]}
        assert gains["J_u"] == gains["IAE"] == gains["ISE"] == "0.0"

    def test_mismatch(self, tmp_path, capsys):
        assert main([
            "compare", scenario("second_order_ppf.ini"),
            scenario("first_order_x3_0.ini"), "--out", str(tmp_path),
        ]) == 1
        assert "mismatch" in capsys.readouterr().err


class TestFeasibility:
    def test_second_order_passes(self, capsys):
        assert main(["feasibility", scenario("second_order_ppf.ini")]) == 0
        out = capsys.readouterr().out
        assert "k0: 0.8" in out and "d_max: 0.25" in out

    def test_first_order_inner_failure(self, capsys):
        assert main(["feasibility", scenario("first_order_x3_0.ini")]) == 2
        out = capsys.readouterr().out
        assert "inner_ok: false" in out
        assert "G_in(eps): 0.109547623418" in out
        assert "d_bar_xi(eps): 4.61197266195" in out

    def test_zero_disturbance(self, capsys):
        assert main(["feasibility", scenario("equilibrium.ini")]) == 0
        assert "residual_radius: 0\n" in capsys.readouterr().out

    def test_infeasible_ic(self, capsys):
        assert main(["feasibility", scenario("first_order_x4_0.ini")]) == 3

    def test_bounds(self, capsys):
        assert main(["bounds", scenario("first_order_x3_0.ini")]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "T_A: 0.156638287683"
        assert out[1] == "T_B: 0.591109277211"
        assert [line.split(":")[0] for line in out] == ["T_A", "T_B", "T_out", "T_in"]

    def test_bounds_outer_infeasible(self, write_ini, capsys):
        path = write_ini(FIRST_ORDER.replace("k0 = 9.0", "k0 = 0.5").replace("x0 = 1.0", "x0 = 3.0"))
        assert main(["bounds", path]) == 2
        assert "outer_error" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "ftsmc", "bounds", scenario("second_order_ppf.ini")],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0
    assert res.stdout.startswith("T_A: 0.0296296296296")
