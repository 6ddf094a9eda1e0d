# CLI surface tests: argument handling, CSV conventions, figures, and the
# validation run. Most cases drive main() in-process; one subprocess test
# covers the module entry point.

import subprocess
import sys

import pytest

from wplink import multi_pb, single_pb
from wplink.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def rows(out):
    lines = out.strip().split("\n")
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


# ----------------------------------------------------------------
# pes


def test_pes_exact_half(capsys):
    code, out, _ = run_cli(capsys, "pes", "-m", "2", "-n", "2", "-a", "1.0")
    assert code == 0
    header, body = rows(out)
    assert header == ["m", "n", "a", "pes"]
    assert body == [["2", "2", "1", "0.5"]]


def test_pes_matches_library(capsys):
    _, out, _ = run_cli(capsys, "pes", "-m", "100", "-n", "50", "-a", "0.1")
    _, body = rows(out)
    assert float(body[0][3]) == pytest.approx(
        single_pb.energy_supply_prob(100, 50, 0.1), rel=1e-12
    )


def test_pes_infers_ratio_from_powers(capsys):
    _, out, _ = run_cli(capsys, "pes", "-m", "100", "-n", "50", "--pt", "0.3", "--pe", "3.0")
    _, body = rows(out)
    assert float(body[0][2]) == pytest.approx(0.1, rel=1e-12)


def test_pes_multi_mode(capsys):
    code, out, _ = run_cli(
        capsys, "pes", "--mode", "multi", "-m", "1500", "-n", "1000",
        "--pt", "1", "--lambda", "1e-3", "--ppb", "1e3",
    )
    assert code == 0
    header, body = rows(out)
    assert header == ["m", "n", "pt", "pes"]
    net = multi_pb.NetworkParams(density=1e-3, p_pb=1e3)
    assert float(body[0][3]) == pytest.approx(
        multi_pb.energy_supply_prob_mp(1500, 1000, 1.0, net), rel=1e-11
    )


def test_pes_monte_carlo_columns(capsys):
    code, out, _ = run_cli(
        capsys, "pes", "-m", "100", "-n", "50", "-a", "0.1", "--mc-trials", "2000"
    )
    assert code == 0
    header, body = rows(out)
    assert header[-2:] == ["pes_mc", "pes_mc_stderr"]
    exact = float(body[0][3])
    mc, se = float(body[0][4]), float(body[0][5])
    assert abs(mc - exact) < 5.0 * se


def test_sweep_grid(capsys):
    code, out, _ = run_cli(
        capsys, "pes", "-m", "100", "-n", "50", "--sweep", "a:0.01:1:21"
    )
    assert code == 0
    header, body = rows(out)
    assert header == ["a", "pes"]
    assert len(body) == 21
    assert float(body[0][0]) == 0.01 and float(body[-1][0]) == 1.0
    values = [float(r[1]) for r in body]
    assert values == sorted(values, reverse=True)


def test_sweep_log_spacing(capsys):
    _, out, _ = run_cli(
        capsys, "pes", "-m", "100", "-n", "50", "--sweep", "a:0.01:1:3:log"
    )
    _, body = rows(out)
    assert [float(r[0]) for r in body] == pytest.approx([0.01, 0.1, 1.0], rel=1e-9)


# ----------------------------------------------------------------
# rate and optpower


def test_rate_row_matches_library(capsys):
    code, out, _ = run_cli(
        capsys, "rate", "-m", "99", "-n", "2026", "-a", "0.0012",
        "--pe", "100", "--eps", "0.05",
    )
    assert code == 0
    header, body = rows(out)
    assert header == ["m", "n", "a", "rate_bits", "rate_bits_asymptotic", "feasible"]
    plan = single_pb.BlocklengthPlan(m=99, n=2026, epsilon=0.05)
    link = single_pb.LinkParams(p_t=0.12, p_e=100.0)
    expected = single_pb.achievable_rate_fbl(plan, link)
    assert float(body[0][3]) == pytest.approx(expected.rate_bits, rel=1e-11)
    assert body[0][5] == "true"


def test_rate_infeasible_row_has_empty_rate(capsys):
    _, out, _ = run_cli(
        capsys, "rate", "-m", "10", "-n", "2026", "-a", "0.0012",
        "--pe", "100", "--eps", "0.05",
    )
    _, body = rows(out)
    assert body[0][5] == "false"
    assert body[0][3] == ""


def test_optpower_reference_point(capsys):
    code, out, _ = run_cli(capsys, "optpower", "--eps", "1e-3", "--pe", "1000")
    assert code == 0
    header, body = rows(out)
    assert header == [
        "pt_asym", "pt_fbl", "a_asym", "a_fbl",
        "rate_bits_at_pt_asym", "rate_bits_at_pt_fbl",
    ]
    assert float(body[0][0]) == pytest.approx(1.1554, abs=1e-3)
    assert float(body[0][5]) >= float(body[0][4])


# ----------------------------------------------------------------
# plan


def test_plan_minimum_latency_row(capsys):
    code, out, _ = run_cli(capsys, "plan", "--eps", "0.05", "-a", "0.0012")
    assert code == 0
    header, body = rows(out)
    assert header == ["n_min", "m_min", "overhead", "total"]
    assert body == [["2026", "99", "1.048", "2125"]]


def test_plan_zero_ratio(capsys):
    _, out, _ = run_cli(capsys, "plan", "--eps", "0.05", "-a", "0")
    _, body = rows(out)
    assert body == [["2026", "0", "1", "2026"]]


# ----------------------------------------------------------------
# figure


def test_figure_fig6_outputs(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys, "figure", "fig6", "--out", str(tmp_path), "--svg"
    )
    assert code == 0
    csv_path = tmp_path / "fig6.csv"
    svg_path = tmp_path / "fig6.svg"
    assert csv_path.exists() and svg_path.exists()
    lines = csv_path.read_text().split("\n")
    header = lines[0].split(",")
    assert header == ["k", "mean_harvested", "pes_density_scaled", "pes_power_scaled"]
    body = [line.split(",") for line in lines[1:] if line]
    assert len(body) == 19  # k = 1, 1.5, ..., 10
    for row in body:
        assert float(row[2]) >= float(row[3]) - 1e-12
    assert svg_path.read_text().lstrip().startswith("<svg")


def test_figure_requires_known_name(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["figure", "fig99"])
    assert exc.value.code == 2


# ----------------------------------------------------------------
# validate


def test_validate_passes(capsys):
    code, out, _ = run_cli(capsys, "validate", "--mc-trials", "5000")
    assert code == 0
    assert "7/7 checks passed" in out
    assert "FAIL" not in out


# ----------------------------------------------------------------
# config file and precedence


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "link.cfg"
    cfg.write_text("m = 2\nn = 2\na = 1.0\n")
    _, out, _ = run_cli(capsys, "pes", "--config", str(cfg))
    _, body = rows(out)
    assert body == [["2", "2", "1", "0.5"]]


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "link.cfg"
    cfg.write_text("m = 2\nn = 2\na = 1.0\n")
    _, out, _ = run_cli(capsys, "pes", "--config", str(cfg), "-a", "0")
    _, body = rows(out)
    assert body == [["2", "2", "0", "1"]]


def test_out_writes_csv_file(tmp_path, capsys):
    target = tmp_path / "pes.csv"
    code, out, _ = run_cli(
        capsys, "pes", "-m", "2", "-n", "2", "-a", "1.0", "--out", str(target)
    )
    assert code == 0
    assert out == ""
    assert target.read_text() == "m,n,a,pes\n2,2,1,0.5\n"


# ----------------------------------------------------------------
# exit statuses and determinism


def test_missing_required_inputs_exit_3(capsys):
    code, _, err = run_cli(capsys, "pes", "-n", "4", "-a", "0.1")
    assert code == 3
    assert err.startswith("error:")


def test_domain_error_exit_3(capsys):
    code, _, err = run_cli(capsys, "pes", "-m", "10", "-n", "3", "-a", "0.1")
    assert code == 3
    assert "error:" in err


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["pes", "--no-such-flag"])
    assert exc.value.code == 2


def test_inconsistent_powers_rejected(capsys):
    code, _, err = run_cli(
        capsys, "pes", "-m", "2", "-n", "2", "-a", "1.0", "--pt", "3", "--pe", "1"
    )
    assert code == 3


def test_monte_carlo_output_is_deterministic(capsys):
    argv = ["pes", "-m", "50", "-n", "20", "-a", "0.2", "--mc-trials", "4000"]
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wplink.cli", "pes", "-m", "2", "-n", "2", "-a", "1.0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "m,n,a,pes\n2,2,1,0.5\n"
