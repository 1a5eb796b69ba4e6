import csv
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import matches_printed, trunc_sig
from cutvol import cli
from cutvol import polytope as pt
from cutvol.errors import DegenerateFitError


def run_cli(*argv):
    return cli.main(list(argv))


def test_construct_met_ine(tmp_path, capsys):
    out = tmp_path / "met4.ine"
    assert run_cli("construct", "--body", "met", "--graph", "K4",
                   "--format", "ine", "--out", str(out)) == 0
    h = pt.read_ine(str(out))
    assert h.dim == 6 and len(h.rows) == 16


def test_construct_cut_ext(tmp_path):
    out = tmp_path / "c5.ext"
    assert run_cli("construct", "--body", "cut", "--graph", "C5",
                   "--format", "ext", "--out", str(out)) == 0
    v = pt.read_ext(str(out))
    assert len(v.vertices) == 16


def test_construct_unsupported_k5(tmp_path, capsys):
    out = tmp_path / "k5.ine"
    code = run_cli("construct", "--body", "cut", "--graph", "K5",
                   "--format", "ine", "--out", str(out))
    assert code == 3
    assert "error:" in capsys.readouterr().err


def test_construct_from_graph_file(tmp_path):
    gfile = tmp_path / "g.txt"
    gfile.write_text("4 4\n1 2\n2 3\n3 4\n1 4\n")
    out = tmp_path / "c4.ine"
    assert run_cli("construct", "--body", "cut", "--graph", str(gfile),
                   "--format", "ine", "--out", str(out)) == 0
    assert len(pt.read_ine(str(out)).rows) == 16


def test_volume_exact_met_k4(capsys):
    assert run_cli("volume", "--method", "exact", "--body", "met",
                   "--graph", "K4") == 0
    assert capsys.readouterr().out.strip() == "2/45"


def test_volume_formula_c6(capsys):
    assert run_cli("volume", "--method", "formula", "--graph", "C6") == 0
    assert capsys.readouterr().out.strip() == "43/45"


def test_volume_elliptope(capsys):
    assert run_cli("volume", "--method", "elliptope", "--n", "7") == 0
    assert capsys.readouterr().out.startswith("1.33e-05")


def test_volume_asymptotic(capsys):
    assert run_cli("volume", "--method", "asymptotic", "--n", "10") == 0
    assert "asymptotic" in capsys.readouterr().out


def test_volume_estimate_stats_line(capsys):
    assert run_cli("volume", "--method", "estimate", "--body", "met",
                   "--graph", "K3", "--seed", "5", "--runs", "5") == 0
    out = capsys.readouterr().out
    assert "mean=" in out and "median=" in out


def test_estimate_reproducible(capsys):
    args = ("estimate", "--body", "met", "--graph", "K3", "--seed", "9",
            "--runs", "4")
    assert run_cli(*args) == 0
    first = capsys.readouterr().out
    assert run_cli(*args) == 0
    assert capsys.readouterr().out == first


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["volume"])  # --method missing
    assert exc.value.code == 2


def test_missing_n_is_computation_error(capsys):
    assert run_cli("volume", "--method", "elliptope") == 3


def test_quadratic_fit_exact_parabola():
    fit = cli.quadratic_fit([(n, float(n * n)) for n in range(1, 8)])
    assert fit.a2 == pytest.approx(1.0, abs=1e-9)
    assert fit.a1 == pytest.approx(0.0, abs=1e-9)
    assert fit.a0 == pytest.approx(0.0, abs=1e-8)
    assert fit.residual_rms == pytest.approx(0.0, abs=1e-9)


def test_quadratic_fit_degenerate():
    with pytest.raises(DegenerateFitError):
        cli.quadratic_fit([(1.0, 2.0), (1.0, 3.0), (2.0, 4.0)])


def test_met_parabola_coefficients():
    fit = cli.fit_met_parabola()
    assert abs(fit.a2 - (-0.50)) <= 0.05
    assert abs(fit.a1 - 1.62) <= 0.05
    assert abs(fit.a0 - (-1.66)) <= 0.05


def test_crossover(capsys):
    assert cli.crossover_report() == 13
    assert run_cli("crossover") == 0
    assert capsys.readouterr().out.strip() == "13"


def test_crossover_neighbor_ratios():
    t4 = cli.load_table("table4")
    import cutvol.elliptope as el

    r12 = math.exp(el.i_log_volume(12).log_value) / float(t4.row(12)["mean"])
    r13 = math.exp(el.i_log_volume(13).log_value) / float(t4.row(13)["mean"])
    r25 = math.exp(el.i_log_volume(25).log_value) / float(t4.row(25)["mean"])
    # printed ratios divide the truncated table values, so allow that slack
    assert r12 > 1 and r12 == pytest.approx(4.32, abs=0.02)
    assert r13 < 1 and r13 == pytest.approx(0.76, abs=0.01)
    assert r25 == pytest.approx(5.01e-32, rel=5e-3)


def test_bundled_tables_well_formed():
    t1 = cli.load_table("table1")
    assert [r["n"] for r in t1.rows] == list(range(2, 8))
    t3 = cli.load_table("table3")
    assert [r["n"] for r in t3.rows] == list(range(3, 8))
    t4 = cli.load_table("table4")
    assert [r["n"] for r in t4.rows] == list(range(8, 26))
    assert Fraction(t1.row(4)["cut_vol"]) == Fraction(2, 45)


def test_report_table1(tmp_path, capsys):
    out = tmp_path / "t1.csv"
    assert run_cli("report", "--table", "1", "--out", str(out)) == 0
    with open(out) as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 6
    r4 = next(r for r in rows if r["n"] == "4")
    assert r4["cut_vol"] == "2/45" and r4["cut_vol_src"] == "computed"
    assert r4["met_vol"] == "2/45"
    assert r4["rmet_vol"] == "1/15" and r4["rmet_vol_src"] == "computed"
    assert float(r4["i_vol"]) == pytest.approx(0.183, abs=5e-4)
    r7 = next(r for r in rows if r["n"] == "7")
    assert r7["met_vol_src"] == "paper"
    human = capsys.readouterr().out
    assert "rmet_vol" in human


def test_report_computed_cells_match_bundled(tmp_path):
    run_cli("report", "--table", "1", "--out", str(tmp_path / "t1.csv"))
    with open(tmp_path / "t1.csv") as f:
        rows = list(csv.DictReader(f))
    t1 = cli.load_table("table1")
    for row in rows:
        n = int(row["n"])
        printed = t1.row(n)
        for col in ("i_vol", "ratio_i_cut", "ratio_met_cut", "ratio_rmet_cut"):
            if row[f"{col}_src"] == "computed" and n >= 3:
                assert matches_printed(float(Fraction(row[col])), printed[col]), (
                    n, col, row[col], printed[col],
                )
        for col in ("cut_vol", "met_vol", "rmet_vol"):
            if row[f"{col}_src"] == "computed" and n >= 3:
                assert Fraction(row[col]) == Fraction(printed[col])


def test_report_table4_i_column_truncates_to_printed(tmp_path):
    run_cli("report", "--table", "4", "--out", str(tmp_path / "t4.csv"))
    with open(tmp_path / "t4.csv") as f:
        rows = list(csv.DictReader(f))
    t4 = cli.load_table("table4")
    assert len(rows) == 18
    for row in rows:
        printed = t4.row(int(row["n"]))["i_vol"]
        assert row["i_vol_src"] == "computed"
        assert trunc_sig(float(row["i_vol"])) == f"{float(printed):.2e}"


def test_report_table2_and_3_and_figure5(tmp_path):
    for table, name in (("2", "t2.csv"), ("3", "t3.csv"), ("figure5", "f5.csv")):
        out = tmp_path / name
        assert run_cli("report", "--table", table, "--out", str(out)) == 0
        assert out.exists()
    with open(tmp_path / "f5.csv") as f:
        rows = list(csv.DictReader(f))
    series = {r["series"] for r in rows}
    assert series == {"rmet", "met", "i"}
    assert len(rows) == 3 * 23  # n = 3..25


def test_report_table3_ratio_column(tmp_path):
    run_cli("report", "--table", "3", "--out", str(tmp_path / "t3.csv"))
    with open(tmp_path / "t3.csv") as f:
        rows = list(csv.DictReader(f))
    r6 = next(r for r in rows if r["n"] == "6")
    assert float(r6["ratio_i_met_est"]) == pytest.approx(19.5, abs=0.55)


def test_report_byte_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_cli("report", "--table", "figure5", "--out", str(a))
    run_cli("report", "--table", "figure5", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_fit_command_output(capsys):
    assert run_cli("fit") == 0
    out = capsys.readouterr().out
    assert out.startswith("a2=-0.49")


def test_cli_entry_point_subprocess():
    res = subprocess.run(
        [sys.executable, "-m", "cutvol.cli", "volume", "--method", "formula",
         "--graph", "C4"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0
    assert res.stdout.strip() == "2/3"
