import csv
import json

import pytest

from outlierlab.cli import build_parser, main
from outlierlab.reporting import CSV_COLUMNS


def _read(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_fig1_desk_scale(tmp_path, capsys):
    code = main(["fig1", "--m", "300", "--out-dir", str(tmp_path), "--format", "csv+svg"])
    rows = _read(tmp_path / "fig1.csv")
    assert tuple(rows[0]) == CSV_COLUMNS
    body = rows[1:]
    series = [r[1] for r in body]
    assert series.count("stable_alpha_1.2") == 13 and series.count("gaussian") == 13
    assert series.count("crossover") == 1
    assert (tmp_path / "fig1.svg").read_text().lstrip().startswith("<?xml")
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["fig1.crossover_in_range"] == "pass"
    assert code == 0
    assert "fig1.crossover_in_range: PASS" in capsys.readouterr().out


def test_claims_paper_scale(tmp_path):
    assert main(["claims", "--paper-scale", "--out-dir", str(tmp_path), "--format", "csv"]) == 0
    rows = _read(tmp_path / "claims.csv")[1:]
    by = {r[1]: r for r in rows}
    for name in ("gaussian_k3_monte_carlo", "stable18_k3_n50000", "laplace_k3_analytic"):
        assert name in by
    assert by["laplace_k3_analytic"][2] == ""
    assert by["laplace_k3_analytic"][4] == "0.0143695961"
    assert not (tmp_path / "claims.svg").exists()


def test_fig3_grid_rows(tmp_path):
    main(["fig3", "--out-dir", str(tmp_path), "--format", "csv"])
    rows = _read(tmp_path / "fig3.csv")[1:]
    assert sum(r[1] == "limit_probability" for r in rows) == 400
    checks = {r[1]: r[2] for r in _read(tmp_path / "fig3_checks.csv")[1:]}
    assert checks["no_quadrature_failures"] == "true"


def test_csv_byte_identical_across_threads(tmp_path):
    outs = []
    for t in ("1", "4"):
        d = tmp_path / t
        main(["fig2", "--m", "50", "--seed", "5", "--threads", t, "--out-dir", str(d), "--format", "csv"])
        outs.append((d / "fig2.csv").read_bytes())
    assert outs[0] == outs[1]
    assert b"\r\n" not in outs[0]


@pytest.mark.parametrize("argv", [
    ["nope"], ["fig1", "--m", "x"], ["fig1", "--seed", "-1"], ["fig1", "--threads", "0"],
    ["fig1", "--format", "png"], ["fig1", "--m", "1"], ["fig3", "--grid-size", "1"],
])
def test_bad_arguments(argv, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(argv + ["--out-dir", str(tmp_path)])
    assert exc.value.code == 2


def test_out_dir_is_a_file(tmp_path, capsys):
    f = tmp_path / "file"
    f.write_text("x")
    assert main(["claims", "--m", "10", "--out-dir", str(f)]) == 2
    assert "output directory" in capsys.readouterr().err


def test_value_error_reported(tmp_path, capsys):
    assert main(["fig1", "--m", "10", "--out-dir", str(tmp_path)]) == 2
    assert "m >= 50" in capsys.readouterr().err


def test_parser_defaults():
    args = build_parser().parse_args(["all"])
    assert (args.m, args.seed, args.format, args.threads, args.grid_size) == (300, 42, "csv+svg", None, 20)
    assert build_parser().parse_args(["fig1", "--threads", "auto"]).threads is None
