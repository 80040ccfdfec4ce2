import csv
import json
import math

import numpy as np
import pytest

from fourier_lowpass import __version__
from fourier_lowpass.cli import main, parse_orders
from fourier_lowpass.fourier_core import FourierSeries
from fourier_lowpass.io import (ParseError, fmt, read_samples_csv, read_series_csv,
                                write_series_csv)


def _read(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_parse_orders():
    assert parse_orders("1..8") == list(range(1, 9))
    assert parse_orders("2,5") == [2, 5]
    assert parse_orders("3") == [3]


def test_fmt_seventeen_digits():
    assert fmt(0.1) == "0.10000000000000001"
    assert float(fmt(math.pi)) == math.pi
    assert fmt(3) == "3"


def test_series_csv_roundtrip(tmp_path):
    s = FourierSeries(0.25, [1 / 3, 0.0], [0.0, -2 / 7])
    write_series_csv(tmp_path / "s.csv", s)
    assert read_series_csv(tmp_path / "s.csv") == s


def test_series_csv_without_header_and_sparse_rows(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("3,1.0,0\n0,2,0\n")
    s = read_series_csv(p)
    assert s.k_max == 3 and s.half_mean == 2.0 and s.cos_coeffs[2] == 1.0


@pytest.mark.parametrize("text,where", [
    ("k,alpha,beta\n1,1\n", ":2:"),
    ("k,alpha,beta\n1,x,0\n", ":2:"),
    ("k,alpha,beta\n1.5,1,0\n", ":2:"),
    ("k,alpha,beta\n1,1,0\n1,2,0\n", ":3:"),
    ("", "empty"),
])
def test_series_csv_errors(tmp_path, text, where):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(ParseError, match=where):
        read_series_csv(p)


def test_samples_csv_requires_uniform_grid(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("x,f\n0,1\n0.1,2\n0.3,3\n")
    with pytest.raises(ParseError):
        read_samples_csv(p)


def test_kernels_command(tmp_path):
    out = tmp_path / "k"
    assert main(["kernels", "--epsilon", "0.5", "--orders", "1..8", "--output", str(out)]) == 0
    for n in range(1, 9):
        assert (out / f"kernel_N{n}.csv").exists()
    report = json.loads((out / "kernels_report.json").read_text())
    assert report["version"] == __version__
    assert report["orders"]["2"]["max_discrepancy_away_from_breakpoints"] <= 1e-3
    rows = _read(out / "kernel_N1.csv")
    assert len(rows) == 1001 and list(rows[0]) == ["u", "value", "fourier"]
    assert {"u": "0", "value": "1"}.items() <= next(r for r in rows if float(r["u"]) == 0).items()


def test_kernels_self_check_passes(tmp_path):
    assert main(["kernels", "--orders", "1..8", "--self-check", "--output", str(tmp_path)]) == 0


def test_kernels_self_check_fails_loudly(tmp_path, capsys):
    code = main(["kernels", "--orders", "2", "--kmax", "8", "--self-check", "--output", str(tmp_path)])
    assert code == 3
    assert "self-check failed" in capsys.readouterr().err


def test_kernels_rejects_large_epsilon(tmp_path, capsys):
    assert main(["kernels", "--epsilon", "4.0", "--output", str(tmp_path)]) == 2
    assert "pi" in capsys.readouterr().err


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["kernels", "--orders", "x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def _series_file(tmp_path):
    p = tmp_path / "in.csv"
    p.write_text("k,alpha,beta\n0,1,0\n3,1,0\n")
    return p


def test_filter_series_command(tmp_path):
    out = tmp_path / "out.csv"
    assert main(["filter-series", "--input", str(_series_file(tmp_path)), "--output", str(out),
                 "--epsilon", "0.5", "--order", "1", "--self-check"]) == 0
    rows = _read(out)
    assert float(rows[3]["alpha"]) == pytest.approx(0.664997, abs=1e-6)
    assert float(rows[0]["alpha"]) == 1.0
    side = json.loads((tmp_path / "out.csv.json").read_text())
    assert side["filter"] == {"order": 1, "range": 0.5}
    assert side["self_check"]["multiplier_vs_quadrature"] <= 1e-6


def test_filter_series_twice_equals_order_two(tmp_path):
    src = _series_file(tmp_path)
    a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
    main(["filter-series", "--input", str(src), "--output", str(a), "--epsilon", "0.25"])
    main(["filter-series", "--input", str(a), "--output", str(b), "--epsilon", "0.25"])
    main(["filter-series", "--input", str(src), "--output", str(c), "--epsilon", "0.5", "--order", "2"])
    assert b.read_bytes() == c.read_bytes()


def test_filter_series_json_and_determinism(tmp_path):
    src = _series_file(tmp_path)
    outs = []
    for name in ("x.json", "y.json"):
        main(["filter-series", "--input", str(src), "--output", str(tmp_path / name),
              "--epsilon", "0.5", "--format", "json"])
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]
    assert set(json.loads(outs[0])) == {"half_mean", "cos", "sin", "period_half_width"}


def test_empty_and_malformed_inputs(tmp_path, capsys):
    empty = tmp_path / "e.csv"
    empty.write_text("")
    assert main(["filter-series", "--input", str(empty), "--output", str(tmp_path / "o.csv"),
                 "--epsilon", "0.5"]) == 2
    bad = tmp_path / "b.csv"
    bad.write_text("k,alpha,beta\n0,1,0\n2,oops,0\n")
    assert main(["filter-series", "--input", str(bad), "--output", str(tmp_path / "o.csv"),
                 "--epsilon", "0.5"]) == 2
    assert "b.csv:3" in capsys.readouterr().err


def test_filter_samples_command(tmp_path):
    x = -math.pi + 2 * math.pi / 512 * np.arange(512)
    src = tmp_path / "f.csv"
    src.write_text("x,f\n" + "".join(f"{fmt(a)},{fmt(np.cos(a))}\n" for a in x))
    out = tmp_path / "g.csv"
    assert main(["filter-samples", "--input", str(src), "--output", str(out),
                 "--epsilon", "0.5"]) == 0
    g = np.array([float(r["f"]) for r in _read(out)])
    np.testing.assert_allclose(g, np.cos(x) * math.sin(0.5) / 0.5, atol=1e-4)

    out = tmp_path / "z.csv"
    assert main(["filter-samples", "--input", str(src), "--output", str(out),
                 "--epsilon", "0.5", "--extension", "zero"]) == 0
    side = json.loads((tmp_path / "z.csv.json").read_text())
    assert side["edge_affected"] > 0


def test_diagnose_command(tmp_path):
    p = tmp_path / "s.csv"
    k = np.arange(1, 129)
    write_series_csv(p, FourierSeries(0.0, 1 / k**2, np.zeros(128)))
    out = tmp_path / "d.json"
    assert main(["diagnose", "--input", str(p), "--output", str(out)]) == 0
    assert json.loads(out.read_text())["classification"] == "absolute-uniform"


def test_box_command(tmp_path):
    out = tmp_path / "box"
    assert main(["box", "--epsilon", "0.1", "--grid", "401", "--output", str(out),
                 "--self-check"]) == 0
    report = json.loads((out / "box_report.json").read_text())
    np.testing.assert_allclose(report["scans"]["ey_filtered"]["flagged"], [0.1, 0.9], atol=3e-3)
    assert report["solution"]["parameters"] == {"V0": 1.0, "L": 1.0, "h": 1.0}
    assert list(_read(out / "scan_ey_filtered.csv")[0]) == ["coord", "class", "oscillation"]
    assert list(_read(out / "ey_filtered.csv")[0]) == ["coord", "value"]


def test_string_command(tmp_path):
    out = tmp_path / "s"
    assert main(["string", "--epsilon", "0.05", "--modes", "2048", "--grid", "201",
                 "--output", str(out)]) == 0
    report = json.loads((out / "string_report.json").read_text())
    assert report["scans"]["acceleration_filtered"]["verdict"] == "convergent"
    assert report["scans"]["acceleration_unfiltered"]["verdict"] == "divergent"
    for name in ("position", "velocity", "acceleration"):
        for tag in ("filtered", "unfiltered"):
            assert (out / f"{name}_{tag}.csv").exists()
    assert (out / "initial_filtered.csv").exists() and (out / "initial_unfiltered.csv").exists()


def test_cylinder_command(tmp_path):
    out = tmp_path / "c"
    assert main(["cylinder", "--epsilon", "0.1", "--output", str(out), "--self-check"]) == 0
    report = json.loads((out / "cylinder_report.json").read_text())
    assert len(report["scans"]["flux_r_filtered"]["flagged"]) == 4


def test_example_rejects_bad_epsilon(tmp_path, capsys):
    assert main(["box", "--epsilon", "0.5", "--output", str(tmp_path)]) == 2
    assert "L/2" in capsys.readouterr().err
