"""End-to-end checks of the command line front end."""

import json
import math

import numpy as np
import pytest

from thinseq import families
from thinseq.carleson import carleson_report
from thinseq.cli import main
from thinseq.disc import PointSequence, separation_constants
from thinseq.gram import tail_bounds


def make_seq_file(tmp_path, family="supergeometric", count=8, name="seq.json"):
    path = tmp_path / name
    rc = main(
        [
            "generate",
            "--family",
            family,
            "--count",
            str(count),
            "--out",
            str(path),
        ]
    )
    assert rc == 0
    return path


def write_targets(tmp_path, p, offset, values, name="targets.json"):
    path = tmp_path / name
    doc = {
        "offsetN": offset,
        "p": p,
        "values": [{"im": complex(v).imag, "re": complex(v).real} for v in values],
    }
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_generate_writes_header_and_roundtrips(tmp_path):
    path = make_seq_file(tmp_path, family="geometric", count=6)
    doc = json.loads(path.read_text())
    assert doc["meta"]["comment"] == "geometric c=1.0 q=0.5 count=6 angles=radial"
    back = families.load_sequence(path)
    direct = families.generate(families.FamilySpec(kind="geometric", count=6))
    assert back.points == direct.points


def test_generate_rejects_bad_parameters(tmp_path, capsys):
    rc = main(
        ["generate", "--family", "geometric", "--q", "1.5", "--out", str(tmp_path / "s")]
    )
    assert rc == 2
    err = capsys.readouterr().err
    assert err.count("\n") == 1
    assert "q must lie" in json.loads(err)["error"]


def test_analyze_matches_library_and_stdout_is_canonical(tmp_path, capsys):
    path = make_seq_file(tmp_path)
    rc = main(["analyze", "--in", str(path)])
    assert rc == 0
    text = capsys.readouterr().out
    report = json.loads(text)
    assert text == json.dumps(report, indent=2, sort_keys=True) + "\n"
    rep = separation_constants(families.load_sequence(path))
    assert report["delta"] == rep.delta
    assert report["deltaJ"] == list(rep.delta_j)
    assert report["tailDelta"] == list(rep.tail_delta)
    assert report["thinTrend"] is True


def test_reports_are_byte_identical_across_runs(tmp_path):
    path = make_seq_file(tmp_path)
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(["carleson", "--in", str(path), "--tail", "3", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_generated_files_byte_identical(tmp_path):
    p1 = make_seq_file(tmp_path, name="s1.json")
    p2 = make_seq_file(tmp_path, name="s2.json")
    assert p1.read_bytes() == p2.read_bytes()


def test_csv_derived_from_report(tmp_path):
    path = make_seq_file(tmp_path)
    out = tmp_path / "rep.json"
    assert main(["analyze", "--in", str(path), "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    lines = (tmp_path / "rep.csv").read_text().splitlines()
    assert lines[0] == "index,value"
    assert len(lines) == 1 + len(report["deltaJ"])
    idx, val = lines[1].split(",")
    assert idx == "1"
    assert float(val) == report["deltaJ"][0]


def test_gram_report_matches_library(tmp_path):
    path = make_seq_file(tmp_path)
    out = tmp_path / "gram.json"
    assert main(["gram", "--in", str(path), "--tail", "4", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    tb = tail_bounds(families.load_sequence(path), 4)
    assert report["N"] == 4
    assert report["count"] == tb.count
    assert report["cN"] == tb.lower
    assert report["CN"] == tb.upper
    vals = report["eigenvalues"]
    assert vals == sorted(vals)
    assert report["matrix"]["n"] == tb.count


def test_carleson_report_matches_library(tmp_path):
    path = make_seq_file(tmp_path)
    out = tmp_path / "car.json"
    rc = main(
        [
            "carleson",
            "--in",
            str(path),
            "--tail",
            "2",
            "--amp",
            "1.5",
            "--grid",
            "32",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    report = json.loads(out.read_text())
    rep = carleson_report(families.load_sequence(path), 2, 1.5, 32)
    assert report["A"] == 1.5
    assert report["N"] == 2
    assert report["R"] == rep.R_constant
    assert report["C"] == rep.C_constant
    assert report["boxSums"] == list(rep.box_sums)


def test_interpolate_iterative_default_for_p2(tmp_path, capsys):
    path = make_seq_file(tmp_path, count=12)
    targets = write_targets(tmp_path, 2, 6, [1.0, -0.5, 0.25j, 0.0, 1.0 + 1.0j, -2.0, 0.5])
    rc = main(["interpolate", "--in", str(path), "--targets", str(targets)])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["method"] == "iterative"
    assert report["p"] == 2
    assert report["finalResidual"] < 1e-10
    assert 0.0 <= report["eps"] < 1.0
    assert report["rounds"] == len(report["residualTrace"]) - 1


def test_interpolate_jones_default_for_sup(tmp_path, capsys):
    path = make_seq_file(tmp_path, count=10)
    targets = write_targets(tmp_path, "inf", 5, [1.0, 0.5j, -1.0, 0.25, 0.0, 1.0])
    rc = main(
        ["interpolate", "--in", str(path), "--targets", str(targets), "--grid", "40"]
    )
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["method"] == "jones"
    assert report["p"] == "inf"
    assert report["residual"] < 1e-9
    assert max(report["nodeErrors"]) < 1e-9
    assert report["gridSup"] <= report["supBound"] + 1e-9


def test_interpolate_kernel_weighted_residuals(tmp_path, capsys):
    path = make_seq_file(tmp_path, count=10)
    targets = write_targets(tmp_path, 2, 5, [1.0, -1.0, 0.5, 0.5j, -0.25, 2.0])
    rc = main(
        [
            "interpolate",
            "--in",
            str(path),
            "--targets",
            str(targets),
            "--method",
            "kernel",
        ]
    )
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["method"] == "kernel"
    assert max(report["nodeErrors"]) < 1e-9
    assert report["norm"] > 0.0


def test_interpolate_wrong_route_is_usage_error(tmp_path, capsys):
    path = make_seq_file(tmp_path, count=10)
    targets = write_targets(tmp_path, "inf", 5, [1.0] * 6)
    rc = main(
        [
            "interpolate",
            "--in",
            str(path),
            "--targets",
            str(targets),
            "--method",
            "iterative",
        ]
    )
    assert rc == 2
    assert "error" in json.loads(capsys.readouterr().err)


def test_pick_bisect_all_ones(tmp_path, capsys):
    path = tmp_path / "two.json"
    families.save_sequence(path, PointSequence.from_values([0.0, 0.5]))
    rc = main(["pick", "--in", str(path), "--bisect"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["sStar"] == 1.0
    assert report["MHat"] is None
    assert report["trials"] == 0


def test_pick_probe_deterministic_in_seed(tmp_path):
    path = make_seq_file(tmp_path, count=8)
    outs = []
    for name in ("p1.json", "p2.json"):
        out = tmp_path / name
        rc = main(
            [
                "pick",
                "--in",
                str(path),
                "--tail",
                "6",
                "--seed",
                "7",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    report = json.loads(outs[0])
    assert report["seed"] == 7
    assert report["trials"] == 16
    assert report["MHat"] >= 1.0
    assert report["sStar"] == 1.0


def test_pick_targets_length_mismatch(tmp_path, capsys):
    path = make_seq_file(tmp_path, count=8)
    targets = write_targets(tmp_path, "inf", 1, [1.0, 1.0])
    rc = main(["pick", "--in", str(path), "--targets", str(targets)])
    assert rc == 2
    assert "expected 8 targets" in json.loads(capsys.readouterr().err)["error"]


def test_split_report(tmp_path, capsys):
    path = make_seq_file(tmp_path, count=8)
    rc = main(["split", "--in", str(path), "--tail", "4", "--grid", "40"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["cut"] == 4
    assert report["gridMax"] <= report["gamma"] + 1e-12
    f = report["FAtNodes"]
    assert max(abs(v - 1.0) for v in f[3:]) < 1e-8
    assert max(f[:3]) < 1e-8
    g = report["GAtNodes"]
    assert max(abs(v - 1.0) for v in g[:3]) < 1e-8
    assert max(g[3:]) < 1e-8


def test_split_requires_cut(tmp_path, capsys):
    path = make_seq_file(tmp_path)
    rc = main(["split", "--in", str(path)])
    assert rc == 2
    assert "error" in json.loads(capsys.readouterr().err)


def test_numeric_failure_exit_code(tmp_path, capsys):
    path = make_seq_file(tmp_path, family="geometric", count=12)
    targets = write_targets(tmp_path, 2, 1, [1.0] * 12)
    rc = main(["interpolate", "--in", str(path), "--targets", str(targets)])
    assert rc == 3
    err = capsys.readouterr().err
    assert err.count("\n") == 1
    assert "not contractive" in json.loads(err)["error"]


def test_missing_file_is_usage_error(tmp_path, capsys):
    rc = main(["analyze", "--in", str(tmp_path / "absent.json")])
    assert rc == 2
    assert "error" in json.loads(capsys.readouterr().err)


def test_unknown_subcommand_and_flags(capsys):
    assert main(["frobnicate"]) == 2
    assert "error" in json.loads(capsys.readouterr().err)
    assert main(["analyze", "--bogus", "x"]) == 2
    assert "error" in json.loads(capsys.readouterr().err)


def test_plot_requires_out(tmp_path, capsys):
    path = make_seq_file(tmp_path)
    rc = main(["analyze", "--in", str(path), "--plot"])
    assert rc == 2
    assert "requires --out" in json.loads(capsys.readouterr().err)["error"]


def test_plot_writes_figures(tmp_path):
    path = make_seq_file(tmp_path)
    out = tmp_path / "rep.json"
    assert main(["analyze", "--in", str(path), "--out", str(out), "--plot"]) == 0
    fig = tmp_path / "rep.png"
    assert fig.exists() and fig.stat().st_size > 0
    out2 = tmp_path / "car.json"
    assert main(["carleson", "--in", str(path), "--out", str(out2), "--plot"]) == 0
    assert (tmp_path / "car.png").exists()


def test_generate_plot(tmp_path):
    out = tmp_path / "seq.json"
    rc = main(
        ["generate", "--family", "supergeometric", "--count", "6", "--out", str(out), "--plot"]
    )
    assert rc == 0
    assert (tmp_path / "seq.png").stat().st_size > 0


def test_csv_sequence_output(tmp_path):
    out = tmp_path / "seq.csv"
    rc = main(["generate", "--family", "geometric", "--count", "5", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# geometric")
    back = families.load_sequence(out)
    assert len(back) == 5
    assert math.isclose(back.point(1).modulus, 0.5, rel_tol=0, abs_tol=0)
