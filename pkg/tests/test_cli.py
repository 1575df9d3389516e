import json
import subprocess
import sys

import numpy as np
import pytest
import yaml

from lcframe.cli import main
from lcframe.engine import reconstruct
from lcframe.gallery import example_kappa3, example_trig
from lcframe.io import HEADER, PathTable, SpecError, build_spec, read_table, table_from_csv, table_to_csv


def emit(tmp_path, name, *extra):
    out = tmp_path / f"{name}.yaml"
    assert main(["gallery", "emit-spec", name, "-o", str(out), *extra]) == 0
    return out


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def edit(path, fn):
    doc = yaml.safe_load(path.read_text())
    fn(doc)
    path.write_text(yaml.safe_dump(doc))
    return path


def test_gallery_list(capsys):
    assert main(["gallery", "list"]) == 0
    out = capsys.readouterr().out
    for name in ("trig", "kappa3-sin", "kappa3-sinh"):
        assert name in out


def test_emit_spec_stdout(capsys):
    assert main(["gallery", "emit-spec", "trig", "--set", "p=3", "--samples", "101"]) == 0
    doc = yaml.safe_load(capsys.readouterr().out)
    assert doc["params"]["p"] == 3.0 and doc["samples"] == 101
    assert build_spec(doc).quintuple.alpha(np.pi / 4) == pytest.approx(2.0)


def test_emit_spec_errors(tmp_path, capsys):
    assert main(["gallery", "emit-spec", "trig", "--mate", "XYZ"]) == 1
    assert main(["gallery", "emit-spec", "trig", "--set", "p"]) == 1
    with pytest.raises(SystemExit) as info:
        main(["gallery", "emit-spec", "nope"])
    assert info.value.code == 1


def test_reconstruct_trig_csv(tmp_path, capsys):
    spec = emit(tmp_path, "trig")
    out = tmp_path / "trig.csv"
    assert main(["reconstruct", str(spec), "-o", str(out)]) == 0
    info = kv(capsys.readouterr().out)
    assert float(info["drift"]) <= 1e-6 and info["drift_ok"] == "true"
    lines = out.read_text().splitlines()
    assert lines[0].split(",") == HEADER
    assert len(lines) == 2002


def test_reconstruct_json(tmp_path):
    spec = emit(tmp_path, "kappa3-sin", "--samples", "201")
    out = tmp_path / "p.json"
    assert main(["reconstruct", str(spec), "-o", str(out), "--format", "json"]) == 0
    table = read_table(out)
    assert table.path.N == 201
    assert "zero" in table.causal and table.singular.sum() == 2


def test_csv_round_trip_is_bit_stable(tmp_path):
    entry = example_kappa3("sinh")
    q = entry.quintuple()
    table = PathTable.from_path(reconstruct(q, entry.initial_frame(), N=301), q)
    text = table_to_csv(table)
    back = table_from_csv(text)
    for name in ("t", "gamma", "lplus", "lminus", "n"):
        assert np.array_equal(getattr(back.path, name), getattr(table.path, name))
    assert np.array_equal(back.curvature, table.curvature)
    assert back.causal == table.causal
    assert table_to_csv(back) == text


def test_csv_file_round_trip(tmp_path):
    spec = emit(tmp_path, "trig", "--samples", "101")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["reconstruct", str(spec), "-o", str(a)]) == 0
    table = read_table(a)
    b.write_text(table_to_csv(table))
    assert a.read_bytes() == b.read_bytes()


def test_malformed_expression_exits_1(tmp_path, capsys):
    spec = edit(emit(tmp_path, "trig"), lambda d: d["curvature"].update(k3="n/2*(t +"))
    assert main(["reconstruct", str(spec), "-o", str(tmp_path / "x.csv")]) == 1
    err = capsys.readouterr().err
    assert "curvature.k3" in err and "offset 8" in err


def test_too_few_samples_exits_1(tmp_path, capsys):
    spec = edit(emit(tmp_path, "trig"), lambda d: d.update(samples=3))
    assert main(["reconstruct", str(spec), "-o", str(tmp_path / "x.csv")]) == 1
    assert "samples" in capsys.readouterr().err


def test_nn_nonconstant_exits_1(tmp_path, capsys):
    spec = edit(emit(tmp_path, "trig", "--mate", "NN"), lambda d: d["mate"].update({"lambda": "sin(t)"}))
    assert main(["mate", str(spec), "-o", str(tmp_path / "m")]) == 1
    assert "constant" in capsys.readouterr().err


def test_broken_frame_fails_validation(tmp_path, capsys):
    spec = edit(emit(tmp_path, "trig"), lambda d: d["initial_frame"].update(lplus=[1, 0.5, 0]))
    assert main(["verify", str(spec)]) == 1
    assert "NullPair" in capsys.readouterr().err


def test_condition_violation_exits_3(tmp_path, capsys):
    spec = edit(emit(tmp_path, "trig", "--mate", "LpLp"), lambda d: d["mate"].update({"lambda": "sin(2*t) + 0.1"}))
    assert main(["mate", str(spec), "-o", str(tmp_path / "m")]) == 3
    assert "residual" in capsys.readouterr().err
    assert main(["verify", str(spec)]) == 3


def test_integration_failure_exits_2(tmp_path):
    spec = edit(emit(tmp_path, "trig"), lambda d: (d["curvature"].update(k1="40"), d.update(samples=5)))
    assert main(["reconstruct", str(spec), "-o", str(tmp_path / "x.csv")]) == 2


def test_usage_error_exits_1():
    with pytest.raises(SystemExit) as info:
        main(["reconstruct"])
    assert info.value.code == 1


def test_mate_end_to_end(tmp_path, capsys):
    spec = emit(tmp_path, "trig", "--mate", "LpLp")
    out = tmp_path / "mate"
    assert main(["mate", str(spec), "-o", str(out)]) == 0
    assert kv(capsys.readouterr().out)["status"] == "pass"
    report = json.loads((out / "report.json").read_text())
    assert report["passed"] and report["condition_residual"] <= 1e-9
    src, mate = read_table(out / "source.csv"), read_table(out / "mate.csv")
    np.testing.assert_allclose(mate.path.gamma, src.path.gamma + np.sin(2 * src.path.t)[:, None] * src.path.lplus, atol=1e-12)


def test_mate_with_solved_lambda(tmp_path, capsys):
    spec = edit(emit(tmp_path, "trig", "--mate", "LpLp"), lambda d: d["mate"].pop("lambda"))
    assert main(["mate", str(spec), "-o", str(tmp_path / "m")]) == 0


def test_mate_missing_block(tmp_path):
    assert main(["mate", str(emit(tmp_path, "trig")), "-o", str(tmp_path / "m")]) == 1


def test_nt_zero_angle_on_circle_frame(tmp_path, capsys):
    def to_nt(d):
        d["mate"] = {"kind": "NT", "lambda": "1 + 0.3*cos(t)", "aux": "0"}

    spec = edit(emit(tmp_path, "trig"), to_nt)
    assert main(["mate", str(spec), "-o", str(tmp_path / "m")]) == 0
    assert kv(capsys.readouterr().out)["status"] == "pass"


def test_verify_kappa3_sin(tmp_path, capsys):
    assert main(["verify", str(emit(tmp_path, "kappa3-sin"))]) == 0
    info = kv(capsys.readouterr().out)
    assert info["status"] == "pass"
    assert info["singular_t"] == "1.5708,4.7124"
    assert info["causal_types"] == "lightlike,spacelike,timelike"  # lightlike at t = 0, pi where alpha = 0


def test_verify_trig_nsn(tmp_path, capsys):
    assert main(["verify", str(emit(tmp_path, "trig", "--mate", "NSN"))]) == 0
    info = kv(capsys.readouterr().out)
    assert info["status"] == "pass" and info["mate_direction_sign"] == "-1"


def test_json_spec_accepted(tmp_path, capsys):
    doc = example_trig().spec_document("NN", samples=201)
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    assert main(["verify", str(path)]) == 0


def test_build_spec_errors():
    doc = example_trig().spec_document()
    bad = dict(doc, curvature=dict(doc["curvature"], alpha="r*t"))
    with pytest.raises(SpecError, match="curvature.alpha"):
        build_spec(bad)
    with pytest.raises(SpecError, match="interval"):
        build_spec(dict(doc, interval={"t0": 1, "t1": 0}))
    with pytest.raises(SpecError, match="mate.kind"):
        build_spec(dict(doc, mate={"kind": "ZZ"}))


def test_console_script_runs():
    r = subprocess.run([sys.executable, "-m", "lcframe.cli", "gallery", "list"], capture_output=True, text=True)
    assert r.returncode == 0 and "trig" in r.stdout
