import csv
import io
import json
import math
import subprocess
import sys

import pytest

from hermlab import HermiteCoeffs
from hermlab.cli import SWEEP_COLUMNS, main
from hermlab.io import dump


def _table(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


@pytest.fixture
def phi0(tmp_path):
    path = tmp_path / "phi0.json"
    dump(HermiteCoeffs.delta((0,), 6), path)
    return path


# -- verify -------------------------------------------------------------------


def test_verify_is_byte_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["verify", "propagators", "--seed", "7", "--out", str(a)]) == 0
    assert main(["verify", "propagators", "--seed", "7", "--out", str(b)]) == 0
    for name in ("verify_propagators.csv", "verify_propagators.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert "checks passed" in capsys.readouterr().out


def test_verify_report_layout(tmp_path):
    main(["verify", "basis", "--out", str(tmp_path)])
    text = (tmp_path / "verify_basis.csv").read_text()
    header = [ln for ln in text.splitlines() if ln.startswith("#")]
    assert any(ln.startswith("# seed: 0") for ln in header)
    assert any("generator" in ln for ln in header)
    rows = _table(text)
    assert rows and set(rows[0]) == {"experiment", "params", "measured", "reference", "tolerance", "pass"}
    verdict = json.loads((tmp_path / "verify_basis.json").read_text())
    assert verdict["pass"] is True and verdict["failed"] == 0
    assert len(verdict["rows"]) == len(rows)


def test_verify_seed_changes_output(tmp_path):
    main(["verify", "propagators", "--seed", "1", "--out", str(tmp_path / "a")])
    main(["verify", "propagators", "--seed", "2", "--out", str(tmp_path / "b")])
    a = (tmp_path / "a" / "verify_propagators.csv").read_bytes()
    b = (tmp_path / "b" / "verify_propagators.csv").read_bytes()
    assert a != b


def test_unknown_suite_exit_code(tmp_path, capsys):
    assert main(["verify", "nosuch", "--out", str(tmp_path)]) == 2
    assert "unknown suite" in capsys.readouterr().err


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 3, "N": 12}))
    main(["verify", "basis", "--config", str(cfg), "--seed", "4", "--out", str(tmp_path / "o")])
    verdict = json.loads((tmp_path / "o" / "verify_basis.json").read_text())
    assert verdict["seed"] == 4 and verdict["config"]["N"] == 12
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"nonsense": 1}))
    assert main(["verify", "basis", "--config", str(bad), "--out", str(tmp_path)]) == 2


# -- norm ---------------------------------------------------------------------


def test_norm_of_phi0(phi0, tmp_path, capsys):
    out = tmp_path / "rec.json"
    assert main(["norm", "--p", "2", "--q", "2", "--input", str(phi0), "--output", str(out)]) == 0
    first = capsys.readouterr().out.splitlines()[0]
    assert abs(float(first) - 1.0) < 1e-6
    rec = json.loads(out.read_text())
    assert rec["p"] == 2.0 and rec["q"] == 2.0 and abs(rec["value"] - 1) < 1e-6


def test_norm_of_zero(tmp_path, capsys):
    path = tmp_path / "z.json"
    dump(HermiteCoeffs.zeros(1, 4), path)
    assert main(["norm", "--p", "1", "--q", "1", "--input", str(path)]) == 0
    assert float(capsys.readouterr().out.splitlines()[0]) == 0.0


def test_norm_infinite_exponent(phi0, capsys):
    assert main(["norm", "--p", "1", "--q", "inf", "--input", str(phi0)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert math.isfinite(float(lines[0]))
    assert json.loads(lines[1])["q"] == "inf"


def test_norm_rejects_small_exponent(phi0, capsys):
    assert main(["norm", "--p", "0.5", "--q", "2", "--input", str(phi0)]) == 2
    err = capsys.readouterr().err
    assert "outside [1, inf]" in err and "p, q >= 1" in err


def test_norm_missing_input(tmp_path):
    assert main(["norm", "--p", "2", "--q", "2", "--input", str(tmp_path / "none.json")]) == 2


# -- sweep --------------------------------------------------------------------


def test_sweep_columns_and_threshold(tmp_path):
    code = main(["sweep", "--beta", "0.5", "--gamma", "2", "--p", "1.5,6", "--N", "10",
                 "--out", str(tmp_path)])
    assert code == 0
    rows = _table((tmp_path / "sweep.csv").read_text())
    assert list(rows[0]) == SWEEP_COLUMNS
    assert [float(r["p"]) for r in rows] == [1.5, 6.0]
    assert all(float(r["threshold"]) == 0.25 for r in rows)
    # |1/p - 1/2| = 1/6 is inside, 1/3 is outside
    assert [r["region"] for r in rows] == ["inside", "outside"]
    assert rows[0]["pass"] == "true" and rows[1]["pass"] == "n/a"
    assert all(r["label"] == "empirical lower bound" for r in rows)


def test_sweep_constant_family(capsys):
    assert main(["sweep", "--family", "constant", "--p", "3", "--N", "8"]) == 0
    rows = _table(capsys.readouterr().out)
    assert float(rows[0]["ratio_N"]) == pytest.approx(1.0, abs=1e-12)
    assert float(rows[0]["ratio_2N"]) == pytest.approx(1.0, abs=1e-12)


def test_sweep_thread_count_does_not_change_output(tmp_path, monkeypatch):
    args = ["sweep", "--beta", "0.5,1", "--p", "2,4", "--N", "8"]
    monkeypatch.setenv("HERMLAB_THREADS", "1")
    main(args + ["--out", str(tmp_path / "a")])
    monkeypatch.setenv("HERMLAB_THREADS", "4")
    main(args + ["--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "sweep.csv").read_bytes() == (tmp_path / "b" / "sweep.csv").read_bytes()


def test_sweep_bad_list():
    assert main(["sweep", "--p", "x,y"]) == 2
    assert main(["sweep", "--p", "0.5"]) == 2


# -- propagate ----------------------------------------------------------------


def _propagate(args, capsys):
    assert main(["propagate", *args]) == 0
    return json.loads(capsys.readouterr().out)


def test_propagate_schrodinger_identity(phi0, capsys):
    rep = _propagate(["--kind", "schrodinger", "--t", "0", "--input", str(phi0)], capsys)
    assert rep["output_l2"] == rep["input_l2"] == 1.0
    assert rep["output"]["entries"] == [{"alpha": [0], "re": 1.0, "im": 0.0}]


def test_propagate_wave_at_zero(phi0, capsys):
    rep = _propagate(["--kind", "wave", "--t", "0", "--input", str(phi0)], capsys)
    assert rep["output_l2"] == 0.0


def test_propagate_riesz(phi0, tmp_path, capsys):
    out = tmp_path / "r.json"
    rep = _propagate(["--kind", "riesz", "--j", "1", "--input", str(phi0), "--output", str(out)], capsys)
    (entry,) = rep["output"]["entries"]
    assert entry["alpha"] == [1] and entry["re"] == pytest.approx(math.sqrt(2))
    assert json.loads(out.read_text())["N"] == 7


def test_propagate_needs_parameter(phi0):
    assert main(["propagate", "--kind", "riesz", "--input", str(phi0)]) == 2
    assert main(["propagate", "--kind", "wave", "--input", str(phi0)]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hermlab", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "hermlab" in res.stdout
