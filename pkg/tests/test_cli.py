import math
import subprocess
import sys

import pytest

from cubelab.lab import csvio
from cubelab.lab.cli import main
from cubelab.verify import InequalityReport

ONES = """[experiment]
id = ones
k = 2
N = 3, 6
[system]
kind = cyclic
p = 3
[observable]
kind = table
values = 1, 1, 1
"""

BERN = """[experiment]
id = bern
k = 2
N = 32, 64
seeds = 4, 5, 6
[system]
kind = bernoulli
[observable]
kind = symbol_fn
values = 1, -1
"""


@pytest.fixture
def cfg(tmp_path):
    def write(text, name="c.ini"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_average_two_point(capsys):
    assert main(["average", "--k", "2", "--N", "2", "--system", "cyclic", "--p", "2", "--values", "1,-1"]) == 0
    assert capsys.readouterr().out.strip() == "1.0"


def test_average_methods_agree(capsys):
    base = ["average", "--k", "3", "--N", "6", "--system", "cyclic", "--p", "3", "--values", "0.5,-1,0.25"]
    main(base + ["--method", "naive"])
    main(base + ["--method", "fast"])
    a, b = (float(x) for x in capsys.readouterr().out.split())
    assert a == pytest.approx(b, abs=1e-12)


def test_verify_vdc(capsys):
    assert main(["verify", "--ineq", "vdc", "--trials", "3", "--seed", "1"]) == 0
    rows = csvio.loads(capsys.readouterr().out)
    assert len(rows) == 3 and all(r["pass"] and r["rigorous"] for r in rows)


def test_sweep_all_ones(cfg, capsys):
    assert main(["sweep", "--config", cfg(ONES)]) == 0
    out = capsys.readouterr()
    rows = csvio.loads(out.out)
    assert [r["value"] for r in rows] == [1.0, 1.0]
    assert all(r["gap"] == 0.0 for r in rows)
    assert "gap=0" in out.err


def test_config_error_exit_status(cfg, capsys):
    path = cfg(ONES.replace("k = 2", "k = two"))
    assert main(["sweep", "--config", path]) == 2
    assert f"{path}:3" in capsys.readouterr().err


def test_usage_error_exit_status():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--ineq", "nope"])
    assert exc.value.code != 0
    assert main(["average", "--system", "cyclic", "--p", "2", "--obs", "table"]) == 2


def test_out_routing(tmp_path, capsys, monkeypatch):
    out = tmp_path / "v.csv"
    main(["verify", "--ineq", "eq5", "--trials", "2", "--out", str(out)])
    cap = capsys.readouterr()
    assert "eq5:" in cap.out and "tag," not in cap.out
    assert len(csvio.read(out)) == 2
    monkeypatch.setenv("CUBELAB_OUT_DIR", str(tmp_path / "dir"))
    main(["verify", "--ineq", "powermean", "--trials", "2"])
    assert len(csvio.read(tmp_path / "dir" / "verify.csv")) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--ineq", "vdc", "--trials", "20", "--seed", "3"],
        ["verify", "--ineq", "eq3", "--trials", "6", "--seed", "3", "--N", "16"],
        ["verify", "--ineq", "induction", "--trials", "6", "--seed", "3", "--N", "16", "--H", "4"],
    ],
)
def test_thread_independence(argv, capsys):
    main(argv + ["--threads", "1"])
    one = capsys.readouterr().out
    main(argv + ["--threads", "4"])
    assert capsys.readouterr().out == one


def test_sweep_thread_independence(cfg, tmp_path):
    path = cfg(BERN)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["sweep", "--config", path, "--out", str(a), "--threads", "1"])
    main(["sweep", "--config", path, "--out", str(b), "--threads", "3"])
    assert a.read_bytes() == b.read_bytes()
    assert len(csvio.read(a)) == 6


def test_report_aggregates_and_fails(tmp_path, capsys):
    good = tmp_path / "g.csv"
    main(["verify", "--ineq", "vdc", "--trials", "4", "--out", str(good)])
    bad = tmp_path / "b.csv"
    bad.write_text(csvio.dumps([csvio.report_row(InequalityReport("eq1", 2.0, 1.0, True, {"N": 4}))]))
    capsys.readouterr()
    assert main(["report", str(good)]) == 0
    assert "vdc: rows=4" in capsys.readouterr().out
    assert main(["report", str(good), str(bad)]) == 1
    assert "eq1: rows=1 rigorous=1 violations=1" in capsys.readouterr().out


def test_seminorm_and_wwmax(capsys):
    assert main(["seminorm", "--k", "2", "--system", "cyclic", "--p", "4", "--values", "1,0,-1,0",
                 "--method", "cyclic_box"]) == 0
    assert main(["wwmax", "--N", "32", "--system", "cyclic", "--p", "2", "--values", "1,-1"]) == 0
    out = capsys.readouterr().out.split()
    assert float(out[0]) == pytest.approx(0.125 ** 0.25)
    assert float(out[1]) == pytest.approx(1.0) and float(out[2]) > 1.0


def test_orbit_output(capsys):
    main(["orbit", "--system", "cyclic", "--p", "3", "--values", "1,2,3", "--length", "4", "--x0", "1"])
    assert capsys.readouterr().out == "n,value\n0,2.0\n1,3.0\n2,1.0\n3,2.0\n"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cubelab", "verify", "--ineq", "vdc", "--trials", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("tag,")


def test_csv_round_trip():
    rows = [csvio.report_row(InequalityReport("eq3", 0.1, 0.0, False, {"N": 8, "L": 8, "seed": 2})),
            csvio.report_row(InequalityReport("induction", 0.0, 0.0, False, {"k": 3, "variant": "eq8"}))]
    back = csvio.loads(csvio.dumps(rows))
    assert back[0]["ratio"] == math.inf and back[0]["seed"] == 2
    assert back[1]["tag"] == "induction:eq8" and math.isnan(back[1]["ratio"])
    assert tuple(csvio.dumps([]).strip().split(",")) == csvio.COLUMNS
    with pytest.raises(ValueError):
        csvio.loads("a,b\n1,2\n")


def test_csv_numpy_scalars():
    import numpy as np

    text = csvio.dumps([{"tag": "x", "N": np.int64(4), "value": np.float64(0.5), "pass": True}])
    assert text.splitlines()[1] == "x,,4,,,,0.5,,,,,true"


def test_rotation_sweep_report(cfg, tmp_path, capsys):
    path = cfg(
        "[experiment]\nid = rot\nN = 64, 128\nbase_points = 0.0, 0.3\n"
        "[system]\nkind = rotation\n[observable]\nkind = trig_poly\ncoefficients = 1:0.5, -1:0.5\n"
    )
    out = tmp_path / "rot.csv"
    assert main(["sweep", "--config", path, "--out", str(out)]) == 0
    rows = csvio.read(out)
    assert rows[0]["oracle"] == pytest.approx(0.25)
    assert main(["report", str(out)]) == 0
    assert "rot: rows=4" in capsys.readouterr().out
