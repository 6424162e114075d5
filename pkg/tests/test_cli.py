import csv
import io
import json

import numpy as np
import pytest

from qpf import cli
from qpf import gates as G

from reference import PRODUCT_GATE_Z2, SUM_GATE_Z2

ARCHS = {"field_p": 2, "architectures": [[{"rows": 1, "cols": 2}],
                                         [{"rows": 2, "cols": 2}, {"rows": 1, "cols": 2}]]}


@pytest.fixture
def run_files(tmp_path):
    arch = tmp_path / "arch.json"
    arch.write_text(json.dumps(ARCHS))
    data = tmp_path / "train.csv"
    data.write_text("x1,x2,d1\n0,1,1\n1,1,0\n1,0,1\n")
    return arch, data


def test_export_gates(tmp_path, capsys):
    assert cli.main(["export-gates", "--out", str(tmp_path)]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "I.perm", "I.txt", "P.perm", "P.txt", "S.perm", "S.txt"]
    assert np.array_equal(G.parse_matrix((tmp_path / "S.txt").read_text()), SUM_GATE_Z2)
    assert np.array_equal(G.parse_matrix((tmp_path / "P.txt").read_text()), PRODUCT_GATE_Z2)
    assert "S: 8x8 permutation=yes" in capsys.readouterr().out


def test_export_gates_z3(tmp_path):
    assert cli.main(["export-gates", "--field", "3", "--out", str(tmp_path)]) == 0
    P = G.parse_matrix((tmp_path / "P.txt").read_text())
    assert P.shape == (27, 27)
    assert np.array_equal(P @ P.T, np.eye(27))


def test_export_gates_rejects_composite(tmp_path):
    assert cli.main(["export-gates", "--field", "4", "--out", str(tmp_path)]) == 1


def test_demo_default(capsys):
    assert cli.main(["demo-eq19"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "# x1 x2 w1 w2 p1 p2 y re im"
    assert out[1:5] == [
        "0 1 0 0 0 0 0 0.5 0",
        "0 1 0 1 0 1 1 0.5 0",
        "0 1 1 0 0 0 0 0.5 0",
        "0 1 1 1 0 1 1 0.5 0",
    ]
    assert out[-1] == "# terms=4 golden=match"


def test_demo_other_input():
    _, final = cli.neuron_demo_state("11")
    ys = [lab[-1] for lab in final]
    assert ys == [0, 1, 1, 0]


def test_demo_fixed_weights(capsys):
    assert cli.main(["demo-eq19", "--x", "11", "--weights", "10"]) == 0
    out = capsys.readouterr().out
    assert "# terms=1 golden=match" in out
    assert "1 1 1 0 1 0 1 1 0" in out


def test_train_found_and_verified(tmp_path, run_files, capsys):
    arch, data = run_files
    out = tmp_path / "run"
    code = cli.main(["train", "--arch", str(arch), "--data", str(data), "--theta", "2",
                     "--out", str(out), "--verify"])
    assert code == 0
    result = json.loads((out / "result.json").read_text())
    # y = x2 + x1 (mod 2) fits all three patterns with weights 11
    assert result == {"status": "Found", "selector": 0, "weights": [1, 1],
                      "performance": 3, "theta": 2, "seed": 0}
    assert "verify: oracle agrees" in capsys.readouterr().out
    trace = (out / "trace.txt").read_text().splitlines()
    assert trace[:3] == ["pattern 0 terms=128", "pattern 1 terms=128", "pattern 2 terms=128"]
    assert trace[-1] == "search theta=2 Found"


def test_train_not_found(tmp_path, run_files):
    arch, data = run_files
    data.write_text("x1,x2,d1\n0,1,1\n0,1,0\n")
    code = cli.main(["train", "--arch", str(arch), "--data", str(data), "--theta", "1",
                     "--out", str(tmp_path), "--verify"])
    assert code == 2
    assert json.loads((tmp_path / "result.json").read_text())["status"] == "NotFound"


def test_train_retries(tmp_path, run_files):
    arch, data = run_files
    data.write_text("x1,x2,d1\n0,1,1\n0,1,0\n")
    code = cli.main(["train", "--arch", str(arch), "--data", str(data), "--theta", "1",
                     "--retries", "1", "--out", str(tmp_path)])
    assert code == 0
    assert json.loads((tmp_path / "result.json").read_text())["theta"] == 0


@pytest.mark.parametrize("extra", [["--theta", "9"], ["--theta", "1", "--field", "3"],
                                   ["--theta", "1", "--budget", "8"]])
def test_train_errors(tmp_path, run_files, extra, capsys):
    arch, data = run_files
    code = cli.main(["train", "--arch", str(arch), "--data", str(data), "--out", str(tmp_path),
                     *extra])
    assert code == 1
    assert capsys.readouterr().err.startswith("error:")


def test_train_missing_file(tmp_path):
    assert cli.main(["train", "--arch", str(tmp_path / "nope.json"),
                     "--data", str(tmp_path / "nope.csv"), "--theta", "0"]) == 1


def test_train_is_byte_identical(tmp_path, run_files):
    arch, data = run_files
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        cli.main(["train", "--arch", str(arch), "--data", str(data), "--theta", "1",
                  "--seed", "5", "--out", str(out)])
        outs.append(((out / "result.json").read_bytes(), (out / "trace.txt").read_bytes()))
    assert outs[0] == outs[1]


def test_train_timings_flag(tmp_path, run_files):
    arch, data = run_files
    cli.main(["train", "--arch", str(arch), "--data", str(data), "--theta", "0",
              "--timings", "--out", str(tmp_path)])
    assert "time=" in (tmp_path / "trace.txt").read_text()


def test_oracle_csv(tmp_path, run_files):
    arch, data = run_files
    out = tmp_path / "table.csv"
    assert cli.main(["oracle", "--arch", str(arch), "--data", str(data), "--out", str(out)]) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == ["arch_id", "weights", "performance"]
    assert len(rows) == 1 + 4 + 64
    assert ["0", "11", "3"] in rows


def test_cost(capsys):
    assert cli.main(["cost", "--n", "3"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("dense: 1024 TB (1125899906842624 bytes)")
    assert "256 terms" in out and "demo: 4 terms" in out


@pytest.mark.parametrize("p, code", [(7, 0), (2, 0), (6, 1)])
def test_verify_axioms(p, code, capsys):
    assert cli.main(["verify-axioms", "--field", str(p)]) == code
