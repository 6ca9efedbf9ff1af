from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qmatroids.algebra import Matrix, make_field
from qmatroids.cli import main
from qmatroids.qmatroid import QMatroid
from qmatroids.specs import SpecError, parse_spec

from conftest import G1

M1 = f"matrix:2^2:4:{G1}"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rank_table_g1(capsys, m1):
    code, out, _ = run(capsys, "rank-table", "2^2", G1)
    assert code == 0
    assert QMatroid.from_csv(out, 2) == m1
    assert len(out.strip().split("\n")) == 68


def test_rank_table_zero_and_json(capsys):
    code, out, _ = run(capsys, "rank-table", "2^2", "0,0,0", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["rank"] == 0 and all(r["rank"] == 0 for r in doc["table"])
    code, out, _ = run(capsys, "rank-table", "2^2", "", "--n", "3")
    assert code == 0 and len(out.strip().split("\n")) == 17


def test_rank_table_moore(capsys):
    code, out, _ = run(capsys, "rank-table", "2^2", "1,2")
    table = QMatroid.from_csv(out, 2)
    assert table == QMatroid.uniform(1, table.lattice)


def test_direct_sum_summary(capsys, u12):
    code, out, err = run(capsys, "direct-sum", "uniform:2:2:1", "uniform:2:2:1", "--out", "/dev/null/x")
    assert code == 2  # cannot create the output directory -> reported, not crashed
    code, out, err = run(capsys, "direct-sum", "uniform:2:2:1", "uniform:2:2:1")
    assert code == 0
    summary = json.loads(err[err.index("{"): err.rindex("}") + 1])
    assert summary["x_size"] == 18 and summary["additivity"]["holds"]
    assert summary["additivity"]["pairs"] == 25


def test_direct_sum_artifacts_deterministic(capsys, tmp_path):
    for d in ("a", "b"):
        assert main(["direct-sum", "uniform:2:2:1", M1, "--out", str(tmp_path / d)]) == 0
    capsys.readouterr()
    for name in ("rank_table.csv", "direct_sum.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert set(manifest["files"]) == {"rank_table.csv", "direct_sum.json"}


def test_free_plus_free(capsys):
    code, out, _ = run(capsys, "direct-sum", "uniform:2:1:1", "uniform:2:2:2")
    assert QMatroid.from_csv(out, 2).ranks.tolist() == QMatroid.from_csv(out, 2).lattice.dims.tolist()


def test_repr_search(capsys):
    code, out, _ = run(capsys, "repr-search", M1, "--degree", "2")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "Representable"
    f = make_field(2, 2)
    for text in doc["payload"]["representations"]:
        assert Matrix.from_text(f, text).to_text() == text
    code, out, _ = run(capsys, "repr-search", M1, "-m", "1")
    assert json.loads(out)["verdict"] == "NotRepresentableAtDegree"
    assert json.loads(out)["payload"]["candidates"] == 35


def test_block_diag_command(capsys):
    code, out, _ = run(capsys, "block-diag", "uniform:2:2:1", "uniform:2:2:1", "-m", "4")
    assert code == 0 and json.loads(out)["payload"]["matrix"] == "1,2,0,0;0,0,1,4"


def test_structures(capsys):
    code, out, _ = run(capsys, "structures", M1)
    assert len(json.loads(out)["circuits"]) == 5


@pytest.mark.parametrize("argv", [
    ["rank-table", "6", "1"],
    ["rank-table", "2^2", "1,x"],
    ["rank-table", "2^2", "5,0"],
    ["rank-table", "2^2", "1,0", "--n", "3"],
    ["direct-sum", "bogus:1", "uniform:2:1:1"],
    ["structures", "uniform:2:2"],
    ["structures", "paving:2:3:2:1,0,0"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "input error" in err


def test_caps(capsys):
    code, _, err = run(capsys, "direct-sum", M1, M1, "--cap-lattice", "1000")
    assert code == 3
    code, _, err = run(capsys, "repr-search", M1, "-m", "4", "--cap-candidates", "10")
    assert code == 3


def test_verify_paper(capsys, tmp_path):
    code, _, err = run(capsys, "verify-paper", "uniform-mrd", "--out", str(tmp_path))
    assert code == 0 and "uniform-mrd: PASS" in err
    doc = json.loads((tmp_path / "scenario.json").read_text())
    assert doc["passed"] and doc["checks"]


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qmatroids.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout


def test_spec_grammar(m1, u12):
    assert parse_spec(M1).matroid == m1
    assert parse_spec("uniform:2:2:1").matroid == u12
    paving = parse_spec("paving:2:4:2:" + ";".join([
        "1,0,0,0;0,1,0,0", "1,0,1,1;0,1,0,1", "1,0,0,1;0,0,1,1", "0,1,1,0;0,0,0,1", "1,1,0,1;0,0,1,0"]))
    assert paving.matroid == m1
    ds = parse_spec("dsum:uniform:2:2:1+uniform:2:2:1")
    assert ds.matroid.lattice.size == 67 and ds.summands is not None
    with pytest.raises(SpecError):
        parse_spec("dsum:uniform:2:2:1")
    with pytest.raises(SpecError):
        parse_spec("paving:2:4:2:1,0,0,0;0,1,0,0;1,0,0,0")
