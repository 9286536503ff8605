import json
import os
import shutil
import subprocess
import sys

import pytest

from braidmono.cli import main
from braidmono.data import fixture_dir
from braidmono.notation import parse_factorization

from conftest import fixture, same_factors


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_propagate_single_node(tmp_path, capsys):
    table = tmp_path / "node.table"
    table.write_text("@strands 2\n1 | <1,2> | 2 | -\n")
    code, out, _ = run(capsys, "propagate", "--input", str(table))
    assert code == 0
    assert out == "@strands 2\nZ2[1,2]\n"


@pytest.mark.parametrize("table, expected", [
    ("five_point_conic.table", "five_point_conic.dsl"),
    ("six_point_conic.table", "six_point_conic.dsl"),
])
def test_propagate_shipped_tables(capsys, table, expected):
    code, out, _ = run(capsys, "propagate", "--input", str(fixture_dir() / table))
    assert code == 0
    assert same_factors(parse_factorization(out), fixture(expected))


def test_propagate_json(tmp_path, capsys):
    table = tmp_path / "t.table"
    table.write_text("@strands 3\n1 | <1,2> | 2 | half<1,2>\n2 | <2,3> | 2 | half<2,3>\n3 | <1,2> | 2 | -\n")
    out_file = tmp_path / "out.json"
    code, out, _ = run(capsys, "propagate", "--input", str(table), "--json", "--output", str(out_file))
    assert code == 0 and out == ""
    doc = json.loads(out_file.read_text())
    assert doc["schema"] == "braidmono.report/1"
    assert doc["degree"] == 6 and doc["factors"] == 3
    assert doc["permutation_cycles"] == []


def test_parse_failure_is_located(tmp_path, capsys):
    table = tmp_path / "bad.table"
    table.write_text("@strands 2\n1 | <1,3> | 2 | -\n")
    code, _, err = run(capsys, "propagate", "--input", str(table))
    assert code == 2 and "row 1" in err


def test_kpoint(capsys):
    code, out, _ = run(capsys, "regenerate", "kpoint", "--k", "4", "--stage", "3")
    assert code == 0
    assert same_factors(parse_factorization(out), fixture("kpoint", "k4_stage3.dsl"))
    code, out, _ = run(capsys, "regenerate", "kpoint", "--k", "2", "--stage", "1")
    assert same_factors(parse_factorization(out), parse_factorization("@doubled 2\nT[1,2]"))
    code, _, err = run(capsys, "regenerate", "kpoint", "--k", "4", "--stage", "9")
    assert code == 2 and "--stage" in err
    code, _, _ = run(capsys, "regenerate", "kpoint", "--k", "1")
    assert code == 2


def test_five_point(capsys):
    code, out, _ = run(capsys, "regenerate", "five-point-case1", "--stage", "3")
    assert code == 0
    assert same_factors(parse_factorization(out), fixture("five_point_final.dsl"))
    code, _, _ = run(capsys, "regenerate", "five-point-case1", "--stage", "4")
    assert code == 2


def test_audit(capsys):
    code, out, _ = run(capsys, "audit-f222", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert doc["total"] == 1260
    assert doc["subtotals"] == {"parasitic": 800, "three_points": 80, "branch": 2, "six_points": 378}
    assert all(doc["forgetting"][f"f{i}"] == 2 for i in range(1, 19))
    assert doc["vertex_product"]["degree_delta"] == 0


def test_audit_flags_the_missing_branch_point(capsys):
    code, out, _ = run(capsys, "audit-f222", "--skip", "14", "--json")
    doc = json.loads(out)
    assert code == 1 and doc["total"] == 1259 and not doc["checks"]["total"]


def test_audit_without_fixtures(tmp_path, capsys):
    code, out, err = run(capsys, "audit-f222", "--input", str(tmp_path), "--json")
    assert code == 2 and "arrangement.json" in err
    assert json.loads(out)["missing"] == ["arrangement.json"]


def test_verify_commands(tmp_path, capsys):
    a = tmp_path / "a.dsl"
    a.write_text("@strands 3\nZ2[1,2] Z2[1,3]{above} Z2[2,3]\n")
    b = tmp_path / "b.dsl"
    b.write_text("@strands 3\nZ2[1,3]{above} Z2[2,3] Z2[1,2]\n")
    h = tmp_path / "h.dsl"
    h.write_text("@strands 3\nZ[1,2]\n")
    code, out, _ = run(capsys, "verify", "product", "--input", str(a))
    assert code == 0 and out.startswith("equal: True")
    code, out, _ = run(capsys, "verify", "hurwitz", "--input", str(a), "--input", str(b), "--json")
    assert code == 0 and json.loads(out)["status"] == "equivalent"
    code, out, _ = run(capsys, "verify", "invariance", "--input", str(a), "--input", str(h), "--depth", "4")
    assert code == 0 and out.startswith("equivalent")
    code, _, err = run(capsys, "verify", "hurwitz", "--input", str(a))
    assert code == 2 and "second" in err
    code, _, _ = run(capsys, "verify", "hurwitz", "--input", str(a), "--input", str(b), "--nodes", "0")
    assert code == 2
    d = tmp_path / "d.dsl"
    d.write_text("@doubled 2\nZ[1,1'] Z2[1,2]\n")
    code, out, _ = run(capsys, "verify", "forget-degree", "--input", str(d), "--pair", "1")
    assert code == 0 and out == "1\n"
    code, _, _ = run(capsys, "verify", "product", "--input", str(tmp_path / "missing.dsl"))
    assert code == 2


def cli(*argv, env=None):
    return subprocess.run([sys.executable, "-m", "braidmono.cli", *argv], capture_output=True, text=True,
                          env=env)


def test_output_is_deterministic():
    first = cli("regenerate", "five-point-case1", "--json")
    second = cli("regenerate", "five-point-case1", "--json")
    assert first.returncode == 0 and first.stdout == second.stdout


def test_fixture_directory_override(tmp_path):
    shutil.copytree(fixture_dir(), tmp_path / "fx")
    (tmp_path / "fx" / "f222" / "vertex_09.dsl").unlink()
    env = dict(os.environ, MONODROMY_FIXTURES=str(tmp_path / "fx"))
    res = cli("audit-f222", env=env)
    assert res.returncode == 2 and "vertex_09.dsl" in res.stderr
