import json
import subprocess
import sys
from pathlib import Path

from opbar.dg import DgModule
from opbar.jsonio import (
    algebra_from_json,
    algebra_to_json,
    dgmodule_from_json,
    dgmodule_to_json,
    field_from_json,
    field_to_json,
    operad_from_json,
    operad_to_json,
    parse_field_flag,
)
from opbar.linalg import CoeffField
from opbar.modules import DgAlgebra, check_algebra
from opbar.operads import check_operad, commutative_operad, stasheff_operad

Q = CoeffField.rationals()
F2 = CoeffField.prime(2)

REPO = Path(__file__).resolve().parent.parent
DATA = REPO / "data"


def run_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "opbar.cli", *argv],
        capture_output=True,
        text=True,
        cwd=REPO,
    )


def test_field_round_trip():
    for f in (Q, F2, CoeffField.prime(7)):
        assert field_from_json(field_to_json(f)) == f
    assert parse_field_flag("F5") == CoeffField.prime(5)
    assert parse_field_flag("Q") == Q


def test_dgmodule_round_trip():
    mod = DgModule.from_data(
        Q, [("a", 0), ("b", 1), ("c", 1)], {"b": {"a": Q.of_int(-2)}, "c": {"a": Q.parse("1/3")}}
    )
    data = dgmodule_to_json(mod)
    back, f = dgmodule_from_json(data)
    assert {d: back.dim(d) for d in back.degrees()} == {0: 1, 1: 2}
    assert back.apply_diff(1, {"b": f.one()}) == {"a": f.of_int(-2)}


def test_algebra_round_trip():
    alg = DgAlgebra(
        F2,
        "comm",
        DgModule.from_data(F2, [("x", 1), ("x2", 2)]),
        {2: {("x", "x"): {"x2": F2.one()}}},
    )
    back, _ = algebra_from_json(algebra_to_json(alg))
    assert back.kind == "comm"
    assert back.op_apply(2, ("x", "x")) == {"x2": F2.one()}
    assert check_algebra(back, 3)


def test_operad_round_trip():
    for op in (commutative_operad(Q, 3), stasheff_operad(Q, 3)):
        data = operad_to_json(op, 3)
        back = operad_from_json(data)
        check_operad(back, 3, deep=True)
        assert {n: back.component(n).total_dim() for n in back.sigma.arities()} == {
            n: op.component(n).total_dim() for n in op.sigma.arities()
        }


def test_cli_bar_exterior():
    r = run_cli("bar", "--field", "F2", "--input", "data/exterior.json", "--max-degree", "12")
    assert r.returncode == 0
    lines = [l.split() for l in r.stdout.splitlines()[2:]]
    table = {int(d): int(v) for d, v in lines}
    assert table == {d: (1 if d % 2 == 0 and d >= 2 else 0) for d in range(0, 13)}


def test_cli_iterated_bar():
    r = run_cli("bar", "--iterations", "2", "--input", "data/exterior.json", "--field", "F2", "--max-degree", "6")
    assert r.returncode == 0
    lines = [l.split() for l in r.stdout.splitlines()[2:]]
    table = {int(d): int(v) for d, v in lines}
    assert table == {0: 0, 1: 0, 2: 0, 3: 1, 4: 0, 5: 1, 6: 1}


def test_cli_rejects_invalid_algebra():
    r = run_cli("bar", "--input", "data/nonassoc.json", "--max-degree", "6")
    assert r.returncode == 2
    assert "AlgebraCheckFailed" in r.stderr
    assert "structure relation" in r.stderr


def test_cli_cochains_loop_table(tmp_path):
    out = tmp_path / "s2.json"
    r = run_cli(
        "cochains", "--input", "data/s2_minimal.json", "--bar", "--field", "F2",
        "--max-degree", "8", "--output", str(out),
    )
    assert r.returncode == 0
    report = json.loads(out.read_text())
    assert report["degrees"] == {str(k): 1 for k in range(1, 9)}
    assert report["provenance"]["cohomological_degrees"] is True
    assert report["provenance"]["exact_in_window"] is True


def test_cli_cochains_export_trivial_cohomology():
    r = run_cli("cochains", "--input", "data/delta1.json", "--field", "Q")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    back, _ = algebra_from_json(data)
    from opbar.dg import homology

    assert all(v == 0 for v in homology(back.module).values())


def test_cli_malformed_input():
    r = run_cli("cochains", "--input", "data/exterior.json")
    assert r.returncode == 2


def test_cli_deterministic_reports(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        r = run_cli(
            "bar", "--field", "F2", "--input", "data/trunc.json",
            "--max-degree", "8", "--seed", "3", "--output", str(out),
        )
        assert r.returncode == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_verify_suite():
    r = run_cli("verify", "--suite", "stasheff", "--arity-bound", "6")
    assert r.returncode == 0
    assert "all 4 checks passed" in r.stdout


def test_cli_export_builtin():
    r = run_cli("export", "--builtin", "K", "--arity-bound", "2", "--field", "Q")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    back = operad_from_json(data)
    check_operad(back, 2)


def test_cli_quasi_iso_tables_match():
    r1 = run_cli("cochains", "--input", "data/s2_minimal.json", "--bar", "--field", "F2", "--max-degree", "8")
    r2 = run_cli("cochains", "--input", "data/s2_boundary.json", "--bar", "--field", "F2", "--max-degree", "8")
    assert r1.returncode == 0 and r2.returncode == 0
    t1 = [l for l in r1.stdout.splitlines() if not l.startswith("report")]
    t2 = [l for l in r2.stdout.splitlines() if not l.startswith("report")]
    assert t1 == t2


def test_cli_threads_env(tmp_path, monkeypatch):
    out = tmp_path / "t.json"
    r = subprocess.run(
        [sys.executable, "-m", "opbar.cli", "bar", "--field", "F2", "--input", "data/exterior.json",
         "--max-degree", "6", "--output", str(out)],
        capture_output=True, text=True, cwd=REPO, env={"OPBAR_THREADS": "2", "PATH": "/usr/bin:/bin"},
    )
    assert r.returncode == 0
    assert json.loads(out.read_text())["provenance"]["threads"] == 2
