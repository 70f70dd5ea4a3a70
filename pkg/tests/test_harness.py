import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ybred.cli import main
from ybred.harness.checks import CaseResult, Report, compare_projective
from ybred.harness.io import SchemaError, dict_to_matrix, export_matrix, import_matrix, matrix_to_dict
from ybred.harness.suites import run_suite
from ybred.rational import reduce_verma, yang_r
from ybred.ring import MultiPoly, RingMatrix, qq
from ybred.trig import q_yang_r

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def test_projective_scalar_two():
    A = yang_r("u")
    c = compare_projective(A.scale(MultiPoly.const(2)), A)
    assert c.equal and str(c.scalar) == "2"


def test_projective_zero_vs_nonzero():
    Z = RingMatrix.zeros(4, 4)
    assert not compare_projective(Z, yang_r("u")).equal


@pytest.mark.parametrize("M", [yang_r("u"), q_yang_r(), reduce_verma("u", 2)], ids=["yang", "q_yang", "verma"])
def test_exact_round_trip(tmp_path, M):
    p = export_matrix(M, tmp_path / "m.json")
    N = import_matrix(p)
    assert N == M and N.kind == M.kind and N.cleared_power == M.cleared_power


def test_rational_entry_survives(tmp_path):
    M = RingMatrix([[MultiPoly.const(qq(3, 2))]])
    N = import_matrix(export_matrix(M, tmp_path / "m.json"))
    assert str(N.entries[0][0]) == "3/2"


@given(st.lists(st.tuples(finite, finite), min_size=4, max_size=4))
def test_complex_round_trip_bit_exact(vals):
    M = np.array([complex(a, b) for a, b in vals]).reshape(2, 2)
    N = dict_to_matrix(json.loads(json.dumps(matrix_to_dict(M)))).to_numpy()
    assert np.array_equal(N, M)


def test_schema_errors_have_location(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"dims": [[1],[1]],\n "ring": {"kind": "multipoly"}, oops}')
    with pytest.raises(SchemaError, match="line 2"):
        import_matrix(p)
    d = matrix_to_dict(yang_r("u"))
    d["entries"][1][2] = "1*u + x/y"
    with pytest.raises(SchemaError, match=r"entries\[1\]\[2\]"):
        dict_to_matrix(d)
    d = matrix_to_dict(yang_r("u"))
    d["ring"]["kind"] = "quaternion"
    with pytest.raises(SchemaError, match="kind"):
        dict_to_matrix(d)


def test_report_is_deterministic():
    a = run_suite("trig", seed=3).as_dict()
    b = run_suite("trig", seed=3).as_dict()
    for c in a["cases"] + b["cases"]:
        c["seconds"] = 0
    assert a == b


def test_parallel_merge_matches_serial():
    a = run_suite("rational", jobs=1)
    b = run_suite("rational", jobs=4)
    assert [c.case for c in a.cases] == [c.case for c in b.cases]
    assert [c.passed for c in a.cases] == [c.passed for c in b.cases]


def test_report_flags_failure():
    r = Report("x", cases=[CaseResult("a", True, True), CaseResult("b", False, False, 1.0)])
    assert not r.passed


def test_cli_build_verify_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["build", "--family", "yang", "--spectral", "u", "--out", str(out)]) == 0
    assert import_matrix(out) == yang_r("u")
    rep = tmp_path / "rep.json"
    assert main(["verify", "--suite", "trig", "--json", str(rep)]) == 0
    assert json.loads(rep.read_text())["passed"]
    assert main(["report", "--in", str(rep)]) == 0
    d = json.loads(rep.read_text())
    d["passed"] = False
    d["cases"][0]["passed"] = False
    rep.write_text(json.dumps(d))
    assert main(["report", "--in", str(rep)]) == 1


def test_cli_build_numeric(tmp_path):
    out = tmp_path / "m.json"
    assert main(["build", "--family", "modular", "--spins", "0,1;0,1", "--spectral", "0.2+0.1j",
                 "--out", str(out)]) == 0
    assert import_matrix(out).shape == (4, 4)


def test_selftest_passes():
    assert main(["selftest"]) == 0
