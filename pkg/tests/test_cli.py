import json
import subprocess
import sys
from pathlib import Path

import pytest

from surfext import catalog
from surfext.cli import EXIT_INPUT, EXIT_NOT_LC, EXIT_OK, main
from surfext.dualgraph import determinant, dumps, loads

GRAPHS = Path(__file__).resolve().parent.parent / "graphs"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, g, name="g.json"):
    path = tmp_path / name
    path.write_text(dumps(g))
    return str(path)


def test_analyze_e8_at_7(capsys):
    code, out, _ = run(capsys, "analyze", str(GRAPHS / "e8.json"), "--char", "7", "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert set(doc) == {"input_digest", "discrepancies", "class", "trace", "verdicts", "citations"}
    assert doc["verdicts"]["log_ext_1forms"]["value"] == "holds"
    assert doc["verdicts"]["reg_ext_1forms"]["value"] == "holds"
    assert len(doc["trace"]) == 8
    assert all(v == "0/1" for v in doc["discrepancies"].values())
    assert doc["class"]["lc_class"]["tag"] == "other-quotient-smooth"


def test_analyze_e8_at_5(capsys):
    code, out, _ = run(capsys, "analyze", str(GRAPHS / "e8.json"), "--char", "5", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["trace"] == []
    assert doc["verdicts"]["log_ext_1forms"]["value"] == "fails-by-example"
    assert doc["verdicts"]["reg_ext_1forms"]["value"] == "unknown"


def test_analyze_text_mode(capsys):
    code, out, _ = run(capsys, "analyze", str(GRAPHS / "veronese3.json"), "--char", "3")
    assert code == EXIT_OK
    assert "E: -1/3" in out and "reg_ext_1forms: fails" in out


def test_json_output_is_deterministic():
    cmd = [sys.executable, "-m", "surfext", "analyze", str(GRAPHS / "e7.json"), "--char", "7", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first


def test_malformed_input_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"curves": [{"id": "A", "self": -2}], "edges": [["A", "B", 1]]}))
    code, _, err = run(capsys, "analyze", str(bad), "--char", "7")
    assert code == EXIT_INPUT and "$.edges[0]" in err
    bad.write_text("{not json")
    assert run(capsys, "classify", str(bad))[0] == EXIT_INPUT
    assert run(capsys, "classify", str(tmp_path / "missing.json"))[0] == EXIT_INPUT


def test_not_contractible_or_not_lc_exits_1(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", write(tmp_path, catalog.cycle([2, 2, 2])), "--char", "7")
    assert code == EXIT_NOT_LC and "not contractible" in err
    not_lc = write(tmp_path, catalog.star([[2], [3], [7]], 3), "n.json")
    assert run(capsys, "analyze", not_lc, "--char", "7")[0] == EXIT_NOT_LC
    assert run(capsys, "classify", not_lc)[0] == EXIT_NOT_LC
    assert run(capsys, "mmp", not_lc, "--char", "7")[0] == EXIT_NOT_LC


def test_bad_prime_is_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["analyze", str(GRAPHS / "e8.json"), "--char", "6"])
    assert err.value.code == 2


def test_verify_e8(capsys):
    code, out, _ = run(capsys, "verify", "e8", "--char", "3")
    assert code == EXIT_OK and "PASS" in out and "w^9" in out
    code, out, _ = run(capsys, "verify", "e8", "--char", "5", "--json")
    doc = json.loads(out)
    assert doc["passed"] and doc["computed"]["scalar"] == 2 and doc["pole_order"] == 5
    with pytest.raises(SystemExit) as err:
        main(["verify", "e8", "--char", "7"])
    assert err.value.code == 2


def test_verify_veronese(capsys):
    code, out, _ = run(capsys, "verify", "veronese", "--char", "2", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["passed"] and doc["pole_order"] == [1, 1]


def test_cones(capsys):
    code, out, _ = run(capsys, "cones", "calabi-yau", "5", "7", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["d"] == 1 and doc["cone_discrepancy"] == -1
    code, out, _ = run(capsys, "cones", "fano", "4", "7")
    assert code == 1 and "infeasible" in out


def test_classify_with_rationale(capsys):
    code, out, _ = run(capsys, "classify", str(GRAPHS / "d5.json"), "--char", "7", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["tag"] == "dihedral"
    assert doc["rationale"]["route"] == "prescribed order then lift-elem"
    code, out, _ = run(capsys, "classify", str(GRAPHS / "cusp333.json"))
    assert code == EXIT_OK and "cusp" in out


def test_mmp_search_and_fixed_order(capsys, tmp_path):
    code, out, _ = run(capsys, "mmp", str(GRAPHS / "e6.json"), "--char", "5", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["found"] and len(doc["order"]) == 6
    path = write(tmp_path, catalog.a_n(3))
    code, out, _ = run(capsys, "mmp", path, "--char", "7", "--order", "E1,E2,E3", "--json")
    assert code == EXIT_OK and json.loads(out)["order"] == ["E1", "E2", "E3"]
    code, _, err = run(capsys, "mmp", path, "--char", "7", "--order", "E1,E1")
    assert code == EXIT_INPUT and "step 2" in err


def test_blowup_round_trip(capsys, tmp_path):
    src = GRAPHS / "e7.json"
    out_path = tmp_path / "b.json"
    code, _, _ = run(capsys, "blowup", str(src), "--center", "C", "--center", "A1_1", "-o", str(out_path))
    assert code == EXIT_OK
    before = loads(src.read_text())
    after = loads(out_path.read_text())
    assert abs(determinant(after)) == abs(determinant(before))
    assert len(after) == len(before) + 1
    assert dumps(loads(out_path.read_text())) == out_path.read_text()
    code, out, _ = run(capsys, "blowup", str(src), "--center", "C:1", "--json")
    assert code == EXIT_OK and json.loads(out)["abs_det_preserved"]


def test_blowup_rejects_bad_centers(capsys):
    path = str(GRAPHS / "veronese3_boundary.json")
    assert run(capsys, "blowup", path, "--center", "D")[0] == EXIT_INPUT
    assert run(capsys, "blowup", path, "--center", "E", "--center", "E")[0] == EXIT_INPUT
    assert run(capsys, "blowup", path, "--center", "nope")[0] == EXIT_INPUT
