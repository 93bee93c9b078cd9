import io
import json

import pytest

from latticeea.cli import main
from latticeea.generators import NAMED, boolean
from latticeea.instance_io import dumps


def run(argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, make in NAMED.items():
        p = tmp_path / f"{name}.json"
        p.write_text(dumps(make()))
        paths[name] = str(p)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"elements": ["0", "a", "1"], "plus": [["a", "a", "1"], ["1", "a", "1"]]}))
    paths["bad"] = str(bad)
    return paths


def test_separate_prints_the_intervals(files):
    code, out, _ = run(["separate", files["HS2C3"], "a", "b"])
    assert code == 0
    assert out.splitlines()[0] == "up=[a,1], down=[0,b]"


def test_gen_pipes_into_analyze(monkeypatch):
    code, inst, _ = run(["gen", "hsum(chain:3 * 2)"])
    assert code == 0
    code, out, _ = run(["analyze", "-", "--format", "machine"], stdin=inst, monkeypatch=monkeypatch)
    doc = json.loads(out)
    assert code == 0
    assert doc["instance"]["size"] == 4
    assert len(doc["structure"]["blocks"]) == 2
    assert doc["structure"]["almost_orthogonality"]["witnesses"]


def test_verify_reports_violations_with_exit_2(files):
    code, out, _ = run(["verify", files["bad"], "--format", "machine"])
    doc = json.loads(out)
    assert code == 2
    assert doc["validation"]["status"] == "FAIL"
    assert any(v["axiom"] == "Eiv" and v["witness"][:2] == ["1", "a"] for v in doc["validation"]["violations"])


def test_verify_accepts_a_valid_instance(files):
    assert run(["verify", files["B4"]])[0] == 0


def test_unknown_label_is_a_usage_error(files):
    code, _, err = run(["separate", files["HS2C3"], "a", "zz"])
    assert code == 1 and "zz" in err


def test_family_syntax_error_shows_the_column():
    code, _, err = run(["family", "hsum(chain:3 * inf"])
    assert code == 1 and "column 19" in err and "^" in err


def test_bad_arguments_exit_1(tmp_path):
    assert run(["nonsense"])[0] == 1
    assert run(["separate"])[0] == 1
    assert run(["analyze", str(tmp_path / "missing.json")])[0] == 1


def test_invalid_instance_for_analysis_is_an_input_error(files):
    assert run(["analyze", files["bad"]])[0] == 1


def test_caps_give_exit_3(tmp_path, monkeypatch):
    assert run(["enumerate", "--max-size", "9"])[0] == 3
    p = tmp_path / "b6.json"
    p.write_text(dumps(boolean(6)))
    assert run(["states", str(p), "--extreme"])[0] == 3
    monkeypatch.setenv("EA_CAPS", "states=2")
    assert run(["states", str(p), "--extreme"])[0] == 3


def test_malformed_caps_are_a_usage_error(files, monkeypatch):
    monkeypatch.setenv("EA_CAPS", "nope=3")
    assert run(["verify", files["B4"]])[0] == 1


@pytest.mark.parametrize("name", sorted(NAMED))
def test_check_all_passes_on_named_instances(files, name):
    code, out, _ = run(["check-all", files[name], "--format", "machine"])
    assert code == 0
    assert all(c["status"] in ("PASS", "SKIPPED", "SKIPPED(cap)") for c in json.loads(out)["checks"])


def test_states_and_extensions(files):
    code, out, _ = run(["states", files["B4"], "--extreme", "--extend-from", "sharp", "--format", "machine"])
    doc = json.loads(out)
    assert code == 0 and len(doc["extreme"]) == 2
    assert doc["extension"]["status"] == "PASS"
    code, out, _ = run(["states", files["HSB4B4"], "--extend-from", "block:1", "--format", "machine"])
    assert code == 0 and json.loads(out)["extension"]["subalgebra"] == ["0", "p2", "q2", "1"]
    assert run(["states", files["HSB4B4"], "--extend-from", "block:9"])[0] == 1
    assert run(["states", files["HSB4B4"], "--extend-from", "e1"])[0] == 0


def test_other_commands(files):
    code, out, _ = run(["blocks", files["HSB4B4"]])
    assert code == 0 and out.startswith("2 block(s)")
    code, out, _ = run(["decompose", files["B4"], "1"])
    assert code == 0 and out.startswith("1 = p (+) q")
    code, out, _ = run(["partition", files["HS2C3"], "a", "1"])
    assert code == 0 and out.startswith("head=[0,a], tail={[b,1], [1,1]}")
    code, out, _ = run(["cover", files["HSB4B4"], "p1", "q1", "--format", "machine"])
    assert code == 0 and len(json.loads(out)["per_block"]) == 2
    code, out, _ = run(["complete", files["HS2C3"], "--format", "machine"])
    doc = json.loads(out)
    assert code == 0 and len(doc["cuts"]) == 4 and doc["isomorphic_to_source"]
    code, out, _ = run(["enumerate", "--max-size", "4", "--format", "machine"])
    assert code == 0 and json.loads(out)["counts"] == {"2": 1, "3": 1, "4": 3}


def test_family_command():
    code, out, _ = run(["family", "hsum(boolean:inf * 2)", "--format", "machine"])
    flags = json.loads(out)["flags"]
    assert code == 0
    assert flags["tau_i_hausdorff"] == {
        "value": "TRUE",
        "justification": "block-finite-hausdorff",
        "premises": [["block_finite", "TRUE"], ["archimedean", "TRUE"], ["atomic", "TRUE"]],
    }
    code, out, _ = run(["family", "hsum(chain:3 * inf)"])
    assert "tau_i_equals_tau_o" in out and "UNKNOWN" in out


def test_dot_with_highlights(files):
    code, out, _ = run(["dot", files["HS2C3"], "--highlight", "separate:a,b", "--highlight", "interval:0,a"])
    assert code == 0 and out.startswith("digraph") and 'label="up [a,1]"' in out
    assert run(["dot", files["HS2C3"], "--highlight", "bogus:a,b"])[0] == 1
    assert run(["dot", files["HS2C3"], "--highlight", "partition:a,1"])[0] == 0
    assert run(["dot", files["HSB4B4"], "--highlight", "cover:p1,q1"])[0] == 0
