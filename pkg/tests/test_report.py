import json
from pathlib import Path

import pytest

from latticeea.generators import NAMED, chain
from latticeea.instance_io import dumps, loads
from latticeea.report import analyze, digest, has_failure, render_human, to_json

from conftest import enumerated

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("name", sorted(NAMED))
def test_machine_reports_match_golden_files(name):
    assert to_json(analyze(NAMED[name]())) == (GOLDEN / f"{name}.json").read_text()


@pytest.mark.parametrize("name", sorted(NAMED))
def test_machine_reports_round_trip(name):
    doc = analyze(NAMED[name]())
    text = to_json(doc)
    assert json.loads(text) == doc
    assert to_json(json.loads(text)) == text


def test_digest_depends_only_on_the_instance():
    E = chain(4)
    assert digest(E) == digest(loads(dumps(E)))
    assert len(digest(E)) == 16 and digest(E) != digest(chain(5))


def test_every_check_carries_a_status():
    doc = analyze(chain(16))
    statuses = {c["status"] for c in doc["checks"]}
    assert statuses <= {"PASS", "FAIL", "SKIPPED", "SKIPPED(cap)"}
    assert "SKIPPED(cap)" in statuses and not has_failure(doc)


def test_non_lattice_report_marks_skipped_sections():
    E = next(E for _, E in enumerated() if not E.is_lattice)
    doc = analyze(E)
    assert doc["topology"]["status"] == "SKIPPED"
    assert doc["verdicts"]["lattice"] == "FALSE"
    assert not has_failure(doc)


def test_human_rendering_lists_every_section():
    text = render_human(analyze(NAMED["HS2C3"]()))
    for section in ("instance:", "structure:", "topology:", "completion:", "states:", "verdicts:", "checks:"):
        assert section in text
    assert "PASS          separation" in text


def test_has_failure_finds_nested_fail():
    assert has_failure({"a": [{"status": "FAIL"}]})
    assert not has_failure({"a": [{"status": "PASS"}], "status": "SKIPPED(cap)"})
