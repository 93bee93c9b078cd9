import pytest

from latticeea.checks import FAIL, PASS, SKIPPED, SUITES, SuiteResult, check_all, run_suite
from latticeea.errors import Falsification
from latticeea.generators import chain

from conftest import corpus


@pytest.mark.parametrize("i", range(len(corpus())))
def test_no_suite_fails_on_the_corpus(i):
    name, E = corpus()[i]
    results = check_all(E)
    assert [r.name for r in results] == [s for s, _ in SUITES]
    failed = [(r.name, r.detail) for r in results if r.status == FAIL]
    assert not failed, name
    if E.is_lattice:
        skipped = [r.name for r in results if r.status == SKIPPED and not r.detail.startswith("cap")]
        assert not skipped, name


def test_falsification_is_reported_as_fail():
    def broken(E):
        raise Falsification("planted")

    r = run_suite("planted", broken, chain(3))
    assert r.status == FAIL and r.detail == "planted"


def test_cap_skips_are_labelled():
    assert SuiteResult("x", SKIPPED, 0, "cap: size 64 exceeds cap 12").label == "SKIPPED(cap)"
    assert SuiteResult("x", SKIPPED, 0, "hypothesis: not a lattice").label == SKIPPED
    assert SuiteResult("x", PASS).label == PASS


def test_only_selects_suites():
    assert [r.name for r in check_all(chain(4), ["axioms", "separation"])] == ["axioms", "separation"]
