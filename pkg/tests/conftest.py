from functools import lru_cache

import pytest
from hypothesis import settings

from latticeea.corpus import constructed_corpus, enumerated_corpus
from latticeea.generators import NAMED

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@lru_cache(maxsize=None)
def enumerated(max_size=6):
    return tuple(enumerated_corpus(max_size))


@lru_cache(maxsize=None)
def constructed():
    return tuple(constructed_corpus())


def corpus():
    return enumerated() + constructed()


def lattice_corpus():
    return tuple((name, E) for name, E in corpus() if E.is_lattice)


@pytest.fixture(params=sorted(NAMED))
def named(request):
    return request.param, NAMED[request.param]()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.LINES):
            terminalreporter.write_line(line)
