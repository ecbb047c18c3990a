import sys
from fractions import Fraction

import pytest
from hypothesis import settings

from quiverdmod.corpus import corpus, resonant_controls
from quiverdmod.verma import build_verma

settings.register_profile("repo", max_examples=60, deadline=None)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def corpus_vermas():
    out = {}
    for name, (arr, w) in corpus().items():
        out[name] = (arr, w, build_verma(arr, w))
    return out


@pytest.fixture(scope="session")
def controls():
    return resonant_controls()


def F(*xs):
    return [Fraction(x) for x in xs]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
