import random
from fractions import Fraction

import pytest
from hypothesis import settings

from latpair.exactlin import Matrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def rand_fraction(rng, bound):
    num = 0
    while num == 0:
        num = rng.randint(-bound, bound)
    return Fraction(num, rng.randint(1, bound))


@pytest.fixture
def rng():
    return random.Random(12345)


def mat(text, radicand=0):
    from latpair.textio import parse_matrix

    return parse_matrix(text, radicand)


def identity(d):
    return Matrix.identity(d)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
