import itertools
import random
from fractions import Fraction

import pytest

from tvg.intervals import EMPTY, REALS, IntervalSet
from tvg.matrix import TvgMatrix, lifetime_matrix

_ACCEPTANCE = {}
_REPORTS = []


def random_lifetime_matrix(rng: random.Random, n: int, density=0.5, scale=20, max_parts=3,
                           halves=True) -> TvgMatrix:
    """Lifetime matrix with REALS diagonal and random closed-interval unions elsewhere."""
    edges = {}
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                parts = []
                for _ in range(rng.randint(1, max_parts)):
                    den = 2 if halves else 1
                    a = Fraction(rng.randint(0, scale * den), den)
                    parts.append((a, a + Fraction(rng.randint(0, 6 * den), den)))
                edges[(i, j)] = IntervalSet(parts)
    return lifetime_matrix(range(n), edges)


def walk_lifetime_oracle(M: TvgMatrix, i: int, j: int, k: int) -> IntervalSet:
    """Union over all length-k walks i -> j of the intersection of their edge lifetimes."""
    out = EMPTY
    n = M.n
    for mid in itertools.product(range(n), repeat=k - 1):
        walk = (i,) + mid + (j,)
        life = REALS
        for a, b in zip(walk, walk[1:]):
            life = life & M.entries[a][b]
            if not life:
                break
        out = out | life
    return out


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    if "test_acceptance.py" in report.nodeid and "test_criterion_" in report.nodeid:
        name = report.nodeid.split("test_criterion_")[1]
        num = int(name.split("_")[0])
        _ACCEPTANCE[num] = (report.outcome, name, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        outcome, name, dur = _ACCEPTANCE[num]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {status}  ({name}, {dur:.1f} s)")
    for title, text in _REPORTS:
        terminalreporter.section(title, sep="-")
        for line in text.rstrip().splitlines():
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    """Attach a text block to the terminal summary."""
    def add(title, text):
        _REPORTS.append((title, text))
    return add


@pytest.fixture
def rng():
    return random.Random(12345)
