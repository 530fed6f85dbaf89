"""Brute-force oracles shared by the tests.  Deliberately naive: itertools
and math.comb only, nothing from the package."""

from itertools import combinations
from math import comb

import pytest


def naive_alpha(gens, n, over=None):
    """alpha(J/I) for squarefree generators given as sets of 1-based indices."""
    gens = [frozenset(g) for g in gens]
    over = None if over is None else [frozenset(g) for g in over]
    out = []
    for j in range(n + 1):
        c = 0
        for A in combinations(range(1, n + 1), j):
            A = set(A)
            in_I = any(g <= A for g in gens)
            in_J = True if over is None else any(g <= A for g in over)
            c += in_J and not in_I
        out.append(c)
    return out


def naive_beta(alpha, q, k):
    return sum((-1) ** (k - j) * comb(q - j, k - j) * alpha[j] for j in range(k + 1))


def naive_hdepth(alpha):
    d = max(j for j, a in enumerate(alpha) if a)
    for q in range(d, -1, -1):
        if all(naive_beta(alpha, q, k) >= 0 for k in range(q + 1)):
            return q
    raise AssertionError("no level accepted")


@pytest.fixture
def patru():
    return [{1, 2}, {1, 3}, {1, 4}, {1, 5, 6}], 6


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
