"""Shared fixtures, naive oracles and the acceptance summary printer."""

import itertools

import pytest

from chaoslab.algebra import FiniteCarrier, Full, semigroup_from_generators
from chaoslab.finite import FiniteAction

E, M = 0, 1


def make_e1() -> FiniteAction:
    """X = {0,1,2}, S = {e, m} with m: 0->0, 1->0, 2->2, built by hand."""
    sg = semigroup_from_generators([(0, 0, 2)])
    return FiniteAction(sg, [[0, 0], [1, 0], [2, 2]])


@pytest.fixture
def e1() -> FiniteAction:
    return make_e1()


# naive definitional oracles, deliberately free of bitmasks and numpy

def naive_prox(action):
    X, S = range(action.phase), action.semigroup.elements
    return {(x, y) for x in X for y in X if any(action.act[x][s] == action.act[y][s] for s in S)}


def naive_separating(action, x, y):
    return {s for s in action.semigroup.elements if action.act[x][s] != action.act[y][s]}


def naive_in_ideal(ideal, subset):
    if isinstance(ideal, Full):
        return True
    assert isinstance(ideal, FiniteCarrier)
    return set(subset) <= set(ideal.carrier)


def naive_asym(action, ideal):
    X = range(action.phase)
    return {(x, y) for x in X for y in X if naive_in_ideal(ideal, naive_separating(action, x, y))}


def naive_scrambled(action, ideal):
    return naive_prox(action) - naive_asym(action, ideal)


def naive_max_scrambled(action, ideal):
    pairs = naive_scrambled(action, ideal)
    for r in range(action.phase, 1, -1):
        for combo in itertools.combinations(range(action.phase), r):
            if all((a, b) in pairs for a, b in itertools.combinations(combo, 2)):
                return combo
    return ()


# acceptance summary ---------------------------------------------------------

ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


def record_acceptance(number: int, title: str, ok: bool, seconds: float):
    ACCEPTANCE[number] = (title, "PASS" if ok else "FAIL", seconds)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, status, secs = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{status}] criterion {n:2d}: {title} ({secs:.2f} s)")
