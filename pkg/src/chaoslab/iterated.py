"""Iterated maps on finite metric spaces, seen as actions of N ∪ {0}.

The pair orbit ``n -> (f^n x, f^n y)`` of a self-map of a finite set is
eventually periodic, so every "for infinitely many n" quantifier is decided
exactly on the tail/cycle decomposition.  Distances are exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Optional, Sequence

from .errors import InvalidStructure


@dataclass(frozen=True)
class IteratedSystem:
    step: tuple
    metric: tuple

    def __post_init__(self):
        step = tuple(int(v) for v in self.step)
        m = len(step)
        if m == 0 or any(not 0 <= v < m for v in step):
            raise InvalidStructure("step must be a total self-map of a nonempty set")
        metric = tuple(tuple(Fraction(v) for v in row) for row in self.metric)
        if len(metric) != m or any(len(row) != m for row in metric):
            raise InvalidStructure("metric must be an m x m matrix")
        for x, y in itertools.product(range(m), repeat=2):
            d = metric[x][y]
            if d != metric[y][x]:
                raise InvalidStructure(f"metric is not symmetric at ({x},{y})")
            if (d == 0) != (x == y):
                raise InvalidStructure(f"metric does not separate points at ({x},{y})")
            if d < 0:
                raise InvalidStructure("metric must be nonnegative")
        for x, y, z in itertools.product(range(m), repeat=3):
            if metric[x][z] > metric[x][y] + metric[y][z]:
                raise InvalidStructure(f"triangle inequality fails at ({x},{y},{z})")
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "metric", metric)

    @classmethod
    def discrete(cls, step: Sequence[int]) -> IteratedSystem:
        m = len(step)
        return cls(step, [[0 if x == y else 1 for y in range(m)] for x in range(m)])

    @property
    def phase(self) -> int:
        return len(self.step)

    def dist(self, x: int, y: int) -> Fraction:
        return self.metric[x][y]

    def iterate(self, x: int, n: int) -> int:
        for _ in range(n):
            x = self.step[x]
        return x


class PairTrajectory(NamedTuple):
    tail: list
    cycle: list

    def state(self, n: int) -> tuple[int, int]:
        """``(f^n x, f^n y)`` read off the decomposition."""
        if n < len(self.tail):
            return self.tail[n]
        return self.cycle[(n - len(self.tail)) % len(self.cycle)]


def pair_trajectory(sys: IteratedSystem, x: int, y: int) -> PairTrajectory:
    seen: dict[tuple[int, int], int] = {}
    states = []
    state = (x, y)
    while state not in seen:
        seen[state] = len(states)
        states.append(state)
        state = (sys.step[state[0]], sys.step[state[1]])
    start = seen[state]
    return PairTrajectory(states[:start], states[start:])


def is_proximal(sys: IteratedSystem, x: int, y: int) -> bool:
    traj = pair_trajectory(sys, x, y)
    return any(u == v for u, v in traj.tail + traj.cycle)


def is_asymptotic(sys: IteratedSystem, x: int, y: int) -> bool:
    return all(u == v for u, v in pair_trajectory(sys, x, y).cycle)


def limsup_distance(sys: IteratedSystem, x: int, y: int) -> Fraction:
    return max(sys.dist(u, v) for u, v in pair_trajectory(sys, x, y).cycle)


@dataclass(frozen=True)
class ExhaustionFamily:
    """An increasing sequence ``F_1 ⊆ F_2 ⊆ ...`` of finite subsets of N ∪ {0}.

    ``entry(k)`` is the least ``n >= 1`` with ``k in F_n`` (``None`` if ``k``
    never enters), which makes the sequence increasing by construction.
    ``bound(n)`` is an upper bound for ``max F_n`` and certifies finiteness.
    """

    name: str
    entry: Callable[[int], Optional[int]]
    bound: Callable[[int], int]

    def contains(self, n: int, k: int) -> bool:
        first = self.entry(k)
        return first is not None and first <= n

    def members(self, n: int) -> list[int]:
        return [k for k in range(self.bound(n) + 1) if self.contains(n, k)]


def initial_segments() -> ExhaustionFamily:
    """``F_n = {0, ..., n}``."""
    return ExhaustionFamily("initial-segments", lambda k: max(k, 1), lambda n: n)


def doubling_segments() -> ExhaustionFamily:
    """``F_n = {0, ..., 2^n}``."""
    return ExhaustionFamily(
        "doubling-segments",
        lambda k: max(1, (k - 1).bit_length()),
        lambda n: 2 ** n,
    )


def evens_first() -> ExhaustionFamily:
    """``F_n = {0, ..., n} ∪ {even k <= 3n}``."""
    return ExhaustionFamily(
        "evens-first",
        lambda k: max(1, -(-k // 3)) if k % 2 == 0 else max(k, 1),
        lambda n: 3 * n,
    )


def even_numbers_only() -> ExhaustionFamily:
    """``F_n = {even k <= 2n}``; odd times never enter, so this does not exhaust."""
    return ExhaustionFamily(
        "even-numbers-only",
        lambda k: max(1, k // 2) if k % 2 == 0 else None,
        lambda n: 2 * n,
    )


STANDARD_FAMILIES = (initial_segments, doubling_segments, evens_first)


class RelativeWitness(NamedTuple):
    scrambled: bool
    limit: Fraction
    sequence: list


def scrambled_relative_witness(sys: IteratedSystem, x: int, y: int,
                               fam: ExhaustionFamily, terms: int = 8) -> RelativeWitness:
    """Decide scrambling relative to ``fam`` and exhibit the first witness terms.

    A sequence ``r_n`` outside ``F_n`` with a positive limit distance exists
    iff a cycle state is off the diagonal (push ``r_n`` past ``F_n`` inside
    that cycle position), or some time that never enters the family has
    positive distance (take the constant sequence).
    """
    traj = pair_trajectory(sys, x, y)
    tail, cycle = traj.tail, traj.cycle
    dists = [sys.dist(u, v) for u, v in cycle]
    best = max(dists)
    if best > 0:
        pos = dists.index(best)
        seq = []
        for n in range(1, terms + 1):
            k = len(tail) + pos
            while k <= fam.bound(n):
                k += len(cycle)
            seq.append(k)
        return RelativeWitness(True, best, seq)
    outside = [k for k in range(len(tail)) if fam.entry(k) is None]
    if outside:
        k = max(outside, key=lambda k: (sys.dist(*tail[k]), -k))
        d = sys.dist(*tail[k])
        if d > 0:
            return RelativeWitness(True, d, [k] * terms)
    return RelativeWitness(False, Fraction(0), [])


def is_scrambled_relative(sys: IteratedSystem, x: int, y: int, fam: ExhaustionFamily) -> bool:
    return scrambled_relative_witness(sys, x, y, fam, terms=1).scrambled


class ClaimsReport(NamedTuple):
    holds: bool
    counterexample: object = None
    pairs_checked: int = 0


def claims_check(sys: IteratedSystem,
                 families: Sequence[ExhaustionFamily] | None = None,
                 bound: int = 64) -> ClaimsReport:
    """Non-asymptotic pairs are exactly those scrambled relative to exhausting families."""
    if sys.phase > bound:
        raise ValueError(f"claims_check is limited to {bound} points")
    fams = list(families) if families is not None else [initial_segments()]
    if not any(f.name == "initial-segments" for f in fams):
        fams.insert(0, initial_segments())
    checked = 0
    for x, y in itertools.product(range(sys.phase), repeat=2):
        non_asym = not is_asymptotic(sys, x, y)
        for fam in fams:
            checked += 1
            if non_asym != is_scrambled_relative(sys, x, y, fam):
                return ClaimsReport(False, (x, y, fam.name), checked)
    return ClaimsReport(True, None, checked)


def as_finite_action(sys: IteratedSystem):
    """The monoid ``{f^0, f^1, ...}`` of distinct powers acting on the phase.

    Returns the action and the carrier of powers that occur only finitely
    often along ``n -> f^n`` (the pre-period of ``f`` in its monoid):
    asymptoticity in ``(X, N ∪ {0})`` is asymptoticity modulo that carrier.
    """
    from .algebra import FiniteCarrier, semigroup_from_generators
    from .finite import natural_action

    sg = semigroup_from_generators([sys.step])
    last = sg.size - 1
    index = sg.compose[last][1] if sg.size > 1 else 0  # f^N = f^index
    return natural_action(sg), FiniteCarrier(frozenset(range(index)))

