"""Finite semigroups, ideals on them, and a small symbolic cardinal arithmetic."""

from __future__ import annotations

import functools
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import BoundExceeded, ClosureExceedsCap, InvalidStructure

DEFAULT_CLOSURE_CAP = 512
DEFAULT_IDEAL_BOUND = 12
MAX_ALEPH_TIER = 3


# --------------------------------------------------------------------------
# Cardinals
# --------------------------------------------------------------------------


@functools.total_ordering
@dataclass(frozen=True)
class Cardinal:
    """Either a finite count or an aleph tier.

    ``Cardinal.aleph(0)`` is countably infinite, ``aleph(k)`` for ``k >= 1``
    are the uncountable tiers.  Only the order and the absorbing product
    are needed, so no further set theory is modelled.
    """

    infinite: bool
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("cardinal parameters are nonnegative")
        if self.infinite and self.value > MAX_ALEPH_TIER:
            raise ValueError(f"aleph tiers stop at {MAX_ALEPH_TIER}")

    @classmethod
    def finite(cls, n: int) -> Cardinal:
        return cls(False, n)

    @classmethod
    def aleph(cls, k: int) -> Cardinal:
        return cls(True, k)

    @classmethod
    def parse(cls, text: Union[str, int]) -> Cardinal:
        """Read ``"aleph1"``, ``"ℵ1"``, ``7`` or ``"7"``."""
        if isinstance(text, bool):
            raise ValueError(f"not a cardinal: {text!r}")
        if isinstance(text, int):
            return cls.finite(text)
        s = text.strip().lower()
        for prefix in ("aleph", "ℵ"):
            if s.startswith(prefix):
                return cls.aleph(int(s[len(prefix):]))
        if s.isdigit():
            return cls.finite(int(s))
        raise ValueError(f"not a cardinal: {text!r}")

    @property
    def is_uncountable(self) -> bool:
        return self.infinite and self.value >= 1

    def _key(self):
        return (self.infinite, self.value)

    def __lt__(self, other: Cardinal) -> bool:
        if not isinstance(other, Cardinal):
            return NotImplemented
        return self._key() < other._key()

    def __mul__(self, other: Cardinal) -> Cardinal:
        if self.infinite or other.infinite:
            # 0 * infinite is 0; never arises for group orders but keep it honest
            if self == ZERO or other == ZERO:
                return ZERO
            return max(self, other)
        return Cardinal.finite(self.value * other.value)

    def __add__(self, other: Cardinal) -> Cardinal:
        if self.infinite or other.infinite:
            return max(self, other)
        return Cardinal.finite(self.value + other.value)

    def __str__(self) -> str:
        return f"aleph{self.value}" if self.infinite else str(self.value)

    def to_json(self):
        return str(self) if self.infinite else self.value


ZERO = Cardinal.finite(0)
ONE = Cardinal.finite(1)
ALEPH0 = Cardinal.aleph(0)
ALEPH1 = Cardinal.aleph(1)
ALEPH2 = Cardinal.aleph(2)


def cardinal_sum(items: Iterable[Cardinal]) -> Cardinal:
    total = ZERO
    for c in items:
        total = total + c
    return total


class CardinalOps(NamedTuple):
    product: Cardinal
    max: Cardinal
    less_than: bool


def cardinal_ops(a: Cardinal, b: Cardinal) -> CardinalOps:
    return CardinalOps(a * b, max(a, b), a < b)


# --------------------------------------------------------------------------
# Semigroups
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteSemigroup:
    """A finite monoid given by its full composition table.

    ``compose[s][t]`` is the product ``st``; with a right action this means
    "first s, then t".  ``names`` optionally tags elements (for instance the
    parent index when the monoid was cut out of a larger one), and ``maps``
    holds the underlying self-maps when the monoid was generated by maps.
    """

    compose: tuple
    identity: int
    names: tuple | None = None
    maps: tuple | None = field(default=None, compare=False, repr=False)
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        table = tuple(tuple(int(v) for v in row) for row in self.compose)
        object.__setattr__(self, "compose", table)
        n = len(table)
        if n == 0:
            raise InvalidStructure("a semigroup with identity is nonempty")
        if any(len(row) != n for row in table):
            raise InvalidStructure("composition table must be square")
        if any(not 0 <= v < n for row in table for v in row):
            raise InvalidStructure("composition table entries out of range")
        if not 0 <= self.identity < n:
            raise InvalidStructure("identity index out of range")
        if self.names is not None and len(self.names) != n:
            raise InvalidStructure("names must label every element")
        if self.check:
            e = self.identity
            for s in range(n):
                if table[e][s] != s or table[s][e] != s:
                    raise InvalidStructure(f"identity law fails at element {s}")
            if not _is_associative(table):
                raise InvalidStructure("composition table is not associative")

    @property
    def size(self) -> int:
        return len(self.compose)

    @property
    def elements(self) -> range:
        return range(self.size)

    def mul(self, s: int, t: int) -> int:
        return self.compose[s][t]

    @functools.cached_property
    def is_abelian(self) -> bool:
        c = self.compose
        return all(c[s][t] == c[t][s] for s in self.elements for t in range(s))

    @functools.cached_property
    def is_group(self) -> bool:
        e = self.identity
        c = self.compose
        for s in self.elements:
            if not any(c[s][t] == e and c[t][s] == e for t in self.elements):
                return False
        return True

    def generated_by(self, gens: Iterable[int]) -> frozenset[int]:
        """Submonoid generated by ``gens`` (the identity is always adjoined)."""
        seen = {self.identity}
        gens = sorted(set(gens))
        queue = deque([self.identity])
        while queue:
            s = queue.popleft()
            for g in gens:
                t = self.compose[s][g]
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return frozenset(seen)

    def is_closed(self, subset: Iterable[int]) -> bool:
        sub = set(subset)
        return all(self.compose[s][t] in sub for s in sub for t in sub)


def _is_associative(table: tuple) -> bool:
    arr = np.asarray(table, dtype=np.int32)
    n = arr.shape[0]
    # (ab)c == a(bc), one slab of a at a time to bound memory
    step = max(1, 2_000_000 // max(1, n * n))
    for lo in range(0, n, step):
        a = arr[lo:lo + step]
        left = arr[a]  # [a, b, c] -> (ab)c
        right = np.take_along_axis(
            np.broadcast_to(a[:, None, :], (a.shape[0], n, n)),
            np.broadcast_to(arr[None, :, :], (a.shape[0], n, n)),
            axis=2,
        )  # [a, b, c] -> a(bc)
        if not np.array_equal(left, right):
            return False
    return True


def compose_maps(first: Sequence[int], then: Sequence[int]) -> tuple:
    """The map x -> then[first[x]] (apply ``first``, then ``then``)."""
    return tuple(then[v] for v in first)


def semigroup_from_generators(maps: Sequence[Sequence[int]],
                              cap: int = DEFAULT_CLOSURE_CAP) -> FiniteSemigroup:
    """Close ``{id} ∪ maps`` under composition.

    Elements are numbered in breadth-first order starting from the identity,
    so a single generator ``f`` yields ``f^0, f^1, ...`` in index order.
    The result carries the maps in ``.maps`` and acts on their domain
    through :func:`chaoslab.finite.natural_action`.
    """
    if not maps:
        raise ValueError("need at least one generator")
    m = len(maps[0])
    gens = []
    for g in maps:
        g = tuple(int(v) for v in g)
        if len(g) != m or any(not 0 <= v < m for v in g):
            raise ValueError("every generator must be a total self-map of one set")
        gens.append(g)
    ident = tuple(range(m))
    index = {ident: 0}
    elems = [ident]
    queue = deque([ident])
    while queue:
        s = queue.popleft()
        for g in gens:
            t = compose_maps(s, g)
            if t not in index:
                if len(elems) >= cap:
                    raise ClosureExceedsCap(
                        f"generated semigroup has more than {cap} elements")
                index[t] = len(elems)
                elems.append(t)
                queue.append(t)
    table = [[index[compose_maps(s, t)] for t in elems] for s in elems]
    # composition of maps is associative by construction
    return FiniteSemigroup(table, 0, maps=tuple(elems), check=False)


def semigroup_from_table(table: Sequence[Sequence[int]], identity: int) -> FiniteSemigroup:
    return FiniteSemigroup(table, identity)


def product_semigroup(factors: Sequence[FiniteSemigroup]) -> FiniteSemigroup:
    """Direct product with mixed-radix indices (first factor most significant)."""
    sizes = [f.size for f in factors]
    tuples = list(itertools.product(*(range(n) for n in sizes)))
    index = {t: i for i, t in enumerate(tuples)}
    table = [
        [index[tuple(f.compose[a][b] for f, a, b in zip(factors, s, t))] for t in tuples]
        for s in tuples
    ]
    identity = index[tuple(f.identity for f in factors)]
    return FiniteSemigroup(table, identity, names=tuple(tuples), check=False)


# --------------------------------------------------------------------------
# Ideals
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteCarrier:
    """The ideal of all subsets of ``carrier``."""

    carrier: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "carrier", frozenset(int(s) for s in self.carrier))

    def mask(self) -> int:
        return sum(1 << s for s in self.carrier)

    def __str__(self):
        return "P({" + ",".join(map(str, sorted(self.carrier))) + "})"


@dataclass(frozen=True)
class CardinalBound:
    """The ideal ``{B : |B| < kappa}`` with ``kappa`` infinite."""

    kappa: Cardinal

    def __post_init__(self):
        if not self.kappa.infinite:
            raise ValueError("cardinal-bound ideals need an infinite bound")

    def __str__(self):
        return f"{{B : |B| < {self.kappa}}}"


@dataclass(frozen=True)
class Full:
    """The ideal of all subsets."""

    def __str__(self):
        return "P(S)"


IdealSpec = Union[FiniteCarrier, CardinalBound, Full]

P_FIN = CardinalBound(ALEPH0)
P_COUNT = CardinalBound(ALEPH1)


def ideal_contains(ideal: IdealSpec, subset) -> bool:
    """Membership test; ``subset`` is a set for carriers, a Cardinal for bounds."""
    if isinstance(ideal, Full):
        return True
    if isinstance(ideal, FiniteCarrier):
        if isinstance(subset, Cardinal):
            raise TypeError("finite-carrier ideals need an explicit subset")
        return set(subset) <= ideal.carrier
    if isinstance(ideal, CardinalBound):
        if not isinstance(subset, Cardinal):
            subset = Cardinal.finite(len(set(subset)))
        return subset < ideal.kappa
    raise TypeError(f"not an ideal: {ideal!r}")


def is_full_on(ideal: IdealSpec, sg: FiniteSemigroup) -> bool:
    """Whether ``ideal`` is the power set of the semigroup's element set."""
    if isinstance(ideal, Full):
        return True
    if isinstance(ideal, FiniteCarrier):
        return ideal.carrier >= frozenset(sg.elements)
    # every finite set lies below an infinite bound
    return True


def is_invariant_ideal(ideal: IdealSpec, sg: FiniteSemigroup) -> bool:
    if isinstance(ideal, (Full, CardinalBound)):
        return True
    carrier = ideal.carrier
    return all(sg.compose[a][s] in carrier for a in carrier for s in sg.elements)


def enumerate_ideals(sg: FiniteSemigroup, bound: int = DEFAULT_IDEAL_BOUND) -> list[FiniteCarrier]:
    """Every ideal on ``sg``, one per carrier, ordered by carrier bitmask.

    The last entry has the whole element set as carrier, i.e. equals P(S);
    :func:`is_full_on` identifies it.
    """
    n = sg.size
    if n > bound:
        raise BoundExceeded(f"|S| = {n} exceeds the ideal enumeration bound {bound}")
    return [FiniteCarrier(frozenset(i for i in range(n) if mask >> i & 1))
            for mask in range(1 << n)]
