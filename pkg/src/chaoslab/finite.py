"""Definition-level dynamics of finite transformation semigroups.

A finite Hausdorff phase space is discrete and its only compatible
uniformity is generated by the diagonal.  Every "for all entourages"
quantifier therefore collapses to a single check against the diagonal:

* ``(x, y)`` is proximal iff ``xs = ys`` for some ``s``;
* ``(x, y)`` is asymptotic modulo an ideal iff its disagreement set
  ``{s : xs != ys}`` lies in the ideal.

Disagreement sets are kept as bitmasks over the semigroup, which makes all
relation computations cheap enough to serve as brute-force oracles.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .algebra import (
    CardinalBound,
    FiniteCarrier,
    FiniteSemigroup,
    Full,
    IdealSpec,
    enumerate_ideals,
    is_full_on,
    product_semigroup,
)
from .errors import (
    BoundExceeded,
    HypothesisViolated,
    IdealKindMismatch,
    InvalidStructure,
    NotClosed,
    NotEquivalence,
    NotEquivariant,
    NotGenerating,
    NotInvariant,
    PhaseTooLarge,
    SemigroupTooLarge,
)

MAX_PRODUCT_PHASE = 4096
MAX_PRODUCT_SEMIGROUP = 512
MAX_CLIQUE_PHASE = 64


@dataclass(frozen=True)
class FiniteAction:
    """A right action of a finite monoid on ``{0, ..., phase-1}``.

    ``act[x][s]`` is ``xs``.  ``labels`` optionally names phase points
    (tuples for products, frozensets of classes for quotients, ...).
    """

    semigroup: FiniteSemigroup
    act: tuple
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        table = tuple(tuple(int(v) for v in row) for row in self.act)
        object.__setattr__(self, "act", table)
        m, n = len(table), self.semigroup.size
        if m == 0:
            raise InvalidStructure("phase space must be nonempty")
        for x, row in enumerate(table):
            if len(row) != n:
                raise InvalidStructure(f"act row {x} must have one entry per semigroup element")
            if any(not 0 <= v < m for v in row):
                raise InvalidStructure(f"act row {x} leaves the phase space")
        if self.labels is not None and len(self.labels) != m:
            raise InvalidStructure("labels must name every phase point")
        arr = np.asarray(table)
        e = self.semigroup.identity
        if not np.array_equal(arr[:, e], np.arange(m)):
            raise InvalidStructure("identity must act trivially")
        comp = np.asarray(self.semigroup.compose)
        # x(st) == (xs)t
        if not np.array_equal(arr[:, comp], arr[arr]):
            raise InvalidStructure("action is not compatible with composition")

    @property
    def phase(self) -> int:
        return len(self.act)

    @property
    def points(self) -> range:
        return range(self.phase)

    @functools.cached_property
    def _disagreement(self) -> tuple:
        """``[x][y]`` -> bitmask of ``{s : xs != ys}``."""
        arr = np.asarray(self.act)
        n = self.semigroup.size
        nbytes = (n + 7) // 8
        masks = []
        for x in self.points:
            bits = np.packbits(arr[x][None, :] != arr, axis=1, bitorder="little")
            masks.append(tuple(int.from_bytes(row.tobytes()[:nbytes], "little") for row in bits))
        return tuple(masks)

    def disagreement(self, x: int, y: int) -> frozenset[int]:
        """``{s : xs != ys}``."""
        mask = self._disagreement[x][y]
        return frozenset(s for s in self.semigroup.elements if mask >> s & 1)

    def orbit(self, x: int) -> frozenset[int]:
        return frozenset(self.act[x])


def natural_action(sg: FiniteSemigroup) -> FiniteAction:
    """The action of a map-generated monoid on the domain of its maps."""
    if sg.maps is None:
        raise ValueError("semigroup was not generated by maps")
    m = len(sg.maps[0])
    return FiniteAction(sg, [[sg.maps[s][x] for s in sg.elements] for x in range(m)])


def trivial_action(sg: FiniteSemigroup, phase: int) -> FiniteAction:
    return FiniteAction(sg, [[x] * sg.size for x in range(phase)])


# --------------------------------------------------------------------------
# Pair relations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PairRelation:
    base: int
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset((int(a), int(b)) for a, b in self.pairs))

    @classmethod
    def diagonal(cls, base: int) -> PairRelation:
        return cls(base, frozenset((x, x) for x in range(base)))

    @classmethod
    def total(cls, base: int) -> PairRelation:
        return cls(base, frozenset(itertools.product(range(base), repeat=2)))

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.pairs)

    def __le__(self, other: PairRelation) -> bool:
        return self.pairs <= other.pairs

    def __sub__(self, other: PairRelation) -> PairRelation:
        return PairRelation(self.base, self.pairs - other.pairs)

    def __and__(self, other: PairRelation) -> PairRelation:
        return PairRelation(self.base, self.pairs & other.pairs)

    def __or__(self, other: PairRelation) -> PairRelation:
        return PairRelation(self.base, self.pairs | other.pairs)

    def sorted(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    def off_diagonal(self) -> PairRelation:
        return PairRelation(self.base, frozenset(p for p in self.pairs if p[0] != p[1]))

    def to_matrix(self) -> np.ndarray:
        mat = np.zeros((self.base, self.base), dtype=bool)
        for a, b in self.pairs:
            mat[a, b] = True
        return mat

    def is_reflexive(self) -> bool:
        return all((x, x) in self.pairs for x in range(self.base))

    def is_symmetric(self) -> bool:
        return all((b, a) in self.pairs for a, b in self.pairs)

    def is_transitive(self) -> bool:
        m = self.to_matrix().astype(np.int64)
        return not np.any((m @ m > 0) & ~self.to_matrix())

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def image(self, f: Sequence[int], base: int) -> PairRelation:
        return PairRelation(base, frozenset((f[a], f[b]) for a, b in self.pairs))


def _carrier_mask(action: FiniteAction, ideal: IdealSpec) -> int:
    if isinstance(ideal, Full):
        return (1 << action.semigroup.size) - 1
    if isinstance(ideal, FiniteCarrier):
        return ideal.mask()
    if isinstance(ideal, CardinalBound):
        raise IdealKindMismatch("cardinal-bound ideals are only meaningful on infinite groups")
    raise TypeError(f"not an ideal: {ideal!r}")


def prox_pairs(action: FiniteAction) -> PairRelation:
    everything = (1 << action.semigroup.size) - 1
    d = action._disagreement
    return PairRelation(action.phase, frozenset(
        (x, y) for x in action.points for y in action.points if d[x][y] != everything))


def asym_pairs(action: FiniteAction, ideal: IdealSpec) -> PairRelation:
    allowed = _carrier_mask(action, ideal)
    d = action._disagreement
    return PairRelation(action.phase, frozenset(
        (x, y) for x in action.points for y in action.points if d[x][y] & ~allowed == 0))


def scrambled_pairs(action: FiniteAction, ideal: IdealSpec) -> PairRelation:
    return (prox_pairs(action) - asym_pairs(action, ideal)).off_diagonal()


# --------------------------------------------------------------------------
# Scrambled sets
# --------------------------------------------------------------------------


def _greedy_colour_bound(candidates: int, adj: Sequence[int]) -> int:
    """Number of colours in a greedy colouring of the candidate subgraph."""
    colours = 0
    rest = candidates
    while rest:
        colours += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~(1 << v) & ~adj[v]
            rest &= ~(1 << v)
    return colours


def max_clique(n: int, adj: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically smallest maximum clique of a graph given by bitmasks.

    Cliques are explored in lexicographic order of their sorted vertex
    tuples, so only strictly larger cliques ever replace the incumbent.
    """
    best: list[tuple[int, ...]] = [()]

    def expand(clique: list[int], candidates: int):
        if not candidates:
            if len(clique) > len(best[0]):
                best[0] = tuple(clique)
            return
        if len(clique) > len(best[0]):
            best[0] = tuple(clique)
        if len(clique) + _greedy_colour_bound(candidates, adj) <= len(best[0]):
            return
        rest = candidates
        while rest:
            if len(clique) + bin(rest).count("1") <= len(best[0]):
                return
            v = (rest & -rest).bit_length() - 1
            rest &= ~(1 << v)
            clique.append(v)
            expand(clique, rest & adj[v])
            clique.pop()

    expand([], (1 << n) - 1)
    return best[0]


def max_scrambled_set(action: FiniteAction, ideal: IdealSpec) -> tuple[int, ...]:
    """Largest scrambled set (lexicographically smallest on ties); () if none."""
    if action.phase > MAX_CLIQUE_PHASE:
        raise PhaseTooLarge(f"exact clique search is limited to {MAX_CLIQUE_PHASE} points")
    rel = scrambled_pairs(action, ideal)
    if not rel.is_symmetric():
        raise InvalidStructure("scrambled relation must be symmetric")
    adj = [0] * action.phase
    for a, b in rel.pairs:
        adj[a] |= 1 << b
    clique = max_clique(action.phase, adj)
    return clique if len(clique) >= 2 else ()


class ChaosVerdict(NamedTuple):
    verdict: bool
    max_scrambled_size: int
    witness: str
    criterion: str = "brute force"


def is_li_yorke_chaotic_mod(action: FiniteAction, ideal: IdealSpec) -> ChaosVerdict:
    best = max_scrambled_set(action, ideal)
    if not best:
        why = "no scrambled pair; a finite phase space has no uncountable scrambled set"
    else:
        why = (f"largest scrambled set {list(best)} has {len(best)} points; "
               "a finite phase space has no uncountable scrambled set")
    return ChaosVerdict(False, len(best), why)


# --------------------------------------------------------------------------
# Constructions
# --------------------------------------------------------------------------


def _mixed_radix(sizes: Sequence[int]) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(n) for n in sizes)))


def product_action(actions: Sequence[FiniteAction],
                   max_phase: int = MAX_PRODUCT_PHASE) -> FiniteAction:
    """Componentwise action of one shared semigroup on the product of phases."""
    if not actions:
        raise ValueError("need at least one factor")
    sg = actions[0].semigroup
    if any(a.semigroup != sg for a in actions):
        raise ValueError("all factors must share one semigroup")
    size = int(np.prod([a.phase for a in actions]))
    if size > max_phase:
        raise PhaseTooLarge(f"product phase {size} exceeds {max_phase}")
    coords = _mixed_radix([a.phase for a in actions])
    index = {c: i for i, c in enumerate(coords)}
    act = [[index[tuple(a.act[xi][s] for a, xi in zip(actions, c))] for s in sg.elements]
           for c in coords]
    return FiniteAction(sg, act, labels=tuple(coords))


class MixedProduct(NamedTuple):
    action: FiniteAction
    ideal: IdealSpec


def generated_product_ideal(semigroups: Sequence[FiniteSemigroup],
                            ideals: Sequence[IdealSpec],
                            product: FiniteSemigroup) -> IdealSpec:
    """Ideal on the product generated by all ``{s : s_beta in D}``, D in ideal beta."""
    carrier = set()
    for beta, (sg, ideal) in enumerate(zip(semigroups, ideals)):
        if isinstance(ideal, CardinalBound):
            raise IdealKindMismatch("mixed products take finite-carrier ideals")
        members = set(sg.elements) if isinstance(ideal, Full) else ideal.carrier
        carrier.update(i for i, s in enumerate(product.names) if s[beta] in members)
    if len(carrier) == product.size:
        return Full()
    return FiniteCarrier(frozenset(carrier))


def product_action_mixed(factors: Sequence[tuple[FiniteAction, IdealSpec]],
                         max_phase: int = MAX_PRODUCT_PHASE,
                         max_semigroup: int = MAX_PRODUCT_SEMIGROUP) -> MixedProduct:
    """Product of actions of distinct semigroups, with the generated product ideal."""
    if not factors:
        raise ValueError("need at least one factor")
    actions = [a for a, _ in factors]
    sgs = [a.semigroup for a in actions]
    size = int(np.prod([a.phase for a in actions]))
    if size > max_phase:
        raise PhaseTooLarge(f"product phase {size} exceeds {max_phase}")
    order = int(np.prod([s.size for s in sgs]))
    if order > max_semigroup:
        raise SemigroupTooLarge(f"product semigroup {order} exceeds {max_semigroup}")
    prod_sg = product_semigroup(sgs)
    coords = _mixed_radix([a.phase for a in actions])
    index = {c: i for i, c in enumerate(coords)}
    act = [[index[tuple(a.act[xi][si] for a, xi, si in zip(actions, c, s))]
            for s in prod_sg.names] for c in coords]
    ideal = generated_product_ideal(sgs, [i for _, i in factors], prod_sg)
    return MixedProduct(FiniteAction(prod_sg, act, labels=tuple(coords)), ideal)


def componentwise_relation(labels: Sequence[tuple], relations: Sequence[PairRelation]) -> PairRelation:
    """Pairs of product points whose every coordinate pair lies in its relation."""
    return PairRelation(len(labels), frozenset(
        (i, j)
        for i, u in enumerate(labels)
        for j, v in enumerate(labels)
        if all((a, b) in rel for a, b, rel in zip(u, v, relations))
    ))


class LawCheck(NamedTuple):
    holds: bool
    counterexample: object = None


def check_product_law(actions: Sequence[FiniteAction], ideal: IdealSpec) -> LawCheck:
    """Asym of a shared-semigroup product equals the componentwise conjunction."""
    prod = product_action(actions)
    lhs = asym_pairs(prod, ideal)
    rhs = componentwise_relation(prod.labels, [asym_pairs(a, ideal) for a in actions])
    return _equality(lhs, rhs, prod.labels)


def check_mixed_product_law(factors: Sequence[tuple[FiniteAction, IdealSpec]]) -> LawCheck:
    """Asym modulo the generated ideal equals the per-factor componentwise conjunction."""
    prod, ideal = product_action_mixed(factors)
    lhs = asym_pairs(prod, ideal)
    rhs = componentwise_relation(prod.labels, [asym_pairs(a, i) for a, i in factors])
    return _equality(lhs, rhs, prod.labels)


def _equality(lhs: PairRelation, rhs: PairRelation, labels=None) -> LawCheck:
    diff = sorted(lhs.pairs ^ rhs.pairs)
    if not diff:
        return LawCheck(True)
    a, b = diff[0]
    if labels is not None:
        return LawCheck(False, (labels[a], labels[b]))
    return LawCheck(False, (a, b))


def restrict_to_subsemigroup(action: FiniteAction, subset: Iterable[int]) -> FiniteAction:
    """The action of a submonoid; elements are renumbered, ``names`` keeps parent indices.

    The identity is adjoined when missing.
    """
    sg = action.semigroup
    members = sorted(set(subset) | {sg.identity})
    if not sg.is_closed(members):
        raise NotClosed("subset is not closed under composition")
    pos = {s: i for i, s in enumerate(members)}
    table = [[pos[sg.compose[s][t]] for t in members] for s in members]
    sub = FiniteSemigroup(table, pos[sg.identity], names=tuple(members), check=False)
    act = [[action.act[x][s] for s in members] for x in action.points]
    return FiniteAction(sub, act, labels=action.labels)


def carrier_on_subsemigroup(ideal: IdealSpec, sub: FiniteSemigroup) -> IdealSpec:
    """Translate a parent-indexed ideal to the renumbered submonoid (trace on it)."""
    if isinstance(ideal, Full):
        return ideal
    pos = {s: i for i, s in enumerate(sub.names)}
    return FiniteCarrier(frozenset(pos[s] for s in ideal.carrier if s in pos))


def carrier_on_parent(ideal: FiniteCarrier, sub: FiniteSemigroup) -> FiniteCarrier:
    return FiniteCarrier(frozenset(sub.names[s] for s in ideal.carrier))


def is_invariant_subset(action: FiniteAction, subset: Iterable[int]) -> bool:
    ys = set(subset)
    return bool(ys) and all(v in ys for y in ys for v in action.act[y])


def restrict_to_invariant_subset(action: FiniteAction, subset: Iterable[int]) -> FiniteAction:
    """The subsystem on an invariant subset; ``labels`` keeps ambient indices."""
    ys = sorted(set(subset))
    if not is_invariant_subset(action, ys):
        raise NotInvariant("subset is empty or not invariant")
    pos = {y: i for i, y in enumerate(ys)}
    act = [[pos[v] for v in action.act[y]] for y in ys]
    return FiniteAction(action.semigroup, act, labels=tuple(ys))


# --------------------------------------------------------------------------
# Homomorphisms and quotients
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ActionHomomorphism:
    source: FiniteAction
    target: FiniteAction
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))
        if self.source.semigroup != self.target.semigroup:
            raise ValueError("homomorphisms here share one semigroup")
        if len(self.map) != self.source.phase:
            raise InvalidStructure("map must be total on the source phase")
        if any(not 0 <= v < self.target.phase for v in self.map):
            raise InvalidStructure("map leaves the target phase")
        for x in self.source.points:
            for s in self.source.semigroup.elements:
                if self.map[self.source.act[x][s]] != self.target.act[self.map[x]][s]:
                    raise NotEquivariant(f"phi(x s) != phi(x) s at x={x}, s={s}")


@dataclass(frozen=True)
class InvariantRelation:
    """An invariant equivalence relation on the phase of ``action``."""

    action: FiniteAction
    pairs: PairRelation

    def __post_init__(self):
        if self.pairs.base != self.action.phase:
            raise InvalidStructure("relation must live on the action's phase")
        if not self.pairs.is_equivalence():
            raise NotInvariant("relation is not an equivalence relation")
        for x, y in self.pairs.pairs:
            for s in self.action.semigroup.elements:
                if (self.action.act[x][s], self.action.act[y][s]) not in self.pairs:
                    raise NotInvariant(f"({x},{y}) in R but not its image under s={s}")

    def classes(self) -> list[tuple[int, ...]]:
        seen: dict[int, tuple[int, ...]] = {}
        for x in self.action.points:
            if x not in seen:
                cls = tuple(sorted(y for y in self.action.points if (x, y) in self.pairs))
                for y in cls:
                    seen[y] = cls
        return sorted(set(seen.values()))


def invariant_closure(action: FiniteAction, seed: Iterable[tuple[int, int]]) -> InvariantRelation:
    """Smallest invariant equivalence containing ``seed`` (union-find to a fixpoint)."""
    parent = list(action.points)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[max(ra, rb)] = min(ra, rb)
        return True

    for a, b in seed:
        union(a, b)
    changed = True
    while changed:
        changed = False
        for x in action.points:
            rx = find(x)
            for s in action.semigroup.elements:
                if union(action.act[x][s], action.act[rx][s]):
                    changed = True
    pairs = frozenset((x, y) for x in action.points for y in action.points if find(x) == find(y))
    return InvariantRelation(action, PairRelation(action.phase, pairs))


class Quotient(NamedTuple):
    action: FiniteAction
    projection: ActionHomomorphism


def quotient_action(action: FiniteAction, relation: InvariantRelation) -> Quotient:
    if relation.action != action:
        raise ValueError("relation belongs to a different action")
    classes = relation.classes()
    which = {x: i for i, cls in enumerate(classes) for x in cls}
    act = [[which[action.act[cls[0]][s]] for s in action.semigroup.elements] for cls in classes]
    quot = FiniteAction(action.semigroup, act, labels=tuple(classes))
    proj = ActionHomomorphism(action, quot, tuple(which[x] for x in action.points))
    return Quotient(quot, proj)


def asym_equivalence_classes(action: FiniteAction, ideal: IdealSpec) -> list[tuple[int, ...]]:
    rel = asym_pairs(action, ideal)
    if not rel.is_equivalence():
        raise NotEquivalence("asymptoticity modulo an ideal must be an equivalence relation")
    classes = {tuple(sorted(y for y in action.points if (x, y) in rel)) for x in action.points}
    return sorted(classes)


def prox_union_asym_check(action: FiniteAction, bound: int = 12) -> LawCheck:
    """Prox equals the union of Asym over all proper ideals, by full enumeration."""
    sg = action.semigroup
    if sg.size < 2:
        raise HypothesisViolated("the identity needs a semigroup with at least two elements")
    if sg.size > bound:
        raise BoundExceeded(f"|S| = {sg.size} exceeds {bound}")
    union = PairRelation(action.phase, frozenset())
    for ideal in enumerate_ideals(sg, bound):
        if not is_full_on(ideal, sg):
            union = union | asym_pairs(action, ideal)
    return _equality(prox_pairs(action), union)


def homomorphism_image_check(phi: ActionHomomorphism, ideal: IdealSpec) -> LawCheck:
    """phi x phi maps Prox into Prox and Asym into Asym."""
    tgt = phi.target.phase
    for name, rel_src, rel_tgt in (
        ("prox", prox_pairs(phi.source), prox_pairs(phi.target)),
        ("asym", asym_pairs(phi.source, ideal), asym_pairs(phi.target, ideal)),
    ):
        missing = sorted(rel_src.image(phi.map, tgt).pairs - rel_tgt.pairs)
        if missing:
            return LawCheck(False, (name, missing[0]))
    return LawCheck(True)


# --------------------------------------------------------------------------
# Co-decomposition
# --------------------------------------------------------------------------


class CoDecomposition(NamedTuple):
    factors: list
    commuting: bool
    non_commuting_witness: object = None


def co_decompose(action: FiniteAction, parts: Sequence[Iterable[int]]) -> CoDecomposition:
    """Restrict to the submonoids generated by each part and test commutation.

    A multi-transformation semigroup needs every reordering of elements
    from distinct factors to act alike; adjacent transpositions generate
    all permutations, so pairwise commutation across factors suffices.
    """
    sg = action.semigroup
    subs = [sg.generated_by(p) for p in parts]
    if not subs:
        raise NotGenerating("need at least one part")
    union = set().union(*subs)
    if sg.generated_by(union) != frozenset(sg.elements):
        raise NotGenerating("parts do not generate the whole semigroup")
    factors = [restrict_to_subsemigroup(action, sub) for sub in subs]
    witness = None
    for i, j in itertools.combinations(range(len(subs)), 2):
        for s in sorted(subs[i]):
            for t in sorted(subs[j]):
                for x in action.points:
                    if action.act[action.act[x][s]][t] != action.act[action.act[x][t]][s]:
                        witness = (x, s, t)
                        break
                if witness:
                    break
            if witness:
                break
        if witness:
            break
    return CoDecomposition(factors, witness is None, witness)


def factor_scrambled_report(action: FiniteAction, factor: FiniteAction,
                            ideal: FiniteCarrier) -> LawCheck:
    """A scrambled set of the factor (modulo the trace ideal) is scrambled in the whole."""
    trace = carrier_on_subsemigroup(ideal, factor.semigroup)
    whole_ideal = carrier_on_parent(trace, factor.semigroup) if isinstance(trace, FiniteCarrier) else trace
    best = max_scrambled_set(factor, trace)
    whole = scrambled_pairs(action, whole_ideal)
    for a, b in itertools.combinations(best, 2):
        if (a, b) not in whole:
            return LawCheck(False, (a, b))
    return LawCheck(True)
