"""Infinite Fort transformation groups described by orbit classes.

A Fort space ``F`` with particular point ``b`` is never materialised.  The
non-particular points are grouped into classes that share an orbit size
and a stabilizer size, each with a symbolic point count.  Every criterion
below reads only those cardinals.

Ideals on the (infinite) acting group are cardinal bounds
``{A : |A| < kappa}`` or the full power set.  Translating a set inside a
group preserves its cardinality, so these ideals are invariant and
"st(x)h is in the ideal for every h" is the same as "st(x) is in the ideal".
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .algebra import (
    ALEPH0,
    ALEPH1,
    ONE,
    P_FIN,
    ZERO,
    Cardinal,
    CardinalBound,
    FiniteCarrier,
    Full,
    IdealSpec,
    cardinal_sum,
    ideal_contains,
)
from .errors import (
    CardinalOrderViolated,
    IdealKindMismatch,
    InvalidStructure,
    NonAbelian,
    ParticularPointInD,
    WindowTooSmall,
)

# the continuum is modelled as the first uncountable tier
CONTINUUM = ALEPH1
B = "b"


class _Infinity:
    """The particular point of ℤ ∪ {∞}."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "∞"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


# --------------------------------------------------------------------------
# Specs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitClass:
    label: str
    point_count: Cardinal
    orbit_size: Cardinal
    stabilizer_size: Cardinal

    @property
    def infinite_orbit(self) -> bool:
        return self.orbit_size.infinite


@dataclass(frozen=True)
class FortGroupSpec:
    group_size: Cardinal
    abelian: bool
    classes: tuple

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if self.group_size < ONE:
            raise InvalidStructure("a group has at least one element")
        labels = [c.label for c in self.classes]
        if len(set(labels)) != len(labels):
            raise InvalidStructure("class labels must be distinct")
        if B in labels:
            raise InvalidStructure(f"{B!r} is reserved for the particular point")
        for c in self.classes:
            if c.point_count < ONE:
                raise InvalidStructure(f"class {c.label} has no points")
            if c.orbit_size * c.stabilizer_size != self.group_size:
                raise InvalidStructure(
                    f"class {c.label}: |orbit| * |stabilizer| = "
                    f"{c.orbit_size * c.stabilizer_size} but |G| = {self.group_size}")
            if c.orbit_size > c.point_count:
                raise InvalidStructure(f"class {c.label}: orbit larger than the class")

    @property
    def point_count(self) -> Cardinal:
        return cardinal_sum(c.point_count for c in self.classes)

    def by_label(self, label: str) -> OrbitClass:
        for c in self.classes:
            if c.label == label:
                return c
        raise KeyError(label)


# --------------------------------------------------------------------------
# Pair-class reports
# --------------------------------------------------------------------------


class Membership(enum.Enum):
    IN = "in"
    OUT = "out"
    OPEN = "open"  # between the proven lower and upper bounds

    def __str__(self):
        return self.value


DIAGONAL = ("=", "=")


def strata(spec: FortGroupSpec) -> list[tuple[str, str]]:
    """Pair strata: the diagonal, ``(b, C)``, ``(C, b)`` and ``(C, C')``.

    ``(C, C)`` stands for pairs of distinct points of one class and only
    occurs when the class has at least two points.
    """
    out = [DIAGONAL]
    for c in spec.classes:
        out += [(B, c.label), (c.label, B)]
    for c, d in itertools.product(spec.classes, repeat=2):
        if c.label != d.label or c.point_count > ONE:
            out.append((c.label, d.label))
    return out


@dataclass(frozen=True)
class PairClassReport:
    relation: str
    entries: tuple  # ((stratum, Membership), ...) in strata() order
    exact: bool
    notes: tuple = field(default=())

    def __getitem__(self, stratum) -> Membership:
        for key, value in self.entries:
            if key == tuple(stratum):
                return value
        raise KeyError(stratum)

    def members(self, status: Membership = Membership.IN) -> list[tuple[str, str]]:
        return [k for k, v in self.entries if v is status]

    def off_diagonal(self, status: Membership = Membership.IN) -> list[tuple[str, str]]:
        return [k for k in self.members(status) if k != DIAGONAL]

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "exact": self.exact,
            "strata": [{"pair": list(k), "status": v.value} for k, v in self.entries],
            "notes": list(self.notes),
        }


def _bool(flag: bool) -> Membership:
    return Membership.IN if flag else Membership.OUT


def prox_classes(spec: FortGroupSpec) -> PairClassReport:
    """Proximal strata: exact for abelian groups, bounds otherwise."""
    entries = []
    for key in strata(spec):
        if key == DIAGONAL:
            status = Membership.IN
        elif B in key:
            cls = spec.by_label(key[1] if key[0] == B else key[0])
            status = _bool(cls.infinite_orbit)
        else:
            both = spec.by_label(key[0]).infinite_orbit and spec.by_label(key[1]).infinite_orbit
            if not both:
                status = Membership.OUT
            else:
                status = Membership.IN if spec.abelian else Membership.OPEN
        entries.append((key, status))
    notes = () if spec.abelian else (
        "non-abelian group: pairs of points with infinite orbits are only known to lie "
        "inside the upper bound",)
    return PairClassReport("prox", tuple(entries), spec.abelian, notes)


def _stabilizer_in(ideal: IdealSpec, size: Cardinal) -> bool:
    if isinstance(ideal, FiniteCarrier):
        raise IdealKindMismatch("finite-carrier ideals cannot be placed on an infinite group")
    return ideal_contains(ideal, size)


def asym_classes(spec: FortGroupSpec, ideal: IdealSpec) -> PairClassReport:
    """Asymptotic strata via stabilizer membership in the ideal (always exact)."""
    entries = []
    for key in strata(spec):
        if key == DIAGONAL:
            status = True
        else:
            sizes = [spec.by_label(k).stabilizer_size for k in key if k != B]
            status = all(_stabilizer_in(ideal, s) for s in sizes)
        entries.append((key, _bool(status)))
    return PairClassReport("asym", tuple(entries), True)


def h_classes(spec: FortGroupSpec, ideal: IdealSpec) -> list[str]:
    """Classes with infinite orbit whose stabilizer is outside the ideal."""
    return [c.label for c in spec.classes
            if c.infinite_orbit and not _stabilizer_in(ideal, c.stabilizer_size)]


def scrambled_structure(spec: FortGroupSpec, ideal: IdealSpec) -> PairClassReport:
    prox = prox_classes(spec)
    asym = asym_classes(spec, ideal)
    entries = []
    for (key, p), (_, a) in zip(prox.entries, asym.entries):
        if key == DIAGONAL or p is Membership.OUT or a is Membership.IN:
            status = Membership.OUT
        else:
            status = p
        entries.append((key, status))
    h = h_classes(spec, ideal)
    report = PairClassReport("scrambled", tuple(entries), prox.exact)
    ok, culprit = exceptional_bound(report, h)
    bound = "holds" if ok else f"violated by stratum {culprit}"
    notes = (f"H classes: {h}",
             f"any scrambled set minus H ∪ {{b}} has at most one point: {bound}")
    return PairClassReport("scrambled", tuple(entries), prox.exact, notes)


def exceptional_bound(report: PairClassReport, h: Sequence[str]) -> tuple[bool, object]:
    """Every scrambled set minus ``H ∪ {b}`` has at most one point.

    Structurally: no possibly-scrambled stratum has both ends outside
    ``H ∪ {b}``; two such points in one scrambled set would form one.
    """
    allowed = set(h) | {B}
    for key, status in report.entries:
        if key == DIAGONAL or status is Membership.OUT:
            continue
        if key[0] not in allowed and key[1] not in allowed:
            return False, key
    return True, None


class FortChaos(NamedTuple):
    verdict: bool
    h_cardinality: Cardinal
    witness_class: str | None
    criterion: str = "stabilizer formula"


def is_li_yorke_chaotic(spec: FortGroupSpec, ideal: IdealSpec) -> FortChaos:
    """Chaotic iff the points with infinite orbit and stabilizer outside the ideal are uncountable."""
    if not spec.abelian:
        raise NonAbelian("the chaoticity criterion is only proven for abelian groups")
    h = h_classes(spec, ideal)
    size = cardinal_sum(spec.by_label(c).point_count for c in h)
    witness = next((c for c in h if spec.by_label(c).point_count.is_uncountable), None)
    if witness is None and h:
        witness = h[0]
    return FortChaos(size >= ALEPH1, size, witness)


# --------------------------------------------------------------------------
# Entourages
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FortEntourage:
    """``alpha_D``: pairs outside ``D`` together with the diagonal on ``D``."""

    D: frozenset

    def __post_init__(self):
        object.__setattr__(self, "D", frozenset(self.D))
        if INF in self.D:
            raise ParticularPointInD("the particular point cannot belong to D")

    def __contains__(self, pair) -> bool:
        u, v = pair
        if u in self.D or v in self.D:
            return u == v
        return True

    def components(self) -> list[FortEntourage]:
        return [FortEntourage(frozenset([z])) for z in sorted(self.D, key=repr)]

    def matches_intersection(self, window: Iterable) -> bool:
        """alpha_D equals the intersection of the alpha_{z}, pointwise on ``window``."""
        pts = list(window)
        parts = self.components()
        return all(((u, v) in self) == all((u, v) in p for p in parts)
                   for u in pts for v in pts)


def fort_entourage(D: Iterable) -> FortEntourage:
    return FortEntourage(frozenset(D))


# --------------------------------------------------------------------------
# Translation actions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TranslationActionSpec:
    """Translations of ℤ ∪ {∞} by ℤ^k, or of ℝ ∪ {∞} by K × ℝ.

    ``x · (m_1..m_k) = x + Σ m_i a_i``; in the real form
    ``x · (κ, r) = x + r`` with ``|K| = k_card``.  ``∞`` is fixed.
    """

    rank: int = 1
    coefficients: tuple = (1,)
    real_factor: bool = False
    k_card: Cardinal | None = None

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(a) for a in self.coefficients))
        if self.real_factor:
            if self.k_card is None:
                raise InvalidStructure("the K x R form needs |K|")
            return
        if self.rank < 1:
            raise InvalidStructure("rank must be positive")
        if len(self.coefficients) != self.rank:
            raise InvalidStructure("need one coefficient per generator")

    @property
    def step(self) -> int:
        """gcd of the coefficients; orbits are residue classes modulo it."""
        return math.gcd(*self.coefficients) if self.coefficients else 0

    def act(self, x, g: Sequence[int]):
        if x is INF:
            return INF
        return x + sum(m * a for m, a in zip(g, self.coefficients))


def translation_to_spec(t: TranslationActionSpec) -> FortGroupSpec:
    if t.real_factor:
        group = max(t.k_card, CONTINUUM)
        cls = OrbitClass("R", CONTINUUM, CONTINUUM, t.k_card)
        return FortGroupSpec(group, True, (cls,))
    group = ALEPH0
    g = t.step
    if g == 0:
        return FortGroupSpec(group, True, (OrbitClass("fixed", ALEPH0, ONE, group),))
    # kernel of m -> Σ m_i a_i has rank k-1
    stab = ONE if t.rank == 1 else ALEPH0
    classes = tuple(OrbitClass(f"r{j}", ALEPH0, ALEPH0, stab) for j in range(g))
    return FortGroupSpec(group, True, classes)


def class_of_point(t: TranslationActionSpec, x) -> str:
    """Label of the compiled class containing the integer point ``x``."""
    if x is INF:
        return B
    return "fixed" if t.step == 0 else f"r{x % t.step}"


def representatives(t: TranslationActionSpec) -> dict[str, list[int]]:
    """Two distinct integer points of every compiled class."""
    g = t.step
    if g == 0:
        return {"fixed": [0, 1]}
    return {f"r{j}": [j, j + g] for j in range(g)}


class OracleReport(NamedTuple):
    pair: tuple
    stratum: tuple
    oracle_asym: bool
    formula_asym: bool
    kernel_infinite: bool
    witnesses: int

    @property
    def agrees(self) -> bool:
        return self.oracle_asym == self.formula_asym


def _box(rank: int, bound: int) -> np.ndarray:
    axes = [np.arange(-bound, bound + 1)] * rank
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, rank)


def windowed_definition_oracle(t: TranslationActionSpec, pair: tuple, window: int = 50,
                               bound: int = 20, spec: FortGroupSpec | None = None,
                               _shifts: np.ndarray | None = None) -> OracleReport:
    """Check asymptoticity modulo finite sets straight from the entourage definition.

    For every ``z`` in ``[-window, window]`` the set
    ``{g : (xg, yg) not in alpha_{z}} = {g : xg = z} ∪ {g : yg = z}`` is
    enumerated over the box ``[-bound, bound]^k``.  Each piece is a coset
    of the kernel, so it is infinite iff it is nonempty and the kernel is
    infinite; the kernel is infinite iff the box holds a nonzero kernel
    element, which is exact once ``bound >= max |a_i|``.
    """
    if t.real_factor:
        raise ValueError("the windowed oracle needs a ℤ^k translation action")
    if bound < max((abs(a) for a in t.coefficients), default=0):
        raise ValueError("box bound must dominate the coefficients")
    spec = spec or translation_to_spec(t)
    x, y = pair
    shifts = _shifts if _shifts is not None else _box(t.rank, bound) @ np.asarray(t.coefficients)
    kernel_infinite = int(np.count_nonzero(shifts == 0)) > 1

    witnessed = np.zeros(2 * window + 1, dtype=bool)
    for p in {x, y}:
        if p is INF:
            continue  # ∞g = ∞ never equals a point of the window
        vals = p + shifts
        inside = vals[(vals >= -window) & (vals <= window)]
        witnessed[inside + window] = True
    # x = y never leaves any entourage
    if x == y:
        witnessed[:] = False
    n_witness = int(witnessed.sum())
    if x != y and n_witness == 0:
        raise WindowTooSmall(f"no z in [-{window}, {window}] separates {pair}")
    oracle_asym = not (kernel_infinite and n_witness > 0)

    stratum = DIAGONAL if x == y else (class_of_point(t, x), class_of_point(t, y))
    formula = asym_classes(spec, P_FIN)[stratum] is Membership.IN
    return OracleReport(tuple(pair), stratum, oracle_asym, formula, kernel_infinite, n_witness)



def oracle_pairs(t: TranslationActionSpec) -> list[tuple]:
    """One representative pair for each stratum of the compiled spec."""
    reps = representatives(t)
    out = [(0, 0), (INF, INF)]
    for label, (p, q) in reps.items():
        out += [(INF, p), (p, INF), (p, q)]
    for (l1, r1), (l2, r2) in itertools.permutations(reps.items(), 2):
        out.append((r1[0], r2[0]))
    return out


def oracle_sweep(t: TranslationActionSpec, window: int = 50, bound: int = 20) -> list[OracleReport]:
    spec = translation_to_spec(t)
    shifts = _box(t.rank, bound) @ np.asarray(t.coefficients)
    return [windowed_definition_oracle(t, p, window, bound, spec, shifts) for p in oracle_pairs(t)]


# --------------------------------------------------------------------------
# Worked examples and co-decompositions
# --------------------------------------------------------------------------


def real_translation_spec(k_card: Cardinal = ALEPH0) -> FortGroupSpec:
    """``K × ℝ`` translating ``ℝ ∪ {∞}``; ``k_card = aleph0`` gives ``ℤ × ℝ``."""
    return translation_to_spec(TranslationActionSpec(real_factor=True, k_card=k_card))


class CardinalExample(NamedTuple):
    spec: FortGroupSpec
    small: CardinalBound
    large: CardinalBound
    chaotic_small: FortChaos
    chaotic_large: FortChaos


def generalized_cardinal_example(alpha: Cardinal, beta: Cardinal, k_card: Cardinal) -> CardinalExample:
    """``G = K × ℝ`` with ``beta <= |K| < alpha``: chaotic below beta, not below alpha."""
    if not (alpha.infinite and beta.infinite):
        raise CardinalOrderViolated("alpha and beta must be transfinite")
    if not (beta <= k_card < alpha):
        raise CardinalOrderViolated(f"need {beta} <= |K| = {k_card} < {alpha}")
    spec = real_translation_spec(k_card)
    small, large = CardinalBound(beta), CardinalBound(alpha)
    return CardinalExample(spec, small, large,
                           is_li_yorke_chaotic(spec, small), is_li_yorke_chaotic(spec, large))


class CoDecompositionReport(NamedTuple):
    chaotic: bool
    co_decomposable_to_chaotic: bool
    cyclic_factors_chaotic: bool
    derivation: tuple

    @property
    def biconditional_holds(self) -> bool:
        return self.chaotic == self.co_decomposable_to_chaotic


def co_decomposition_report(spec: FortGroupSpec, ideal: IdealSpec) -> CoDecompositionReport:
    """Chaoticity versus the trivial and the cyclic co-decompositions of an abelian group."""
    if not spec.abelian:
        raise NonAbelian("co-decomposition results are stated for abelian groups")
    whole = is_li_yorke_chaotic(spec, ideal)
    lines = [
        f"(F, G) chaotic: {whole.verdict} (|H| = {whole.h_cardinality})",
        "{G} is itself a co-decomposition, and any co-decomposition into chaotic factors "
        "makes (F, G) chaotic, so co-decomposable-to-chaotic matches chaotic",
    ]
    if spec.group_size <= ONE:
        lines.append("trivial group: no nontrivial cyclic factors")
        return CoDecompositionReport(whole.verdict, whole.verdict, False, tuple(lines))
    if isinstance(ideal, Full):
        lines.append("ideal is the full power set: no stabilizer lies outside it, H_g = ∅")
        return CoDecompositionReport(whole.verdict, whole.verdict, False, tuple(lines))
    kappa = ideal.kappa if isinstance(ideal, CardinalBound) else None
    if kappa is None:
        raise IdealKindMismatch("finite-carrier ideals cannot be placed on an infinite group")
    lines += [
        "cyclic factors G_g = {g^n : n ∈ ℤ}, g ∈ G, generate G and commute pairwise (G abelian)",
        f"|G_g| <= {ALEPH0}",
    ]
    for c in spec.classes:
        lines.append(
            f"class {c.label}: a G_g-orbit is infinite only if G_g ≅ ℤ and st_g(x) has infinite "
            f"index in ℤ, hence st_g(x) = {{0}}; |st_g(x)| = {ONE} < {kappa}, so no point of "
            f"class {c.label} lies in H_g")
    lines.append(f"H_g = ∅ for every g, |H_g| = {ZERO} < {ALEPH1}: no cyclic factor is chaotic")
    return CoDecompositionReport(whole.verdict, whole.verdict, False, tuple(lines))
