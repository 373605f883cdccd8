"""Seeded random-instance suites that check the structural laws exactly.

Each suite returns a :class:`SuiteResult`; a failure carries the first
counterexample found, which is always a bug certificate.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import finite as fe
from . import fort
from . import iterated as it
from .algebra import (
    ALEPH0,
    ALEPH1,
    ALEPH2,
    CardinalBound,
    FiniteCarrier,
    FiniteSemigroup,
    Full,
    semigroup_from_generators,
)
from .errors import ClosureExceedsCap, UnknownSuite


@dataclass
class SuiteResult:
    name: str
    instances: int = 0
    checks: int = 0
    failures: int = 0
    counterexample: object = None
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def check(self, ok: bool, witness: Callable[[], object] | object = None):
        self.checks += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = witness() if callable(witness) else witness

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "instances": self.instances,
            "checks": self.checks,
            "failures": self.failures,
            "counterexample": None if self.counterexample is None else repr(self.counterexample),
        }


# --------------------------------------------------------------------------
# Random instances
# --------------------------------------------------------------------------


def random_semigroup(rng: random.Random, max_phase: int, max_size: int,
                     min_size: int = 1) -> FiniteSemigroup:
    """A monoid generated by one to three random self-maps, within the size caps."""
    while True:
        m = rng.randint(1, max_phase)
        gens = [tuple(rng.randrange(m) for _ in range(m)) for _ in range(rng.randint(1, 3))]
        try:
            sg = semigroup_from_generators(gens, cap=max_size)
        except ClosureExceedsCap:
            continue
        if sg.size >= min_size:
            return sg


def regular_action(sg: FiniteSemigroup) -> fe.FiniteAction:
    """The monoid acting on itself by right multiplication."""
    return fe.FiniteAction(sg, [[sg.compose[x][s] for s in sg.elements] for x in sg.elements])


def random_action_of(rng: random.Random, sg: FiniteSemigroup, max_phase: int) -> fe.FiniteAction:
    """Some action of ``sg``: natural, regular, trivial, a quotient or a subsystem."""
    base = fe.natural_action(sg) if sg.maps is not None and rng.random() < 0.5 else regular_action(sg)
    choice = rng.random()
    if base.phase > max_phase or choice < 0.15:
        return fe.trivial_action(sg, rng.randint(1, max(1, min(3, max_phase))))
    if choice < 0.4:
        x, y = rng.randrange(base.phase), rng.randrange(base.phase)
        return fe.quotient_action(base, fe.invariant_closure(base, [(x, y)])).action
    if choice < 0.55:
        start = rng.randrange(base.phase)
        return fe.restrict_to_invariant_subset(base, base.orbit(start))
    return base


def random_action(rng: random.Random, max_phase: int, max_size: int, min_size: int = 1) -> fe.FiniteAction:
    """A random action; one-point phases and the trivial monoid are kept rare."""
    while True:
        sg = random_semigroup(rng, max_phase, max_size, min_size)
        action = random_action_of(rng, sg, max_phase)
        if action.phase > max_phase:
            continue
        if (action.phase == 1 or sg.size == 1) and rng.random() < 0.9:
            continue
        return action


def all_actions_of(sg: FiniteSemigroup, m: int):
    """Every action of ``sg`` on ``{0..m-1}``, as monoid maps ``S -> X^X``.

    Elements are assigned in index order; an element that is a product of
    already assigned ones has a forced image, the rest are branched over.
    """
    ident = tuple(range(m))
    maps = list(itertools.product(range(m), repeat=m))
    images: list = [None] * sg.size

    def forced(s):
        for a in range(sg.size):
            if images[a] is None:
                continue
            for b in range(sg.size):
                if images[b] is not None and sg.compose[a][b] == s:
                    return tuple(images[b][v] for v in images[a])
        return None

    def consistent():
        for a in range(sg.size):
            for b in range(sg.size):
                c = sg.compose[a][b]
                if None in (images[a], images[b], images[c]):
                    continue
                if tuple(images[b][v] for v in images[a]) != images[c]:
                    return False
        return True

    def extend(s):
        if s == sg.size:
            yield fe.FiniteAction(sg, [[images[t][x] for t in sg.elements] for x in range(m)])
            return
        if s == sg.identity:
            options = [ident]
        else:
            f = forced(s)
            options = [f] if f is not None else maps
        for f in options:
            images[s] = f
            if consistent():
                yield from extend(s + 1)
            images[s] = None

    yield from extend(0)


def random_subset(rng: random.Random, universe, p: float = 0.5) -> frozenset:
    return frozenset(u for u in universe if rng.random() < p)


def random_carrier(rng: random.Random, sg: FiniteSemigroup, proper: bool = False) -> FiniteCarrier:
    while True:
        c = random_subset(rng, sg.elements)
        if not proper or len(c) < sg.size:
            return FiniteCarrier(c)


def random_metric(rng: random.Random, m: int) -> list[list[Fraction]]:
    """L1 distances between distinct random rational points of the plane."""
    pts: set = set()
    while len(pts) < m:
        pts.add((Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
                 Fraction(rng.randint(-6, 6), rng.randint(1, 4))))
    pts = sorted(pts)
    return [[abs(p[0] - q[0]) + abs(p[1] - q[1]) for q in pts] for p in pts]


def brute_force_max_scrambled(action: fe.FiniteAction, ideal: FiniteCarrier | Full) -> tuple:
    """Exhaustive subset search straight from the definitions."""
    n = action.semigroup.size
    allowed = set(range(n)) if isinstance(ideal, Full) else set(ideal.carrier)

    def scrambled(x, y):
        agree = [s for s in range(n) if action.act[x][s] == action.act[y][s]]
        disagree = {s for s in range(n) if action.act[x][s] != action.act[y][s]}
        return bool(agree) and not disagree <= allowed

    table = {(x, y): scrambled(x, y) for x in action.points for y in action.points}
    for size in range(action.phase, 1, -1):
        for subset in itertools.combinations(action.points, size):
            if all(table[p] for p in itertools.combinations(subset, 2)):
                return subset
    return ()


# --------------------------------------------------------------------------
# Suites
# --------------------------------------------------------------------------


def _contained(small: fe.PairRelation, big: fe.PairRelation, tag: str):
    missing = sorted(small.pairs - big.pairs)
    return (not missing), (lambda: (tag, missing[0]))


def section3_suite(seed: int = 42, budget: int = 200, max_phase: int = 5,
                   max_size: int = 4) -> SuiteResult:
    """Ideal monotonicity, subsemigroups, invariant subsets, Asym equivalence, homomorphisms."""
    res = SuiteResult("section3")
    rng = random.Random(seed)
    for _ in range(budget):
        a = random_action(rng, max_phase, max_size)
        sg = a.semigroup
        res.instances += 1

        # ideal monotonicity
        j = random_carrier(rng, sg)
        i = FiniteCarrier(random_subset(rng, j.carrier))
        res.check(*_contained(fe.asym_pairs(a, i), fe.asym_pairs(a, j), ("monotone", a, i, j)))
        res.check(*_contained(fe.scrambled_pairs(a, j), fe.scrambled_pairs(a, i),
                              ("monotone-scrambled", a, i, j)))
        best = fe.max_scrambled_set(a, j)
        sc_i = fe.scrambled_pairs(a, i)
        res.check(all(p in sc_i for p in itertools.combinations(best, 2)),
                  ("scrambled-set-monotone", a, i, j, best))

        # equivalence
        for ideal in (i, j, Full()):
            rel = fe.asym_pairs(a, ideal)
            res.check(rel.is_equivalence(), ("asym-equivalence", a, ideal))

        # subsemigroup
        t = sg.generated_by(random_subset(rng, sg.elements, 0.3))
        sub = fe.restrict_to_subsemigroup(a, t)
        carrier = FiniteCarrier(random_subset(rng, t))
        on_t = fe.carrier_on_subsemigroup(carrier, sub.semigroup)
        res.check(*_contained(fe.asym_pairs(a, carrier), fe.asym_pairs(sub, on_t), ("sub-asym", a, t)))
        res.check(*_contained(fe.prox_pairs(sub), fe.prox_pairs(a), ("sub-prox", a, t)))
        best_t = fe.max_scrambled_set(sub, on_t)
        sc_s = fe.scrambled_pairs(a, carrier)
        res.check(all(p in sc_s for p in itertools.combinations(best_t, 2)),
                  ("sub-scrambled-set", a, t, best_t))

        # invariant subset
        ys = set()
        for x in random_subset(rng, a.points) or {0}:
            ys |= a.orbit(x)
        sub_y = fe.restrict_to_invariant_subset(a, ys)
        lift = sub_y.labels
        for ideal in (i, j):
            asym_y = fe.asym_pairs(sub_y, ideal).image(lift, a.phase)
            res.check(*_contained(asym_y, fe.asym_pairs(a, ideal), ("invariant-subset", a, sorted(ys))))
            pos = {y: k for k, y in enumerate(lift)}
            inside = fe.PairRelation(sub_y.phase, frozenset(
                (pos[u], pos[v]) for u, v in fe.scrambled_pairs(a, ideal).pairs if u in pos and v in pos))
            res.check(*_contained(inside, fe.scrambled_pairs(sub_y, ideal),
                                  ("invariant-subset-scrambled", a, sorted(ys))))

        # homomorphisms via quotients
        x, y = rng.randrange(a.phase), rng.randrange(a.phase)
        quot = fe.quotient_action(a, fe.invariant_closure(a, [(x, y)]))
        for ideal in (i, j):
            chk = fe.homomorphism_image_check(quot.projection, ideal)
            res.check(chk.holds, ("quotient", a, (x, y), ideal, chk.counterexample))
    return res


def prox_union_suite(seed: int = 42, budget: int = 100, max_phase: int = 4,
                     max_size: int = 3) -> SuiteResult:
    """Prox against the union of Asym over proper ideals, for every action of each sample."""
    res = SuiteResult("prox-union")
    rng = random.Random(seed)
    done: dict = {}
    actions = 0
    for _ in range(budget):
        sg = random_semigroup(rng, max_phase, max_size, min_size=2)
        res.instances += 1
        key = (sg.compose, sg.identity)
        if key in done:
            # same multiplication table, same set of actions, same verdict
            actions += done[key]
            continue
        count = 0
        for m in range(1, max_phase + 1):
            for a in all_actions_of(sg, m):
                count += 1
                chk = fe.prox_union_asym_check(a)
                res.check(chk.holds, lambda: ("prox-union", a, chk.counterexample))
        done[key] = count
        actions += count
    res.details.update(actions=actions, distinct_tables=len(done))
    return res


def product_suite(seed: int = 42, budget: int = 200, max_factors: int = 3,
                  max_phase: int = 4, max_size: int = 4) -> SuiteResult:
    """Shared and mixed products: Asym equals the componentwise conjunction."""
    res = SuiteResult("product")
    rng = random.Random(seed)
    for k in range(budget):
        res.instances += 1
        n = rng.randint(1, max_factors)
        sg = random_semigroup(rng, max_phase, max_size)
        actions = [random_action_of(rng, sg, max_phase) for _ in range(n)]
        for ideal in (random_carrier(rng, sg), FiniteCarrier(), Full()):
            chk = fe.check_product_law(actions, ideal)
            res.check(chk.holds, lambda: ("shared", actions, ideal, chk.counterexample))

        n = rng.randint(1, max_factors)
        factors = []
        all_full = k % 10 == 0
        for _ in range(n):
            a = random_action(rng, max_phase, max_size)
            factors.append((a, Full() if all_full else random_carrier(rng, a.semigroup, proper=True)))
        chk = fe.check_mixed_product_law(factors)
        res.check(chk.holds, lambda: ("mixed", factors, chk.counterexample))
    return res


def scrambled_suite(seed: int = 42, budget: int = 100, max_phase: int = 10,
                    max_size: int = 16) -> SuiteResult:
    """Exact clique search against exhaustive subset enumeration."""
    res = SuiteResult("scrambled")
    rng = random.Random(seed)
    while res.instances < budget:
        m = rng.randint(2, max_phase)
        gens = [tuple(rng.randrange(m) for _ in range(m)) for _ in range(rng.randint(1, 2))]
        try:
            sg = semigroup_from_generators(gens, cap=max_size)
        except ClosureExceedsCap:
            continue
        a = fe.natural_action(sg)
        res.instances += 1
        res.details.setdefault("phases", []).append(m)
        for ideal in (random_carrier(rng, sg), FiniteCarrier()):
            got = fe.max_scrambled_set(a, ideal)
            want = brute_force_max_scrambled(a, ideal)
            res.check(got == want, lambda: ("clique", a, ideal, got, want))
    return res


def all_maps(m: int):
    return itertools.product(range(m), repeat=m)


def claims_suite(seed: int = 42, budget: int = 50, max_phase: int = 4) -> SuiteResult:
    """Non-asymptotic iff scrambled relative to exhausting families."""
    res = SuiteResult("claims")
    rng = random.Random(seed)
    families = [f() for f in it.STANDARD_FAMILIES]

    def run(sys: it.IteratedSystem):
        res.instances += 1
        rep = it.claims_check(sys, families)
        res.check(rep.holds, lambda: ("claims", sys.step, rep.counterexample))
        for x, y in itertools.product(range(sys.phase), repeat=2):
            res.check(not it.is_asymptotic(sys, x, y) or it.is_proximal(sys, x, y),
                      ("asym-implies-prox", sys.step, x, y))

    for m in range(1, max_phase + 1):
        for step in all_maps(m):
            run(it.IteratedSystem.discrete(step))
    for _ in range(budget):
        metric = random_metric(rng, max_phase)
        for step in all_maps(max_phase):
            run(it.IteratedSystem(step, metric))
    res.details["families"] = [f.name for f in families]
    return res


def iterated_cross_suite(seed: int = 42, budget: int = 100, max_phase: int = 6) -> SuiteResult:
    """Functional-graph decisions agree with the finite engine on the power monoid."""
    res = SuiteResult("iterated-cross")
    rng = random.Random(seed)
    for _ in range(budget):
        m = rng.randint(1, max_phase)
        sys = it.IteratedSystem.discrete([rng.randrange(m) for _ in range(m)])
        action, tail = it.as_finite_action(sys)
        res.instances += 1
        prox = fe.prox_pairs(action)
        asym = fe.asym_pairs(action, tail)
        for x, y in itertools.product(range(m), repeat=2):
            res.check(((x, y) in prox) == it.is_proximal(sys, x, y), ("prox", sys.step, x, y))
            res.check(((x, y) in asym) == it.is_asymptotic(sys, x, y), ("asym", sys.step, x, y))
    return res


def translation_specs(max_rank: int = 3, box: int = 3):
    for k in range(1, max_rank + 1):
        for coeffs in itertools.product(range(-box, box + 1), repeat=k):
            yield fort.TranslationActionSpec(k, coeffs)


def fort_oracle_suite(seed: int = 42, budget: int | None = None, window: int = 50,
                      bound: int = 20, max_rank: int = 3, box: int = 3) -> SuiteResult:
    """Stabilizer formula against the windowed entourage definition."""
    res = SuiteResult("fort-oracle")
    specs = list(translation_specs(max_rank, box))
    if budget is not None and budget < len(specs):
        specs = random.Random(seed).sample(specs, budget)
    for t in specs:
        res.instances += 1
        for rep in fort.oracle_sweep(t, window, bound):
            res.check(rep.agrees, lambda: ("oracle", t, rep))
    return res


FORT_IDEALS = (CardinalBound(ALEPH0), CardinalBound(ALEPH1), CardinalBound(ALEPH2), Full())


def fort_bound_suite(seed: int = 42, budget: int | None = None) -> SuiteResult:
    """Scrambled strata stay inside H ∪ {b} up to one exceptional point."""
    res = SuiteResult("fort-bound")
    specs = [fort.translation_to_spec(t) for t in translation_specs()]
    specs += [fort.real_translation_spec(k) for k in (ALEPH0, ALEPH1, ALEPH2)]
    for spec in specs:
        res.instances += 1
        for ideal in FORT_IDEALS:
            rep = fort.scrambled_structure(spec, ideal)
            ok, culprit = fort.exceptional_bound(rep, fort.h_classes(spec, ideal))
            res.check(ok, ("bound", spec, ideal, culprit))
            prox, asym = fort.prox_classes(spec), fort.asym_classes(spec, ideal)
            for key, status in rep.entries:
                want = (prox[key] is fort.Membership.IN and asym[key] is fort.Membership.OUT
                        and key != fort.DIAGONAL)
                res.check((status is fort.Membership.IN) == want, ("difference", spec, ideal, key))
            chaos = fort.is_li_yorke_chaotic(spec, ideal)
            res.check(not chaos.verdict or bool(rep.off_diagonal()), ("chaos-needs-pairs", spec, ideal))
    return res


SUITES = {
    "section3": section3_suite,
    "prox-union": prox_union_suite,
    "product": product_suite,
    "scrambled": scrambled_suite,
    "claims": claims_suite,
    "iterated-cross": iterated_cross_suite,
    "fort-oracle": fort_oracle_suite,
    "fort-bound": fort_bound_suite,
}


def run_suite(name: str, seed: int = 42, budget: int | None = None) -> list[SuiteResult]:
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    out = []
    for n in names:
        start = time.perf_counter()
        res = SUITES[n](seed=seed) if budget is None else SUITES[n](seed=seed, budget=budget)
        res.seconds = time.perf_counter() - start
        out.append(res)
    return out
