import itertools
import json
import random

from conftest import naive_asym, naive_max_scrambled, naive_prox, naive_scrambled
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from chaoslab import finite as fe
from chaoslab import iterated as it
from chaoslab.algebra import Cardinal, FiniteCarrier, Full, enumerate_ideals, semigroup_from_generators
from chaoslab.errors import ClosureExceedsCap
from chaoslab.instances import parse_text
from chaoslab.verify import random_metric

SETTINGS = settings(max_examples=60, deadline=None)


@st.composite
def actions(draw, max_phase=5, max_gens=2):
    m = draw(st.integers(1, max_phase))
    gens = draw(st.lists(st.lists(st.integers(0, m - 1), min_size=m, max_size=m).map(tuple),
                         min_size=1, max_size=max_gens))
    try:
        sg = semigroup_from_generators(gens, cap=256)
    except ClosureExceedsCap:
        assume(False)
    return fe.FiniteAction(sg, [[sg.maps[s][x] for s in sg.elements] for x in range(m)])


@st.composite
def action_and_carrier(draw, **kw):
    a = draw(actions(**kw))
    carrier = draw(st.frozensets(st.sampled_from(list(a.semigroup.elements))))
    return a, FiniteCarrier(carrier)


cardinals = st.one_of(st.integers(0, 50).map(Cardinal.finite), st.integers(0, 3).map(Cardinal.aleph))


@SETTINGS
@given(action_and_carrier())
def test_relations_match_definitions(data):
    a, ideal = data
    assert set(fe.prox_pairs(a).pairs) == naive_prox(a)
    assert set(fe.asym_pairs(a, ideal).pairs) == naive_asym(a, ideal)
    assert set(fe.scrambled_pairs(a, ideal).pairs) == naive_scrambled(a, ideal)


@SETTINGS
@given(action_and_carrier())
def test_asym_is_an_equivalence(data):
    a, ideal = data
    assert fe.asym_pairs(a, ideal).is_equivalence()
    assert fe.prox_pairs(a).is_reflexive() and fe.prox_pairs(a).is_symmetric()


@SETTINGS
@given(action_and_carrier(), st.data())
def test_larger_ideal_more_asymptotic(data, more):
    a, small = data
    extra = more.draw(st.frozensets(st.sampled_from(list(a.semigroup.elements))))
    big = FiniteCarrier(small.carrier | extra)
    assert fe.asym_pairs(a, small).pairs <= fe.asym_pairs(a, big).pairs <= fe.asym_pairs(a, Full()).pairs


@SETTINGS
@given(actions(max_phase=4))
def test_prox_is_union_over_proper_ideals(a):
    if a.semigroup.size < 2 or a.semigroup.size > 8:
        return
    union = set()
    for ideal in enumerate_ideals(a.semigroup, 8):
        if len(ideal.carrier) < a.semigroup.size:
            union |= naive_asym(a, ideal)
    assert naive_prox(a) == union
    assert fe.prox_union_asym_check(a, 8).holds


@settings(max_examples=40, deadline=None)
@given(action_and_carrier(max_phase=8, max_gens=1))
def test_max_scrambled_matches_exhaustive_search(data):
    a, ideal = data
    got = fe.max_scrambled_set(a, ideal)
    assert got == naive_max_scrambled(a, ideal)
    scr = fe.scrambled_pairs(a, ideal)
    assert all((x, y) in scr for x, y in itertools.combinations(got, 2))


@SETTINGS
@given(action_and_carrier(max_phase=4), st.data())
def test_subsemigroup_scrambled_sets_stay_scrambled(data, more):
    a, ideal = data
    gens = more.draw(st.frozensets(st.sampled_from(list(a.semigroup.elements))))
    sub = fe.restrict_to_subsemigroup(a, a.semigroup.generated_by(gens))
    assert fe.factor_scrambled_report(a, sub, ideal).holds


@SETTINGS
@given(cardinals, cardinals, cardinals)
def test_cardinal_arithmetic(a, b, c):
    assert a * b == b * a and (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert (a <= b) or (b <= a)
    if a.infinite or b.infinite:
        assert a + b == max(a, b)
    else:
        assert a + b == Cardinal.finite(a.value + b.value)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda m: st.tuples(
    st.lists(st.integers(0, m - 1), min_size=m, max_size=m), st.integers(0, 2**32))))
def test_claims_with_random_metrics(data):
    step, seed = data
    metric = random_metric(random.Random(seed), len(step))
    sys = it.IteratedSystem(step, metric)
    assert it.claims_check(sys, [f() for f in it.STANDARD_FAMILIES]).holds


@SETTINGS
@given(actions(max_phase=4), st.lists(st.frozensets(st.integers(0, 3)), max_size=3))
def test_instance_round_trip(a, carriers):
    n = a.semigroup.size
    doc = {
        "schema": 1, "kind": "finite-action", "phase": a.phase,
        "semigroup": {"elements": n, "compose": [list(r) for r in a.semigroup.compose],
                      "identity": a.semigroup.identity},
        "act": [list(r) for r in a.act],
        "ideals": [{"carrier": sorted(c)} for c in carriers] + ["full"],
    }
    parsed = parse_text(json.dumps(doc))
    again = parse_text(parsed.dumps())
    assert again == parsed and again.model.act == a.act
