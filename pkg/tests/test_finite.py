import random

import pytest
from conftest import (
    E,
    M,
    make_e1,
    naive_asym,
    naive_max_scrambled,
    naive_prox,
    naive_scrambled,
)

from chaoslab import finite as fe
from chaoslab.algebra import CardinalBound, ALEPH0, FiniteCarrier, Full, semigroup_from_generators
from chaoslab.errors import (
    HypothesisViolated,
    IdealKindMismatch,
    InvalidStructure,
    NotEquivariant,
    NotGenerating,
    NotInvariant,
    PhaseTooLarge,
)
from chaoslab.verify import random_action, random_carrier

NONE_ = FiniteCarrier()
ONLY_E = FiniteCarrier(frozenset({E}))
DIAG3 = {(0, 0), (1, 1), (2, 2)}


def pairs(rel):
    return set(rel.pairs)


class TestActionValidation:
    def test_rejects_incompatible_table(self):
        sg = semigroup_from_generators([(0, 0, 2)])
        with pytest.raises(InvalidStructure):
            fe.FiniteAction(sg, [[0, 1], [1, 0], [2, 2]])

    def test_identity_law(self):
        sg = semigroup_from_generators([(0, 0, 2)])
        with pytest.raises(InvalidStructure):
            fe.FiniteAction(sg, [[1, 0], [1, 0], [2, 2]])


class TestRelationsOnE1:
    def test_prox(self, e1):
        assert pairs(fe.prox_pairs(e1)) == DIAG3 | {(0, 1), (1, 0)}

    def test_identity_prox_is_diagonal(self):
        sg = semigroup_from_generators([(0, 1, 2)])
        assert pairs(fe.prox_pairs(fe.trivial_action(sg, 3))) == DIAG3

    def test_asym_with_carrier_e(self, e1):
        asym = fe.asym_pairs(e1, ONLY_E)
        assert (0, 1) in asym and (0, 2) not in asym
        assert e1.disagreement(0, 2) == frozenset({E, M})

    def test_asym_full_is_everything(self, e1):
        assert len(fe.asym_pairs(e1, Full()).pairs) == 9

    def test_scrambled(self, e1):
        assert pairs(fe.scrambled_pairs(e1, NONE_)) == {(0, 1), (1, 0)}
        assert pairs(fe.scrambled_pairs(e1, ONLY_E)) == set()
        assert pairs(fe.scrambled_pairs(e1, Full())) == set()

    def test_cardinal_ideal_is_a_kind_mismatch(self, e1):
        with pytest.raises(IdealKindMismatch):
            fe.asym_pairs(e1, CardinalBound(ALEPH0))

    def test_max_scrambled(self, e1):
        assert fe.max_scrambled_set(e1, NONE_) == (0, 1)
        assert fe.max_scrambled_set(e1, Full()) == ()

    def test_verdicts(self, e1):
        v = fe.is_li_yorke_chaotic_mod(e1, NONE_)
        assert not v.verdict and v.max_scrambled_size == 2
        sg = semigroup_from_generators([(0, 1)])
        v = fe.is_li_yorke_chaotic_mod(fe.trivial_action(sg, 2), NONE_)
        assert not v.verdict and "no scrambled pair" in v.witness

    def test_classes(self, e1):
        assert fe.asym_equivalence_classes(e1, ONLY_E) == [(0, 1), (2,)]
        assert fe.asym_equivalence_classes(e1, NONE_) == [(0,), (1,), (2,)]
        assert fe.asym_equivalence_classes(e1, Full()) == [(0, 1, 2)]

    def test_prox_union(self, e1):
        assert fe.prox_union_asym_check(e1).holds

    def test_prox_union_needs_two_elements(self):
        sg = semigroup_from_generators([(0, 1)])
        with pytest.raises(HypothesisViolated):
            fe.prox_union_asym_check(fe.trivial_action(sg, 2))

    def test_never_agreeing_pair_is_in_neither_side(self):
        sg = semigroup_from_generators([(1, 2, 0)])
        a = fe.natural_action(sg)
        assert (0, 1) not in fe.prox_pairs(a)
        assert fe.prox_union_asym_check(a).holds


class TestAgainstNaiveOracle:
    @pytest.mark.parametrize("seed", range(25))
    def test_relations(self, seed):
        rng = random.Random(seed)
        a = random_action(rng, 5, 4)
        ideal = random_carrier(rng, a.semigroup)
        assert pairs(fe.prox_pairs(a)) == naive_prox(a)
        assert pairs(fe.asym_pairs(a, ideal)) == naive_asym(a, ideal)
        assert pairs(fe.scrambled_pairs(a, ideal)) == naive_scrambled(a, ideal)

    @pytest.mark.parametrize("seed", range(15))
    def test_max_scrambled(self, seed):
        rng = random.Random(1000 + seed)
        a = random_action(rng, 8, 4, min_size=2)
        ideal = random_carrier(rng, a.semigroup, proper=True)
        got = fe.max_scrambled_set(a, ideal)
        want = naive_max_scrambled(a, ideal)
        assert len(got) == len(want)
        # lexicographically smallest among the maximum ones
        assert got == want

    def test_phase_limit(self):
        sg = semigroup_from_generators([tuple(range(65))])
        with pytest.raises(PhaseTooLarge):
            fe.max_scrambled_set(fe.trivial_action(sg, 65), FiniteCarrier())


class TestProducts:
    def test_single_factor(self, e1):
        p = fe.product_action([e1])
        assert p.labels == ((0,), (1,), (2,))
        assert pairs(fe.prox_pairs(p)) == naive_prox(e1)
        assert pairs(fe.asym_pairs(p, ONLY_E)) == naive_asym(e1, ONLY_E)

    def test_e1_squared(self, e1):
        assert fe.check_product_law([e1, e1], ONLY_E).holds

    def test_prox_of_product_inside_componentwise(self, e1):
        ident = fe.trivial_action(e1.semigroup, 2)
        p = fe.product_action([e1, ident])
        comp = fe.componentwise_relation(p.labels, [fe.prox_pairs(e1), fe.prox_pairs(ident)])
        assert fe.prox_pairs(p).pairs <= comp.pairs

    def test_mixed_product_of_two_e1(self, e1):
        mixed = fe.product_action_mixed([(e1, ONLY_E), (e1, NONE_)])
        sizes = mixed.action.semigroup.size
        assert sizes == 4
        # generated carrier: {(s1, s2) : s1 in {e}}
        names = mixed.action.semigroup.names
        assert {names[i] for i in mixed.ideal.carrier} == {(E, E), (E, M)}
        assert fe.check_mixed_product_law([(e1, ONLY_E), (e1, NONE_)]).holds

    def test_mixed_product_all_full(self, e1):
        mixed = fe.product_action_mixed([(e1, Full()), (e1, Full())])
        assert isinstance(mixed.ideal, Full)
        assert len(fe.asym_pairs(mixed.action, mixed.ideal).pairs) == 81

    def test_mixed_product_full_next_to_proper_breaks_equality(self, e1):
        # A full factor ideal generates a product ideal that still misses
        # the separating sets of the other factor; the equality needs every
        # factor ideal proper, or every one full.
        law = fe.check_mixed_product_law([(e1, FiniteCarrier()), (e1, Full())])
        assert not law.holds
        assert law.counterexample == ((0, 0), (1, 0))


class TestRestrictions:
    def test_whole_subsemigroup(self, e1):
        r = fe.restrict_to_subsemigroup(e1, e1.semigroup.elements)
        assert r.semigroup.size == 2

    def test_identity_subsemigroup(self, e1):
        r = fe.restrict_to_subsemigroup(e1, [E])
        assert pairs(fe.asym_pairs(r, FiniteCarrier())) == DIAG3
        assert fe.asym_pairs(e1, NONE_).pairs <= fe.asym_pairs(r, FiniteCarrier()).pairs

    def test_invariant_subset(self, e1):
        assert fe.is_invariant_subset(e1, {0, 1})
        assert not fe.is_invariant_subset(e1, {1})
        sub = fe.restrict_to_invariant_subset(e1, {0, 1})
        assert sub.phase == 2


class TestHomomorphismsAndQuotients:
    def test_identity_homomorphism(self, e1):
        phi = fe.ActionHomomorphism(e1, e1, (0, 1, 2))
        assert fe.homomorphism_image_check(phi, ONLY_E).holds

    def test_not_equivariant(self, e1):
        with pytest.raises(NotEquivariant):
            fe.ActionHomomorphism(e1, e1, (1, 1, 2))

    def test_quotient_of_e1(self, e1):
        rel = fe.InvariantRelation(e1, fe.PairRelation(3, frozenset(DIAG3 | {(0, 1), (1, 0)})))
        q = fe.quotient_action(e1, rel)
        assert q.action.phase == 2
        assert rel.classes() == [(0, 1), (2,)]
        assert fe.homomorphism_image_check(q.projection, ONLY_E).holds

    def test_diagonal_and_total_quotients(self, e1):
        q = fe.quotient_action(e1, fe.InvariantRelation(e1, fe.PairRelation.diagonal(3)))
        assert q.action.phase == 3
        q = fe.quotient_action(e1, fe.InvariantRelation(e1, fe.PairRelation.total(3)))
        assert q.action.phase == 1
        assert len(fe.asym_pairs(q.action, FiniteCarrier()).pairs) == 1

    def test_constant_map_to_point(self, e1):
        point = fe.trivial_action(e1.semigroup, 1)
        phi = fe.ActionHomomorphism(e1, point, (0, 0, 0))
        assert fe.homomorphism_image_check(phi, NONE_).holds

    def test_non_invariant_relation(self, e1):
        with pytest.raises(NotInvariant):
            fe.InvariantRelation(e1, fe.PairRelation(3, frozenset(DIAG3 | {(1, 2), (2, 1)})))

    def test_closure(self, e1):
        rel = fe.invariant_closure(e1, [(1, 2)])
        # 1m = 0, 2m = 2 forces (0,2) and then everything
        assert rel.classes() == [(0, 1, 2)]


class TestCoDecomposition:
    def test_single_part(self, e1):
        d = fe.co_decompose(e1, [e1.semigroup.elements])
        assert d.commuting and len(d.factors) == 1

    def test_abelian_cyclic_parts(self):
        sg = semigroup_from_generators([(1, 0, 2, 3), (0, 1, 3, 2)])
        a = fe.natural_action(sg)
        assert fe.co_decompose(a, [[1], [2]]).commuting

    def test_s3_non_commuting(self):
        sg = semigroup_from_generators([(1, 0, 2), (1, 2, 0)])
        a = fe.FiniteAction(sg, [[sg.maps[s][x] for s in sg.elements] for x in range(3)])
        d = fe.co_decompose(a, [[1], [2]])
        assert not d.commuting
        x, s, t = d.non_commuting_witness
        assert a.act[a.act[x][s]][t] != a.act[a.act[x][t]][s]

    def test_not_generating(self):
        sg = semigroup_from_generators([(1, 0, 2), (1, 2, 0)])
        with pytest.raises(NotGenerating):
            fe.co_decompose(fe.natural_action(sg), [[1]])
