import cmath
from collections import Counter
from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint

from _corpus import abelian_corpus
from normrel.abelian import (dual_group, funakura_coefficient, funakura_relation, funakura_terms, kernel,
                             optimal_abelian_relation, perp, perp_of_dual, radical)
from normrel.errors import CyclicGroupError, NotAbelianError
from normrel.groups import abelian_structure, all_subgroups, cyclic_group, group_from_abelian_invariants, symmetric_group
from normrel.relations import (minimal_relation_index, optimal_denominator, permutation_character,
                               verify_relation)

V4 = group_from_abelian_invariants([2, 2])


def noncyclic(max_order):
    return [g for g in abelian_corpus() if g.order <= max_order and len(abelian_structure(g).invariant_factors) >= 2]


def test_dual_examples():
    t = dual_group(V4)
    assert len(t.characters) == 4 and all(c.order <= 2 for c in t.characters)
    t6 = dual_group(cyclic_group(6))
    assert Counter(c.order for c in t6.characters) == {1: 1, 2: 1, 3: 2, 6: 2}
    t1 = dual_group(cyclic_group(1))
    assert len(t1.characters) == 1 and t1.characters[0].order == 1
    with pytest.raises(NotAbelianError):
        dual_group(symmetric_group(3))


def test_perp_examples():
    t = dual_group(V4)
    subs = all_subgroups(V4)
    assert perp(t, subs[0]).order == 4
    assert perp(t, subs[-1]).order == 1
    for h in subs[1:4]:
        p = perp(t, h)
        assert p.order == 2
        assert perp_of_dual(t, p).elements == h.elements


def test_funakura_coefficient_examples():
    t = dual_group(V4)
    triv = t.characters[0]
    for formula in ("moebius", "product"):
        assert funakura_coefficient(V4, triv, formula) == Fraction(-1, 2)
        for chi in t.characters[1:]:
            assert funakura_coefficient(V4, chi, formula) == Fraction(1, 2)
    rel = funakura_relation(V4)
    assert rel.denominator == 2
    assert sorted((h.order, b) for h, b in rel.coefficients.items()) == [(2, 1), (2, 1), (2, 1), (4, -1)]


@pytest.mark.parametrize("invs,d", [([2, 2], 2), ([18, 2], 2), ([3, 3], 3)])
def test_funakura_denominators(invs, d):
    g = group_from_abelian_invariants(invs)
    rel = funakura_relation(g)
    assert rel.denominator == d and verify_relation(rel)


def test_cyclic_rejected():
    with pytest.raises(CyclicGroupError):
        funakura_relation(cyclic_group(12))
    assert optimal_abelian_relation(cyclic_group(12)) is None


def test_optimal_examples():
    o = optimal_abelian_relation(V4)
    assert o.relation.denominator == 2 and o.n0 == 2 and o.case == "prime-power"
    o = optimal_abelian_relation(group_from_abelian_invariants([6, 6]))
    assert o.relation.denominator == 1 and o.n0 == 18 and o.case == "coprime"
    assert verify_relation(o.relation)


def test_radical():
    assert radical(36) == 6 and radical(1) == 1 and radical(64) == 2


# ---- corpus invariants


@pytest.mark.parametrize("g", [g for g in abelian_corpus() if g.order <= 64], ids=lambda g: g.label)
def test_duality_matches_permutation_characters(g):
    t = dual_group(g)
    big = t.exponent
    for h in all_subgroups(g):
        p = perp(t, h)
        assert h.order * p.order == g.order
        ind = permutation_character(h)
        for x in range(g.order):
            total = sum(cmath.exp(2j * cmath.pi * int(t.pairing[x, c]) / big) for c in p.elements)
            assert abs(total - ind[x]) < 1e-8


@pytest.mark.parametrize("g", noncyclic(64), ids=lambda g: g.label)
def test_funakura_formulas_and_denominator(g):
    terms = funakura_terms(g)
    assert all(t.moebius == t.product for t in terms)
    rel = funakura_relation(g)
    assert verify_relation(rel)
    bound = g.order // radical(g.order)
    assert bound % rel.denominator == 0
    if len(factorint(g.order)) == 1:
        assert rel.denominator == bound


@pytest.mark.parametrize("g", noncyclic(36), ids=lambda g: g.label)
def test_optimal_relation_index_is_tight(g):
    o = optimal_abelian_relation(g)
    assert verify_relation(o.relation)
    assert max(h.index for h in o.relation.subgroups()) <= o.n0
    constraint = 1 if o.case == "coprime" else None
    assert minimal_relation_index(g, "general", constraint) == o.n0


@pytest.mark.parametrize("g", noncyclic(36), ids=lambda g: g.label)
def test_denominator_one_iff_two_primes_in_q(g):
    st_ = abelian_structure(g)
    q_order = prod(st_.invariant_factors[:-1])
    fam = [h for h in all_subgroups(g) if h.order > 1]
    assert (optimal_denominator(g, fam) == 1) == (len(factorint(q_order)) >= 2)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 6]), min_size=2, max_size=3).filter(lambda l: prod(l) <= 72))
def test_kernels_have_order_matching_character(invs):
    g = group_from_abelian_invariants(invs)
    t = dual_group(g)
    for chi in t.characters:
        assert kernel(t, chi).order * chi.order == g.order
