from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from _oracles import all_translates, norm_rows, oracle_denominator
from normrel.algebra import ZZ, AlgebraElement
from normrel.errors import BudgetExceededError, InvalidInputError
from normrel.groups import (all_subgroups, alternating_group, cyclic_group,
                            dihedral_group, group_from_abelian_invariants, has_noncyclic_pq_subgroup,
                            is_conjugation_closed, quaternion_group, symmetric_group)
from normrel.relations import (BrauerRelation, NormRelation, ScalarRelation, admits_norm_relation,
                               brauer_to_scalar, denominator_support, exists_relation_mod_p,
                               find_norm_relation, find_scalar_relation, minimal_relation_index,
                               optimal_denominator, permutation_character, scalar_denominator,
                               scalar_to_brauer, verify_brauer, verify_relation)

V4 = group_from_abelian_invariants([2, 2])
C3C3 = group_from_abelian_invariants([3, 3])
S3 = symmetric_group(3)


def nontrivial(g, **kw):
    return [h for h in all_subgroups(g, **kw) if h.order > 1]


def basis(g, x, c=1):
    return AlgebraElement.basis(g, x, ZZ, c)


def sub(g, gens):
    from normrel.groups import subgroup_generated
    return subgroup_generated(g, gens)


# ---- worked examples


def test_klein_four_witness_and_denominator():
    s, t, st_ = 1, 2, 3
    one = AlgebraElement.one(V4, ZZ)
    witness = NormRelation(V4, 2, [(one, sub(V4, [s]), one), (one, sub(V4, [t]), one),
                                   (basis(V4, s, -1), sub(V4, [st_]), one)])
    assert verify_relation(witness)
    fam = nontrivial(V4)
    assert optimal_denominator(V4, fam) == 2
    rel = find_norm_relation(V4, fam)
    assert rel.denominator == 2 and verify_relation(rel)


def test_c3xc3_witness_and_denominator():
    u, v = 1, 3
    uv, u2v = 4, 5
    one = AlgebraElement.one(C3C3, ZZ)
    a = basis(C3C3, u, -1) + basis(C3C3, uv, -1)
    witness = NormRelation(C3C3, 3, [(one, sub(C3C3, [u]), one), (one, sub(C3C3, [v]), one),
                                     (one, sub(C3C3, [uv]), one), (a, sub(C3C3, [u2v]), one)])
    assert verify_relation(witness)
    rel = find_norm_relation(C3C3, nontrivial(C3C3))
    assert rel.denominator == 3 and verify_relation(rel)


def test_c6xc6_denominator_one():
    g = group_from_abelian_invariants([6, 6])
    assert optimal_denominator(g, nontrivial(g)) == 1
    assert exists_relation_mod_p(g, nontrivial(g), 2)


def test_no_relation_cases():
    c30 = cyclic_group(30)
    assert optimal_denominator(c30, nontrivial(c30)) == 0
    assert find_norm_relation(c30, nontrivial(c30)) is None
    whole = [all_subgroups(V4)[-1]]
    assert optimal_denominator(V4, whole) == 0
    c5 = cyclic_group(5)
    assert find_scalar_relation(c5, nontrivial(c5)) is None


def test_scalar_examples():
    rel = find_scalar_relation(V4, nontrivial(V4))
    assert rel.denominator == 2
    assert {h.order: b for h, b in rel.coefficients.items() if h.order == 4} == {4: -1}
    assert sorted(b for h, b in rel.coefficients.items() if h.order == 2) == [1, 1, 1]
    fam = nontrivial(S3)
    c3 = [h for h in fam if h.order == 3][0]
    literal = ScalarRelation(S3, 3, {h: (-1 if h.order == 6 else 1) for h in fam})
    assert verify_relation(literal)
    found = find_scalar_relation(S3, fam)
    assert found.denominator == 3 and verify_relation(found)
    assert c3 in fam


def test_mod_p_examples():
    fam = nontrivial(V4)
    assert exists_relation_mod_p(V4, fam, 3)
    assert not exists_relation_mod_p(V4, fam, 2)
    with pytest.raises(InvalidInputError):
        exists_relation_mod_p(V4, fam, 4)


def test_admits_examples():
    assert admits_norm_relation(quaternion_group())[0] is False
    assert admits_norm_relation(S3)[0] is True
    for n in (1, 2, 7, 12, 30):
        assert admits_norm_relation(cyclic_group(n))[0] is False


def test_brauer_examples():
    rel = find_scalar_relation(V4, nontrivial(V4))
    brel = scalar_to_brauer(rel)
    assert verify_brauer(brel)
    by_order = sorted((h.order, a) for h, a in brel.coefficients.items())
    assert by_order == [(1, -2), (2, 2), (2, 2), (2, 2), (4, -4)]
    back = brauer_to_scalar(brel)
    assert back.denominator == 2 and verify_relation(back)
    s3rel = find_scalar_relation(S3, nontrivial(S3))
    b3 = scalar_to_brauer(s3rel)
    assert verify_brauer(b3)
    assert [a for h, a in b3.coefficients.items() if h.order == 1] == [-s3rel.denominator]


def test_brauer_rejections():
    subs = all_subgroups(S3)
    trivial, full = subs[0], subs[-1]
    c3 = [h for h in subs if h.order == 3][0]
    c2 = [h for h in subs if h.order == 2][0]
    brel = BrauerRelation(S3, {trivial: Fraction(1), full: Fraction(2), c3: Fraction(-1), c2: Fraction(-2)})
    assert verify_brauer(brel)
    with pytest.raises(InvalidInputError, match="conjugation"):
        brauer_to_scalar(brel)
    with pytest.raises(InvalidInputError):
        brauer_to_scalar(BrauerRelation(S3, {h: Fraction(0) for h in subs}))


def test_permutation_character_fixed_cosets():
    subs = all_subgroups(S3)
    assert permutation_character(subs[0]) == [6, 0, 0, 0, 0, 0]
    assert permutation_character(subs[-1]) == [1] * 6


def test_denominator_support_examples():
    assert denominator_support(2) == {2}
    assert denominator_support(1) == set()
    assert denominator_support(12) == {2, 3}


def test_minimal_relation_index_examples():
    assert minimal_relation_index(V4) == 2
    assert minimal_relation_index(group_from_abelian_invariants([6, 6]), "general", 1) == 18
    assert minimal_relation_index(cyclic_group(7)) == 0
    with pytest.raises(InvalidInputError):
        minimal_relation_index(V4, "other")
    with pytest.raises(BudgetExceededError):
        minimal_relation_index(V4, max_order=2)


def test_a5_small_index_family():
    g = alternating_group(5)
    fam = nontrivial(g, max_index=12)
    s = find_scalar_relation(g, fam)
    assert s is not None and verify_relation(s)
    assert denominator_support(s) <= {2, 3, 5}
    r = find_norm_relation(g, fam)
    assert verify_relation(r) and denominator_support(r) <= {2, 5}


def test_verify_rejects_bad_relations():
    one = AlgebraElement.one(V4, ZZ)
    trivial = all_subgroups(V4)[0]
    assert not verify_relation(NormRelation(V4, 1, [(one, trivial, one)]))
    fam = nontrivial(V4)
    rel = find_scalar_relation(V4, fam)
    doubled = ScalarRelation(V4, 4, {h: 2 * b for h, b in rel.coefficients.items()})
    assert not verify_relation(doubled)
    wrong = ScalarRelation(V4, 3, dict(rel.coefficients))
    assert not verify_relation(wrong)


# ---- oracles and invariants


ORACLE_GROUPS = [V4, C3C3, S3, cyclic_group(6), dihedral_group(4), quaternion_group(),
                 group_from_abelian_invariants([2, 4]), group_from_abelian_invariants([2, 6]),
                 alternating_group(4), dihedral_group(6)]


@pytest.mark.parametrize("g", ORACLE_GROUPS, ids=lambda g: g.label)
def test_denominators_match_snf_oracle(g):
    for fam in (nontrivial(g), nontrivial(g, cyclic_only=True)):
        assert optimal_denominator(g, fam) == oracle_denominator(all_translates(g, fam), g.order)
        assert scalar_denominator(g, fam) == oracle_denominator(norm_rows(g, fam), g.order)


@pytest.mark.parametrize("g", ORACLE_GROUPS + [symmetric_group(4), alternating_group(5)], ids=lambda g: g.label)
def test_relations_reverify_and_invariants(g):
    for fam in (nontrivial(g), nontrivial(g, cyclic_only=True)):
        d = optimal_denominator(g, fam)
        rel = find_norm_relation(g, fam, seed=3)
        assert (rel is None) == (d == 0)
        if rel is not None:
            assert rel.denominator == d and verify_relation(rel)
            assert g.order ** 3 % d == 0
        for p in (2, 3, 5, 7):
            assert exists_relation_mod_p(g, fam, p) == (d % p != 0)
        s = find_scalar_relation(g, fam)
        if s is not None:
            assert verify_relation(s)
            assert s.denominator % d == 0
            brel = scalar_to_brauer(s)
            assert verify_brauer(brel)
            if not is_conjugation_closed([h for h, a in brel.coefficients.items() if a]):
                continue
            back = brauer_to_scalar(brel)
            assert back is not None and verify_relation(back)
            assert denominator_support(back) == denominator_support(s)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(ORACLE_GROUPS), st.data())
def test_random_conjugation_closed_families(g, data):
    from normrel.groups import conjugacy_class_of_subgroup
    subs = nontrivial(g)
    picks = data.draw(st.lists(st.sampled_from(subs), min_size=1, max_size=4))
    fam = {}
    for h in picks:
        for k in conjugacy_class_of_subgroup(h):
            fam[k.elements] = k
    fam = list(fam.values())
    d = optimal_denominator(g, fam)
    assert d == oracle_denominator(all_translates(g, fam), g.order)
    if d:
        assert g.order ** 3 % d == 0


@pytest.mark.parametrize("g", ORACLE_GROUPS + [symmetric_group(4), cyclic_group(15)], ids=lambda g: g.label)
def test_classification_consistency(g):
    cyc = nontrivial(g, cyclic_only=True)
    assert admits_norm_relation(g)[0] == has_noncyclic_pq_subgroup(g)[0] == (optimal_denominator(g, cyc) > 0)


def test_seed_determinism():
    g = alternating_group(4)
    fam = nontrivial(g)
    a = find_norm_relation(g, fam, seed=5)
    b = find_norm_relation(g, fam, seed=5)
    assert [(list(x.coeffs), h.elements, list(y.coeffs)) for x, h, y in a.terms] == \
           [(list(x.coeffs), h.elements, list(y.coeffs)) for x, h, y in b.terms]


@pytest.mark.stretch
def test_scalar_versus_general_index_gap():
    # TODO: build C2 x SU3(F2) (order 432) from permutation generators and compare
    # minimal_relation_index for the scalar and general kinds
    pytest.skip("no constructor for C2 x SU3(F2) yet")
