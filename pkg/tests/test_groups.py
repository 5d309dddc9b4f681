import itertools
from math import prod

import pytest
from hypothesis import given, settings, strategies as st
from sympy import totient

from normrel.errors import CapExceededError, InvalidInputError, NotAbelianError
from normrel.groups import (abelian_structure, all_subgroups, alternating_group, check_group_axioms,
                            check_subgroup, coset_representatives, cyclic_group, cyclic_subgroup,
                            dihedral_group, direct_product, group_from_abelian_invariants,
                            group_from_permutations, group_from_spec, has_noncyclic_pq_subgroup,
                            named_group, normalizer, quaternion_group, sl2_group, subgroup_id,
                            symmetric_group)


def brute_subgroups(g):
    """Every subset closed under multiplication (order <= 16 only)."""
    n = g.order
    found = set()
    for r in range(0, n):
        for rest in itertools.combinations(range(1, n), r):
            s = (0,) + rest
            if n % len(s):
                continue
            ss = set(s)
            if all(g.mul(a, b) in ss for a in s for b in s):
                found.add(s)
    return found


def perm_closure_size(gens, m):
    seen = {tuple(range(m))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for q in gens:
                r = tuple(p[q[k]] for k in range(m))
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return len(seen)


def test_permutation_constructor_small_cases():
    assert group_from_permutations([[1, 0]]).order == 2
    assert group_from_permutations([]).order == 1
    a5 = group_from_permutations([[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]])
    assert a5.order == 60 == perm_closure_size([(1, 2, 3, 4, 0), (1, 2, 0, 3, 4)], 5)


def test_invalid_permutation_rejected():
    with pytest.raises(InvalidInputError):
        group_from_permutations([[0, 0, 1]])


def test_order_cap(monkeypatch):
    monkeypatch.setenv("NORMREL_ORDER_CAP", "50")
    with pytest.raises(CapExceededError):
        symmetric_group(5)
    with pytest.raises(CapExceededError):
        group_from_abelian_invariants([8, 8])
    monkeypatch.setenv("NORMREL_ORDER_CAP", "nope")
    with pytest.raises(InvalidInputError):
        cyclic_group(3)


def test_abelian_constructor():
    assert group_from_abelian_invariants([2, 2]).order == 4
    assert group_from_abelian_invariants([18, 2]).order == 36
    assert group_from_abelian_invariants([1]).order == 1


def test_direct_product():
    c2 = cyclic_group(2)
    assert direct_product(c2, c2).order == 4
    p = direct_product(cyclic_group(3), symmetric_group(3))
    assert p.order == 18 and check_group_axioms(p)
    s4 = symmetric_group(4)
    q = direct_product(cyclic_group(1), s4)
    assert sorted(q.element_orders) == sorted(s4.element_orders)


@pytest.mark.parametrize("g,count", [
    (group_from_abelian_invariants([2, 2]), 5),
    (symmetric_group(3), 6),
    (cyclic_group(5), 2),
    (alternating_group(5), 59),
    (symmetric_group(4), 30),
])
def test_subgroup_counts(g, count):
    subs = all_subgroups(g)
    assert len(subs) == count
    assert len({h.elements for h in subs}) == count
    assert all(check_subgroup(h) for h in subs)
    assert [h.sort_key() for h in subs] == sorted(h.sort_key() for h in subs)


@pytest.mark.parametrize("g", [cyclic_group(8), group_from_abelian_invariants([2, 4]), dihedral_group(4),
                               quaternion_group(), symmetric_group(3), group_from_abelian_invariants([2, 2, 2])])
def test_subgroups_match_exhaustive_scan(g):
    assert {h.elements for h in all_subgroups(g)} == brute_subgroups(g)


def test_max_index_and_cyclic_filters():
    g = alternating_group(5)
    subs = all_subgroups(g, max_index=12)
    assert all(h.index <= 12 for h in subs)
    assert {h.elements for h in subs} == {h.elements for h in all_subgroups(g) if h.index <= 12}
    cyc = all_subgroups(g, cyclic_only=True)
    assert {h.elements for h in cyc} == {cyclic_subgroup(g, x).elements for x in range(g.order)}


def test_normalizer_examples():
    s3 = symmetric_group(3)
    subs = all_subgroups(s3)
    order2 = [h for h in subs if h.order == 2]
    order3 = [h for h in subs if h.order == 3][0]
    for h in order2:
        assert normalizer(s3, h).elements == h.elements
    assert normalizer(s3, order3).order == 6
    ab = group_from_abelian_invariants([2, 6])
    assert all(normalizer(ab, h).order == ab.order for h in all_subgroups(ab))


def test_coset_representatives_examples():
    c4 = cyclic_group(4)
    h = cyclic_subgroup(c4, 2)
    assert len(coset_representatives(c4, h)) == 2
    s3 = symmetric_group(3)
    c3 = [k for k in all_subgroups(s3) if k.order == 3][0]
    assert len(coset_representatives(s3, c3)) == 2
    full = all_subgroups(s3)[-1]
    assert coset_representatives(s3, full) == [0]


def test_abelian_structure_examples():
    assert abelian_structure(group_from_abelian_invariants([2, 2])).invariant_factors == (2, 2)
    st36 = abelian_structure(group_from_abelian_invariants([18, 2]))
    assert tuple(st36.invariant_factors) == (2, 18)
    assert st36.largest_cyclic_order == 18
    assert tuple(abelian_structure(group_from_abelian_invariants([6, 6])).invariant_factors) == (6, 6)
    with pytest.raises(NotAbelianError):
        abelian_structure(symmetric_group(3))


def test_abelian_structure_generators_have_stated_orders():
    g = group_from_abelian_invariants([4, 6, 10])
    st = abelian_structure(g)
    assert prod(st.invariant_factors) == g.order
    assert all(st.invariant_factors[i + 1] % st.invariant_factors[i] == 0
               for i in range(len(st.invariant_factors) - 1))
    assert [int(g.element_orders[x]) for x in st.generator_elements] == list(st.invariant_factors)
    for p, (gp, gq) in st.p_parts.items():
        assert gp.order * gq.order == g.order
        assert gp.order % p == 0 and gq.order % p != 0


def test_noncyclic_pq_examples():
    ok, witness = has_noncyclic_pq_subgroup(group_from_abelian_invariants([2, 2]))
    assert ok and witness.order == 4
    assert not has_noncyclic_pq_subgroup(quaternion_group())[0]
    assert not has_noncyclic_pq_subgroup(cyclic_group(30))[0]
    ok, witness = has_noncyclic_pq_subgroup(symmetric_group(3))
    assert ok and witness.order == 6


def test_named_and_spec():
    assert named_group("A5").order == 60
    assert named_group("D6").order == 12
    assert named_group("Q8").order == 8
    assert group_from_spec({"kind": "product", "factors": [{"kind": "named", "name": "S3"},
                                                           {"kind": "abelian", "invariants": [2]}]}).order == 12
    with pytest.raises(InvalidInputError):
        named_group("X9")
    with pytest.raises(InvalidInputError):
        group_from_spec({"kind": "nope"})


def test_sl2_small():
    g = sl2_group(3)
    assert g.order == 24 and check_group_axioms(g)


def test_subgroup_id_is_position():
    g = symmetric_group(4)
    subs = all_subgroups(g)
    assert [subgroup_id(h) for h in subs] == list(range(len(subs)))


# ---- properties


small_invariants = st.lists(st.integers(1, 6), min_size=1, max_size=3).filter(lambda l: prod(l) <= 72)


@settings(max_examples=30, deadline=None)
@given(small_invariants)
def test_abelian_groups_are_groups(invs):
    g = group_from_abelian_invariants(invs)
    assert g.order == prod(invs)
    assert check_group_axioms(g)
    assert g.is_abelian


@settings(max_examples=30, deadline=None)
@given(st.lists(st.permutations(range(5)), min_size=1, max_size=2))
def test_permutation_groups(gens):
    g = group_from_permutations([list(p) for p in gens])
    assert g.order == perm_closure_size([tuple(p) for p in gens], 5)
    assert check_group_axioms(g)
    orders = g.element_orders
    for x in range(g.order):
        assert g.power(x, int(orders[x])) == 0
        assert all(g.power(x, k) != 0 for k in range(1, int(orders[x])))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([cyclic_group(12), dihedral_group(5), symmetric_group(4), quaternion_group(),
                        group_from_abelian_invariants([2, 6]), alternating_group(4)]))
def test_cyclic_subgroups_phi_count(g):
    cyc = all_subgroups(g, cyclic_only=True)
    assert sum(int(totient(h.order)) for h in cyc) == g.order


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([dihedral_group(6), symmetric_group(4), alternating_group(4), quaternion_group()]),
       st.data())
def test_cosets_partition(g, data):
    subs = all_subgroups(g)
    h = data.draw(st.sampled_from(subs))
    for side in ("left", "right"):
        reps = coset_representatives(g, h, side)
        assert len(reps) == h.index
        prods = [g.mul(r, x) if side == "left" else g.mul(x, r) for r in reps for x in h.elements]
        assert sorted(prods) == list(range(g.order))
