import pytest
from hypothesis import given, settings, strategies as st

from normrel.algebra import (GF, QQ, ZZ, AlgebraElement, contains_one, multiply, norm_element,
                             reassemble, two_sided_ideal_basis)
from normrel.errors import InvalidInputError
from normrel.groups import (all_subgroups, alternating_group, conjugate_subgroup, cyclic_group,
                            dihedral_group, group_from_abelian_invariants, quaternion_group,
                            symmetric_group)

V4 = group_from_abelian_invariants([2, 2])
GROUPS = [V4, cyclic_group(6), symmetric_group(3), dihedral_group(4), quaternion_group(), alternating_group(4)]


def naive_product(x, y):
    g = x.group
    out = [0] * g.order
    for u in range(g.order):
        for v in range(g.order):
            out[g.mul(u, v)] += x.coeffs[u] * y.coeffs[v]
    return out


def nontrivial(g):
    return [h for h in all_subgroups(g) if h.order > 1]


def test_identity_is_neutral():
    g = symmetric_group(3)
    x = AlgebraElement(g, ZZ, [1, -2, 0, 3, 5, 7])
    one = AlgebraElement.one(g, ZZ)
    assert multiply(one, x) == x and multiply(x, one) == x


def test_norm_square_klein():
    for h in [k for k in all_subgroups(V4) if k.order == 2]:
        n = norm_element(h, QQ)
        assert multiply(n, n) == n.scale(2)


def test_norm_square_vanishes_mod_2():
    c2 = cyclic_group(2)
    n = norm_element(all_subgroups(c2)[-1], GF(2))
    assert multiply(n, n).is_zero()


def test_norm_element_examples():
    c3 = cyclic_group(3)
    subs = all_subgroups(c3)
    assert norm_element(subs[0], QQ) == AlgebraElement.one(c3, QQ)
    assert list(norm_element(subs[-1], QQ).coeffs) == [1, 1, 1]


def test_ring_and_group_mismatch():
    a = AlgebraElement.one(V4, QQ)
    with pytest.raises(InvalidInputError):
        multiply(a, AlgebraElement.one(V4, GF(3)))
    with pytest.raises(InvalidInputError):
        multiply(a, AlgebraElement.one(cyclic_group(4), QQ))


def test_fp_coefficients_reduced():
    a = AlgebraElement(cyclic_group(2), GF(5), [7, -1])
    assert list(a.coeffs) == [2, 4]


def test_ideal_examples():
    fam = [h for h in all_subgroups(V4) if h.order > 1]
    b = two_sided_ideal_basis(V4, fam, QQ)
    assert b.rank == 4
    ok, cert = contains_one(b)
    assert ok and reassemble(V4, cert, QQ) == AlgebraElement.one(V4, QQ)
    c5 = cyclic_group(5)
    b5 = two_sided_ideal_basis(c5, [all_subgroups(c5)[-1]], QQ)
    assert b5.rank == 1 and not contains_one(b5)[0]
    b2 = two_sided_ideal_basis(V4, fam, GF(2))
    assert b2.rank < 4 and not contains_one(b2)[0]
    b3 = two_sided_ideal_basis(V4, fam, GF(3))
    ok3, cert3 = contains_one(b3)
    assert ok3 and reassemble(V4, cert3, GF(3)) == AlgebraElement.one(V4, GF(3))


def test_integer_ideal_rejected():
    with pytest.raises(InvalidInputError):
        two_sided_ideal_basis(V4, nontrivial(V4), ZZ)


def test_ideal_basis_json():
    b = two_sided_ideal_basis(V4, nontrivial(V4), QQ)
    data = b.to_json()
    assert data["rank"] == 4 and data["ring"]


# ---- properties


coeff = st.integers(-4, 4)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GROUPS), st.data())
def test_multiplication_matches_naive_convolution(g, data):
    x = AlgebraElement(g, ZZ, data.draw(st.lists(coeff, min_size=g.order, max_size=g.order)))
    y = AlgebraElement(g, ZZ, data.draw(st.lists(coeff, min_size=g.order, max_size=g.order)))
    assert list(multiply(x, y).coeffs) == naive_product(x, y)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GROUPS), st.data())
def test_multiplication_is_associative(g, data):
    xs = [AlgebraElement(g, QQ, data.draw(st.lists(coeff, min_size=g.order, max_size=g.order))) for _ in range(3)]
    a, b, c = xs
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@pytest.mark.parametrize("g", GROUPS)
def test_norm_absorbs_subgroup_elements(g):
    for h in all_subgroups(g):
        n = norm_element(h, QQ)
        assert multiply(n, n) == n.scale(h.order)
        for x in h.elements:
            e = AlgebraElement.basis(g, x, QQ)
            assert multiply(e, n) == n and multiply(n, e) == n


@pytest.mark.parametrize("g", GROUPS)
def test_conjugated_norm_is_norm_of_conjugate(g):
    for h in all_subgroups(g):
        for x in range(g.order):
            left = multiply(multiply(AlgebraElement.basis(g, x, ZZ), norm_element(h, ZZ)),
                            AlgebraElement.basis(g, g.inv(x), ZZ))
            assert left == norm_element(conjugate_subgroup(h, x), ZZ)


@pytest.mark.parametrize("g", GROUPS + [cyclic_group(7), symmetric_group(4)])
def test_full_rank_iff_contains_one(g):
    for fam in (nontrivial(g), [h for h in all_subgroups(g, cyclic_only=True) if h.order > 1]):
        b = two_sided_ideal_basis(g, fam, QQ)
        ok, cert = contains_one(b)
        assert ok == (b.rank == g.order)
        if ok:
            assert reassemble(g, cert, QQ) == AlgebraElement.one(g, QQ)
