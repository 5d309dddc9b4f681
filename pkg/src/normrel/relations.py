"""Norm relations: search, optimal denominators, classification, Brauer conversions.

The integer route works with the lattice spanned by the 0/1 vectors of the
sets x K y.  Since x K y = (xy)(y^-1 K y), that lattice is spanned by the left
cosets of all conjugates of the subgroups in the family, and a subgroup that
contains another member can be dropped (its norm is a sum of translates of the
smaller norm).  The optimal denominator is read off a row HNF whose last
column is the identity coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

import numpy as np
from sympy import factorint, isprime

from . import lattice
from .algebra import ZZ, AlgebraElement, _echelon_mod_p, multiply, norm_element
from .errors import BudgetExceededError, InvalidInputError, VerificationError
from .groups import (FiniteGroup, Subgroup, all_subgroups, conjugacy_class_of_subgroup,
                     conjugate_subgroup, coset_representatives, has_noncyclic_pq_subgroup,
                     is_conjugation_closed, normalizer)

PQ_CRITERION_LIMIT = 4896  # the pq-subgroup criterion alone decides existence below this order


@dataclass
class NormRelation:
    """d = sum_i a_i N_{H_i} b_i in Z[G]."""

    group: FiniteGroup = field(repr=False)
    denominator: int
    terms: list  # (a: AlgebraElement, H: Subgroup, b: AlgebraElement)

    def evaluate(self) -> AlgebraElement:
        g = self.group
        total = AlgebraElement.zero(g, ZZ)
        for a, h, b in self.terms:
            total = total + multiply(multiply(a, norm_element(h, ZZ)), b)
        return total

    def subgroups(self) -> list:
        out = {}
        for _, h, _ in self.terms:
            out.setdefault(h.elements, h)
        return list(out.values())


@dataclass
class ScalarRelation:
    """d = sum_H b_H N_H in Z[G]."""

    group: FiniteGroup = field(repr=False)
    denominator: int
    coefficients: dict  # Subgroup -> int

    def evaluate(self) -> AlgebraElement:
        total = AlgebraElement.zero(self.group, ZZ)
        for h, b in self.coefficients.items():
            total = total + norm_element(h, ZZ).scale(b)
        return total

    def as_norm_relation(self) -> NormRelation:
        g = self.group
        one = AlgebraElement.one(g, ZZ)
        terms = [(one.scale(b), h, one) for h, b in self.coefficients.items() if b]
        return NormRelation(g, self.denominator, terms)

    def subgroups(self) -> list:
        return [h for h, b in self.coefficients.items() if b]


@dataclass
class BrauerRelation:
    """0 = sum_H a_H Ind_{G/H}(1_H)."""

    group: FiniteGroup = field(repr=False)
    coefficients: dict  # Subgroup -> Fraction

    def is_useful(self) -> bool:
        return any(h.order == 1 and a != 0 for h, a in self.coefficients.items())


# --------------------------------------------------------------------------
# verification


def verify_relation(rel) -> bool:
    """Exact re-check of a NormRelation or ScalarRelation in Z[G]."""
    if rel.denominator < 1:
        return False
    if isinstance(rel, ScalarRelation):
        subs = rel.subgroups()
        entries = list(rel.coefficients.values())
    else:
        subs = [h for _, h, _ in rel.terms]
        entries = [int(c) for a, _, b in rel.terms for c in list(a.coeffs) + list(b.coeffs)]
    if any(h.order == 1 for h in subs):
        return False
    if gcd(rel.denominator, lattice.content(entries)) != 1:
        return False
    value = rel.evaluate()
    expected = AlgebraElement.one(rel.group, ZZ).scale(rel.denominator)
    return value == expected


def permutation_character(h: Subgroup) -> list:
    """Ind_{G/H}(1_H)(g) as the number of left cosets xH fixed by g, for every g."""
    g = h.parent
    reps = np.array(coset_representatives(g, h, "left"))
    # coset of an element: least representative in xH
    el = np.array(h.elements)
    label = np.empty(g.order, dtype=np.int64)
    for i, x in enumerate(reps):
        label[g.table[x, el]] = i
    moved = label[g.table[:, reps]]  # moved[y, i] = label of y * x_i
    fixed = np.sum(moved == np.arange(len(reps))[None, :], axis=1)
    return [int(v) for v in fixed]


def verify_brauer(brel: BrauerRelation) -> bool:
    total = [Fraction(0)] * brel.group.order
    for h, a in brel.coefficients.items():
        if a:
            for i, v in enumerate(permutation_character(h)):
                total[i] += Fraction(a) * v
    return not any(total)


# --------------------------------------------------------------------------
# lattices of the ideal


def _drop_trivial(subgroups):
    return [h for h in subgroups if h.order > 1]


def minimal_conjugation_closure(subgroups: Sequence[Subgroup]) -> list:
    """Inclusion-minimal members of the conjugation closure, each with a source.

    Returns a list of (K, H, t) with K = t^-1 H t and H taken from the input.
    """
    closure = {}
    for h in subgroups:
        g = h.parent
        if h.elements in closure:
            continue
        # t^-1 H t only depends on the coset N(H) t
        for t in coset_representatives(g, normalizer(g, h), "right"):
            k = conjugate_subgroup(h, g.inv(t))
            if k.elements not in closure:
                closure[k.elements] = (k, h, t)
    items = sorted(closure.values(), key=lambda v: v[0].sort_key())
    minimal = []
    masks = None
    for k, h, t in items:
        if masks is not None and np.any(~np.any(masks & ~k.member[None, :], axis=1)):
            continue
        minimal.append((k, h, t))
        row = k.member[None, :]
        masks = row.copy() if masks is None else np.concatenate([masks, row])
    return minimal


def _coset_rows(g: FiniteGroup, minimal) -> tuple:
    rows, origin = [], []
    for k, h, t in minimal:
        el = np.array(k.elements)
        for x in coset_representatives(g, k, "left"):
            v = np.zeros(g.order, dtype=np.int64)
            v[g.table[x, el]] = 1
            rows.append(v)
            origin.append((k, h, t, x))
    return np.array(rows, dtype=np.int64).reshape(len(rows), g.order), origin


def _identity_last(mat: np.ndarray) -> np.ndarray:
    n = mat.shape[1]
    order = list(range(1, n)) + [0]
    return mat[:, order]


def _denominator_from_hnf(h: np.ndarray) -> int:
    if h.shape[0] == 0:
        return 0
    last = h[-1]
    n = h.shape[1]
    if np.any(last[:n - 1] != 0):
        return 0
    return int(last[n - 1])


def ideal_lattice(g: FiniteGroup, subgroups: Sequence[Subgroup]) -> np.ndarray:
    """Row HNF (standard column order) of the Z-span of the two-sided ideal."""
    subgroups = list(subgroups)
    if not subgroups:
        return np.zeros((0, g.order), dtype=np.int64)
    rows, _ = _coset_rows(g, minimal_conjugation_closure(subgroups))
    return lattice.hnf(rows)


def optimal_denominator(g: FiniteGroup, subgroups: Sequence[Subgroup]) -> int:
    """Positive generator of Z intersected with the ideal generated by the N_H; 0 if none."""
    subgroups = list(subgroups)
    if not subgroups:
        return 0
    rows, _ = _coset_rows(g, minimal_conjugation_closure(subgroups))
    return _denominator_from_hnf(lattice.hnf(_identity_last(rows)))


def find_norm_relation(g: FiniteGroup, subgroups: Sequence[Subgroup], seed: int = 0) -> Optional[NormRelation]:
    """A verified relation with denominator d(H), or None when none exists.

    The coefficients come from a transformed HNF on a prefix of the generating
    vectors (shuffled deterministically), doubled until it reaches d(H).
    """
    subgroups = list(subgroups)
    if any(h.order == 1 for h in subgroups):
        raise InvalidInputError("subgroups in a norm relation must be nontrivial")
    if not subgroups:
        return None
    rows, origin = _coset_rows(g, minimal_conjugation_closure(subgroups))
    cols = _identity_last(rows)
    d = _denominator_from_hnf(lattice.hnf(cols))
    if d == 0:
        return None
    idx, coeffs = _witness(cols, d, 2 * g.order, seed)
    # x K with K = t^-1 H t equals (x t^-1) N_H t
    grouped = {}
    for c, j in zip(coeffs, idx):
        c = int(c)
        if not c:
            continue
        k, hh, tt, x = origin[j]
        key = (hh.elements, tt)
        entry = grouped.setdefault(key, [hh, tt, [0] * g.order])
        entry[2][g.mul(x, g.inv(tt))] += c
    terms = []
    for key in sorted(grouped):
        hh, tt, a = grouped[key]
        terms.append((AlgebraElement(g, ZZ, a), hh, AlgebraElement.basis(g, tt, ZZ)))
    rel = NormRelation(g, d, terms)
    if not verify_relation(rel):  # pragma: no cover - exact arithmetic
        raise VerificationError("constructed norm relation failed re-verification")
    return rel


def _witness(cols: np.ndarray, d: int, start: int, seed: int = 0):
    """Rows and integer coefficients combining them to d * e_identity.

    Transformed HNF is quadratic in the number of rows, so it runs on a
    deterministic random prefix, doubled until the prefix reaches d.
    """
    m = cols.shape[0]
    perm = np.random.default_rng(seed).permutation(m)
    size = min(m, max(start, 8))
    while True:
        idx = np.sort(perm[:size])
        if _denominator_from_hnf(lattice.hnf(cols[idx])) == d:
            break
        if size >= m:  # pragma: no cover - the full set always reaches d
            raise VerificationError("prefix search failed to reach the optimal denominator")
        size = min(m, 2 * size)
    h, t = lattice.hnf(cols[idx], transform=True)
    return idx, t[-1]


def scalar_denominator(g: FiniteGroup, subgroups: Sequence[Subgroup]) -> int:
    rel = find_scalar_relation(g, subgroups)
    return 0 if rel is None else rel.denominator


def find_scalar_relation(g: FiniteGroup, subgroups: Sequence[Subgroup]) -> Optional[ScalarRelation]:
    """Scalar relation of minimal denominator among those supported on the family."""
    subgroups = list(dict.fromkeys(subgroups))
    if any(h.order == 1 for h in subgroups):
        raise InvalidInputError("subgroups in a norm relation must be nontrivial")
    if not subgroups:
        return None
    mat = np.zeros((len(subgroups), g.order), dtype=np.int64)
    for i, h in enumerate(subgroups):
        mat[i, list(h.elements)] = 1
    cols = _identity_last(mat)
    d = _denominator_from_hnf(lattice.hnf(cols))
    if d == 0:
        return None
    idx, t = _witness(cols, d, 2 * g.order)
    coeffs = {}
    for j, c in zip(idx, t):
        if int(c):
            coeffs[subgroups[j]] = int(c)
    rel = ScalarRelation(g, d, coeffs)
    if not verify_relation(rel):  # pragma: no cover
        raise VerificationError("constructed scalar relation failed re-verification")
    return rel


def exists_relation_mod_p(g: FiniteGroup, subgroups: Sequence[Subgroup], p: int) -> bool:
    """Whether 1 lies in the two-sided ideal over F_p (elimination mod p)."""
    if not isprime(p):
        raise InvalidInputError(f"{p} is not prime")
    subgroups = list(subgroups)
    if not subgroups:
        return False
    rows, _ = _coset_rows(g, minimal_conjugation_closure(subgroups))
    ech, _, _ = _echelon_mod_p(rows, p)
    target = np.zeros((1, g.order), dtype=np.int64)
    target[0, 0] = 1
    ext, _, _ = _echelon_mod_p(np.concatenate([ech, target]), p)
    return ext.shape[0] == ech.shape[0]


def admits_norm_relation(g: FiniteGroup):
    """(exists, reason) for the family of all nontrivial subgroups.

    Below order 4896 the pq-subgroup criterion decides; above it the ideal test
    is run on the nontrivial cyclic subgroups.
    """
    if g.order < PQ_CRITERION_LIMIT:
        ok, witness = has_noncyclic_pq_subgroup(g)
        if ok:
            return True, {"method": "pq-subgroup", "witness": list(witness.elements)}
        return False, {"method": "pq-subgroup", "witness": None}
    cyc = [h for h in all_subgroups(g, cyclic_only=True) if h.order > 1]
    d = optimal_denominator(g, cyc)
    return d > 0, {"method": "ideal-test", "denominator": d}


# --------------------------------------------------------------------------
# Brauer relations


def scalar_to_brauer(rel: ScalarRelation) -> BrauerRelation:
    """0 = -d Ind_{G/1} + sum_H b_H |H| Ind_{G/H}."""
    if rel.denominator < 1:
        raise InvalidInputError("scalar relation needs d >= 1")
    g = rel.group
    trivial = Subgroup(g, (0,))
    coeffs = {trivial: Fraction(-rel.denominator)}
    for h, b in rel.coefficients.items():
        if b:
            coeffs[h] = coeffs.get(h, Fraction(0)) + Fraction(b * h.order)
    return BrauerRelation(g, coeffs)


def brauer_to_scalar(brel: BrauerRelation) -> Optional[ScalarRelation]:
    """Scalar relation with c_H = (1/|H|) sum_g a_{g^-1 H g}, denominators cleared."""
    g = brel.group
    support = [h for h, a in brel.coefficients.items() if a]
    if not support or not brel.is_useful():
        raise InvalidInputError("Brauer relation is not useful (a_1 = 0)")
    if not is_conjugation_closed(support):
        raise InvalidInputError("support of the Brauer relation is not closed under conjugation")
    coeff_of = {h.elements: Fraction(a) for h, a in brel.coefficients.items()}
    c = {}
    for h in support:
        # as g runs over G each conjugate appears |G|/|class| times
        cls = conjugacy_class_of_subgroup(h)
        total = sum(coeff_of.get(k.elements, Fraction(0)) for k in cls) * (g.order // len(cls))
        c[h] = total / h.order
    c1 = next(v for h, v in c.items() if h.order == 1)
    # 0 = c1 * 1 + sum_{H != 1} c_H N_H  =>  -c1 = sum c_H N_H
    scale = lcm(*(v.denominator for v in c.values()))
    d = -c1 * scale
    b = {h: v * scale for h, v in c.items() if h.order > 1 and v}
    sign = 1 if d > 0 else -1
    d = int(d * sign)
    b = {h: int(v * sign) for h, v in b.items()}
    common = gcd(d, lattice.content(b.values()))
    if d == 0 or common == 0:
        return None
    rel = ScalarRelation(g, d // common, {h: v // common for h, v in b.items()})
    return rel if verify_relation(rel) else None


def denominator_support(rel) -> set:
    d = rel if isinstance(rel, int) else rel.denominator
    return set(factorint(d)) if d > 1 else set()


# --------------------------------------------------------------------------
# index search


def minimal_relation_index(g: FiniteGroup, kind: str = "general",
                           denominator_constraint: Optional[int] = None,
                           max_order: int = 2000) -> int:
    """Smallest n such that subgroups of index <= n carry a relation of the given kind.

    ``denominator_constraint = m`` asks for a relation whose denominator divides
    m (so ``1`` means denominator 1).  Returns 0 when no n works.
    """
    if kind not in ("general", "scalar"):
        raise InvalidInputError("kind must be 'general' or 'scalar'")
    if g.order > max_order:
        raise BudgetExceededError(f"group order {g.order} above the enumeration budget {max_order}")
    subs = _drop_trivial(all_subgroups(g))
    for n in sorted({h.index for h in subs}):
        family = [h for h in subs if h.index <= n]
        d = optimal_denominator(g, family) if kind == "general" else scalar_denominator(g, family)
        if d > 0 and (denominator_constraint is None or denominator_constraint % d == 0):
            return n
    return 0
