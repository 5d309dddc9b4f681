"""Characters of finite abelian groups and explicit scalar norm relations.

Characters are exponent tuples against the invariant-factor generators, so a
character value is an integer residue r meaning exp(2 pi i r / L) with L the
group exponent.  Nothing here touches complex numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm, prod
from typing import Optional

import numpy as np
from sympy import factorint, mobius

from .errors import CyclicGroupError, InvalidInputError, NotAbelianError
from .groups import (AbelianStructure, FiniteGroup, Subgroup, abelian_structure, cyclic_subgroups,
                     group_from_abelian_invariants, lift_subgroup, subgroup_as_group)
from .relations import ScalarRelation


@dataclass(frozen=True)
class Character:
    group: FiniteGroup = field(repr=False, compare=False)
    exponents: tuple
    order: int


@dataclass
class DualityTable:
    group: FiniteGroup = field(repr=False)
    structure: AbelianStructure
    dual: FiniteGroup = field(repr=False)
    characters: list      # indexed like the elements of ``dual``
    pairing: np.ndarray = field(repr=False)  # pairing[x, chi] = residue mod exponent
    perp_cache: dict = field(default_factory=dict)

    @property
    def exponent(self) -> int:
        return self.structure.largest_cyclic_order

    def character_of(self, index: int) -> Character:
        return self.characters[index]

    def index_of(self, chi: Character) -> int:
        idx, w = 0, 1
        for e, d in zip(chi.exponents, self.structure.invariant_factors):
            idx += (e % d) * w
            w *= d
        return idx

    def evaluate(self, chi: Character, x: int) -> int:
        return int(self.pairing[x, self.index_of(chi)])


def _require_abelian(g: FiniteGroup):
    if not g.is_abelian:
        raise NotAbelianError(f"{g.label or 'group'} is not abelian")


def dual_group(g: FiniteGroup) -> DualityTable:
    """All |G| characters, with the dual realised as a group of the same invariants."""
    _require_abelian(g)
    if "dual" in g._cache:
        return g._cache["dual"]
    st = abelian_structure(g)
    invs = st.invariant_factors
    big = st.largest_cyclic_order
    dual = group_from_abelian_invariants(list(invs) or [1], label=f"dual({g.label})")
    # dual element index is mixed radix with the first exponent fastest
    exps = np.zeros((dual.order, len(invs)), dtype=np.int64)
    rest = np.arange(dual.order)
    for j, d in enumerate(invs):
        exps[:, j] = rest % d
        rest //= d
    chars = []
    for row in exps:
        c = 1
        for e, d in zip(row, invs):
            c = lcm(c, d // gcd(int(e), d))
        chars.append(Character(g, tuple(int(e) for e in row), c))
    coords = st.coordinates(g)
    weights = np.array([big // d for d in invs], dtype=np.int64)
    pairing = (coords @ (exps * weights[None, :]).T) % big if invs else np.zeros((1, 1), dtype=np.int64)
    pairing.setflags(write=False)
    table = DualityTable(g, st, dual, chars, pairing)
    g._cache["dual"] = table
    return table


def perp(t: DualityTable, h: Subgroup) -> Subgroup:
    """H^perp: characters trivial on H, as a subgroup of the dual."""
    key = ("G", h.elements)
    if key not in t.perp_cache:
        ok = np.all(t.pairing[list(h.elements), :] == 0, axis=0)
        t.perp_cache[key] = Subgroup(t.dual, tuple(int(i) for i in np.flatnonzero(ok)))
    return t.perp_cache[key]


def perp_of_dual(t: DualityTable, x: Subgroup) -> Subgroup:
    """X^perp inside G for a subgroup X of the dual."""
    key = ("D", x.elements)
    if key not in t.perp_cache:
        ok = np.all(t.pairing[:, list(x.elements)] == 0, axis=1)
        t.perp_cache[key] = Subgroup(t.group, tuple(int(i) for i in np.flatnonzero(ok)))
    return t.perp_cache[key]


def kernel(t: DualityTable, chi: Character) -> Subgroup:
    col = t.pairing[:, t.index_of(chi)]
    return Subgroup(t.group, tuple(int(i) for i in np.flatnonzero(col == 0)))


def p_rank(st: AbelianStructure, p: int) -> int:
    return sum(1 for d in st.invariant_factors if d % p == 0)


def is_pth_power(st: AbelianStructure, chi: Character, p: int) -> bool:
    """Whether chi = psi^p for some character psi, decided coordinatewise."""
    return all(e % gcd(p, d) == 0 for e, d in zip(chi.exponents, st.invariant_factors))


def _check_noncyclic(g: FiniteGroup) -> AbelianStructure:
    _require_abelian(g)
    st = abelian_structure(g)
    if len(st.invariant_factors) <= 1:
        raise CyclicGroupError(f"{g.label or 'group'} is cyclic")
    return st


def funakura_coefficient(g: FiniteGroup, chi: Character, formula: str = "moebius") -> Fraction:
    """Coefficient of N_{ker chi} in the relation 1 = sum a_{ker chi} N_{ker chi}."""
    st = _check_noncyclic(g)
    t = dual_group(g)
    if formula == "moebius":
        c = Subgroup(t.dual, tuple(sorted(_cyclic_elements(t.dual, t.index_of(chi)))))
        total = 0
        for cp in cyclic_subgroups(t.dual):
            if c <= cp:
                total += int(mobius(cp.order // c.order))
        return Fraction(total, g.order // c.order)
    if formula == "product":
        c = chi.order
        value = Fraction(c, g.order)
        for p in sorted(factorint(g.order)):
            r = p_rank(st, p)
            if c % p == 0:
                value *= 1 - (p ** (r - 1) if is_pth_power(st, chi, p) else 0)
            else:
                value *= -sum(p ** i for i in range(1, r))
        return value
    raise InvalidInputError("formula must be 'moebius' or 'product'")


def _cyclic_elements(g: FiniteGroup, x: int) -> list:
    out = [0]
    y = x
    while y != 0:
        out.append(y)
        y = g.mul(y, x)
    return out


@dataclass
class FunakuraTerm:
    cyclic: Subgroup           # C = <chi> in the dual
    kernel: Subgroup           # ker chi in G
    moebius: Fraction
    product: Fraction


def funakura_terms(g: FiniteGroup) -> list:
    """One term per cyclic subgroup of the dual, with both coefficient formulas."""
    _check_noncyclic(g)
    t = dual_group(g)
    orders = t.dual.element_orders
    terms = []
    for c in cyclic_subgroups(t.dual):
        gen = next(x for x in c.elements if orders[x] == c.order)
        chi = t.character_of(gen)
        terms.append(FunakuraTerm(c, perp_of_dual(t, c), funakura_coefficient(g, chi, "moebius"),
                                  funakura_coefficient(g, chi, "product")))
    return terms


def funakura_relation(g: FiniteGroup, formula: str = "moebius") -> ScalarRelation:
    """R_G with denominators cleared: d = sum b_H N_H."""
    coeffs = {}
    for term in funakura_terms(g):
        a = term.moebius if formula == "moebius" else term.product
        if a:
            coeffs[term.kernel] = coeffs.get(term.kernel, Fraction(0)) + a
    coeffs = {h: a for h, a in coeffs.items() if a}
    d = lcm(*(a.denominator for a in coeffs.values()))
    rel = ScalarRelation(g, d, {h: int(a * d) for h, a in sorted(coeffs.items(), key=lambda kv: kv[0].sort_key())})
    return rel


def radical(n: int) -> int:
    return prod(factorint(n)) if n > 1 else 1


def _bezout(values: list) -> list:
    """u with sum u_i v_i = gcd, folding left to right with small coefficients."""
    def egcd(a, b):
        x0, x1, y0, y1 = 1, 0, 0, 1
        while b:
            q, a, b = a // b, b, a % b
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        return a, x0, y0

    u = [1]
    acc = values[0]
    for v in values[1:]:
        g, s, t = egcd(acc, v)
        # shift to the solution with s of least absolute value
        step = v // g
        if step:
            k = round(Fraction(s, step))
            s, t = s - k * step, t + k * (acc // g)
        u = [s * x for x in u] + [t]
        acc = g
    return u


@dataclass
class OptimalRelation:
    relation: ScalarRelation
    n0: int
    case: str           # "coprime" (denominator 1) or "prime-power"
    prime: Optional[int] = None


def optimal_abelian_relation(g: FiniteGroup) -> Optional[OptimalRelation]:
    """The explicit relation of least index for an abelian group, or None if G is cyclic."""
    _require_abelian(g)
    st = abelian_structure(g)
    invs = st.invariant_factors
    c_order = invs[-1] if invs else 1
    q_order = prod(invs[:-1]) if len(invs) > 1 else 1
    if q_order == 1:
        return None
    q_primes = sorted(factorint(q_order))
    q_part = {p: p ** factorint(q_order)[p] for p in q_primes}
    if len(q_primes) >= 2:
        primes = sorted(factorint(g.order))
        parts = []
        for p in primes:
            comp = st.p_parts[p][1]
            sub, emb = subgroup_as_group(comp)
            r = funakura_relation(sub)
            parts.append((p, comp, emb, r))
        u = _bezout([r.denominator for _, _, _, r in parts])
        coeffs = {}
        for up, (p, comp, emb, r) in zip(u, parts):
            for h, b in r.coefficients.items():
                big = lift_subgroup(h, comp, emb)
                coeffs[big] = coeffs.get(big, 0) + up * b
        coeffs = {h: b for h, b in sorted(coeffs.items(), key=lambda kv: kv[0].sort_key()) if b}
        rel = ScalarRelation(g, 1, coeffs)
        n0 = c_order * max(q_part.values())
        return OptimalRelation(rel, n0, "coprime")
    p = q_primes[0]
    gp = st.p_parts[p][0]
    sub, emb = subgroup_as_group(gp)
    r = funakura_relation(sub)
    coeffs = {lift_subgroup(h, gp, emb): b for h, b in r.coefficients.items()}
    rel = ScalarRelation(g, r.denominator, coeffs)
    return OptimalRelation(rel, c_order, "prime-power", p)
