"""Finite groups as explicit Cayley tables, and their subgroup structure.

Elements are the integers ``0 .. order-1`` with ``0`` the identity.  Group
operations are table lookups, so every computation in the package reduces to
integer indexing into ``FiniteGroup.table``.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy import factorint, isprime

from .errors import CapExceededError, InvalidInputError, NotAbelianError

DEFAULT_ORDER_CAP = 10_000


def order_cap() -> int:
    """Group-order cap, overridable through ``NORMREL_ORDER_CAP``."""
    raw = os.environ.get("NORMREL_ORDER_CAP")
    if raw is None:
        return DEFAULT_ORDER_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InvalidInputError(f"NORMREL_ORDER_CAP must be an integer, got {raw!r}") from exc
    if cap <= 0:
        raise InvalidInputError("NORMREL_ORDER_CAP must be positive")
    return cap


def _check_cap(order: int, cap: Optional[int]) -> None:
    cap = order_cap() if cap is None else cap
    if order > cap:
        raise CapExceededError(f"group order {order} exceeds cap {cap}")


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[i, j]`` is the index of the product ``i * j``.  The table is stored
    read-only; derived data (inverses, element orders, subgroup lists) is
    computed once and cached on the instance.
    """

    def __init__(self, table, label: str = "", generators: Optional[Sequence[int]] = None):
        table = np.array(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n) or n == 0:
            raise InvalidInputError("Cayley table must be a non-empty square matrix")
        if not (np.array_equal(table[0], np.arange(n)) and np.array_equal(table[:, 0], np.arange(n))):
            raise InvalidInputError("element 0 must be the identity")
        table.setflags(write=False)
        self.table = table
        self.order = n
        self.label = label
        inv = np.argmax(table == 0, axis=1)
        if not np.all(table[np.arange(n), inv] == 0):
            raise InvalidInputError("table has an element without inverse")
        inv.setflags(write=False)
        self.inverses = inv
        self._generators = None if generators is None else tuple(int(x) for x in generators)
        self._cache: dict = {}

    identity = 0

    def __repr__(self):
        return f"FiniteGroup(order={self.order}, label={self.label!r})"

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def inv(self, x: int) -> int:
        return int(self.inverses[x])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        result = 0
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        idx = np.arange(n)
        cur = idx.copy()
        k = 1
        while np.any(orders == 0):
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            cur = self.table[cur, idx]
            k += 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @property
    def generators(self) -> tuple:
        """A generating set: the constructor's generators when known, else a greedy one."""
        if self._generators is None:
            self._generators = tuple(greedy_generating_set(self))
        return self._generators

    def conjugate(self, x: int, g: int) -> int:
        """``g x g^-1``."""
        return int(self.table[self.table[g, x], self.inverses[g]])


def check_group_axioms(g: FiniteGroup, samples: int = 10_000, seed: int = 0) -> bool:
    """Associativity check: all triples for order <= 64, random triples above."""
    t = g.table
    n = g.order
    if n <= 64:
        left = t[t, :]            # left[i, j, k] = (ij)k
        right = t[:, t]           # right[i, j, k] = i(jk)
        ok = np.array_equal(left, right)
    else:
        rng = np.random.default_rng(seed)
        i, j, k = rng.integers(0, n, size=(3, samples))
        ok = np.array_equal(t[t[i, j], k], t[i, t[j, k]])
    # every row of a group table is a permutation
    ok = ok and bool(np.all(np.sort(t, axis=1) == np.arange(n)))
    return bool(ok)


# --------------------------------------------------------------------------
# constructors


def _parse_perm(p, m: Optional[int] = None) -> tuple:
    p = tuple(int(x) for x in p)
    if sorted(p) != list(range(len(p))):
        raise InvalidInputError(f"not a permutation of 0..{len(p) - 1}: {list(p)}")
    return p


def group_from_permutations(generators: Sequence[Sequence[int]], cap: Optional[int] = None,
                            label: str = "") -> FiniteGroup:
    """Closure of a set of permutations, enumerated breadth-first.

    Permutations are in one-line notation (``p[i]`` is the image of ``i``); the
    product ``p * q`` applies ``q`` first.  Generators of different lengths are
    padded with fixed points.
    """
    gens = [_parse_perm(p) for p in generators]
    m = max((len(p) for p in gens), default=1)
    gens = [p + tuple(range(len(p), m)) for p in gens]
    cap = order_cap() if cap is None else cap
    ident = tuple(range(m))
    elements = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = tuple(s[x[i]] for i in range(m))
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                if len(elements) > cap:
                    raise CapExceededError(f"generated group exceeds order cap {cap}")
                queue.append(y)
    arr = np.array(elements, dtype=np.int64)
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        comp = arr[i][arr]  # comp[j] = elements[i] o elements[j]
        table[i] = [index[tuple(row)] for row in comp.tolist()]
    gen_idx = [index[s] for s in gens]
    group = FiniteGroup(table, label=label, generators=gen_idx)
    group.permutations = [tuple(e) for e in elements]
    return group


def group_from_abelian_invariants(invariants: Sequence[int], cap: Optional[int] = None,
                                  label: str = "") -> FiniteGroup:
    """Direct product of cyclic groups; index = x0 + n0*(x1 + n1*(x2 + ...))."""
    invs = [int(x) for x in invariants]
    if any(x < 1 for x in invs):
        raise InvalidInputError("abelian invariants must be >= 1")
    n = prod(invs)
    _check_cap(n, cap)
    idx = np.arange(n)
    coords = []
    rest = idx.copy()
    for m in invs:
        coords.append(rest % m)
        rest = rest // m
    table = np.zeros((n, n), dtype=np.int64)
    weight = 1
    gens = []
    for m, c in zip(invs, coords):
        table += ((c[:, None] + c[None, :]) % m) * weight
        if m > 1:
            gens.append(weight)
        weight *= m
    label = label or "x".join(f"C{m}" for m in invs)
    group = FiniteGroup(table, label=label, generators=gens)
    group.abelian_invariants = tuple(invs)
    return group


def cyclic_group(n: int) -> FiniteGroup:
    return group_from_abelian_invariants([n], label=f"C{n}")


def direct_product(g1: FiniteGroup, g2: FiniteGroup, cap: Optional[int] = None) -> FiniteGroup:
    """Componentwise product; element (i1, i2) has index i1 + |g1| * i2."""
    n1, n2 = g1.order, g2.order
    _check_cap(n1 * n2, cap)
    i1 = np.tile(np.arange(n1), n2)
    i2 = np.repeat(np.arange(n2), n1)
    table = g1.table[i1[:, None], i1[None, :]] + n1 * g2.table[i2[:, None], i2[None, :]]
    gens = list(g1.generators) + [n1 * x for x in g2.generators]
    return FiniteGroup(table, label=f"{g1.label}x{g2.label}", generators=gens)


def symmetric_group(n: int) -> FiniteGroup:
    if n <= 1:
        return group_from_permutations([], label=f"S{n}")
    gens = [[1, 0] + list(range(2, n))]
    if n > 2:
        gens.append(list(range(1, n)) + [0])
    return group_from_permutations(gens, label=f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    if n <= 2:
        return group_from_permutations([], label=f"A{n}")
    if n == 3:
        return group_from_permutations([[1, 2, 0]], label="A3")
    three = [1, 2, 0] + list(range(3, n))
    if n % 2:
        long = list(range(1, n)) + [0]
    else:
        long = [0] + list(range(2, n)) + [1]
    return group_from_permutations([long, three], label=f"A{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n, acting on the vertices of an n-gon."""
    if n < 1:
        raise InvalidInputError("dihedral degree must be >= 1")
    if n == 1:
        return group_from_abelian_invariants([2], label="D1")
    if n == 2:
        return group_from_abelian_invariants([2, 2], label="D2")
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return group_from_permutations([rot, ref], label=f"D{n}")


def quaternion_group() -> FiniteGroup:
    # Q8 as permutations of {+-1, +-i, +-j, +-k} (left multiplication by i and j)
    # points: 0=1 1=i 2=j 3=k 4=-1 5=-i 6=-j 7=-k
    left_i = [1, 4, 3, 6, 5, 0, 7, 2]
    left_j = [2, 7, 4, 1, 6, 3, 0, 5]
    return group_from_permutations([left_i, left_j], label="Q8")


def sl2_group(p: int, cap: Optional[int] = None) -> FiniteGroup:
    """SL_2(F_p) built from 2x2 matrices mod p.

    Orders are p(p^2-1); the first size relevant to norm relations without a
    non-cyclic pq-subgroup is p = 17 (order 4896), beyond the default test set.
    """
    if not isprime(p):
        raise InvalidInputError("SL2 needs a prime field")
    mats = [(a, b, c, d) for a in range(p) for b in range(p) for c in range(p) for d in range(p)
            if (a * d - b * c) % p == 1]
    _check_cap(len(mats), cap)
    mats.sort(key=lambda m: m != (1, 0, 0, 1))
    arr = np.array(mats, dtype=np.int64)
    code = np.full(p ** 4, -1, dtype=np.int64)
    enc = ((arr[:, 0] * p + arr[:, 1]) * p + arr[:, 2]) * p + arr[:, 3]
    code[enc] = np.arange(len(mats))
    a, b, c, d = arr.T
    n = len(mats)
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        ai, bi, ci, di = arr[i]
        ra = (ai * a + bi * c) % p
        rb = (ai * b + bi * d) % p
        rc = (ci * a + di * c) % p
        rd = (ci * b + di * d) % p
        table[i] = code[((ra * p + rb) * p + rc) * p + rd]
    return FiniteGroup(table, label=f"SL2(F{p})")


def named_group(name: str) -> FiniteGroup:
    """Groups by name: C<n>, S<n>, A<n>, D<n> (order 2n), Q8, V4, SL2(<p>)."""
    s = name.strip()
    try:
        if s in ("Q8",):
            return quaternion_group()
        if s == "V4":
            return group_from_abelian_invariants([2, 2], label="V4")
        if s.upper().startswith("SL2"):
            p = int(s[3:].strip("()_F "))
            return sl2_group(p)
        kind, num = s[0], int(s[1:])
    except (ValueError, IndexError) as exc:
        raise InvalidInputError(f"unknown group name {name!r}") from exc
    builders = {"C": cyclic_group, "S": symmetric_group, "A": alternating_group, "D": dihedral_group}
    if kind not in builders:
        raise InvalidInputError(f"unknown group name {name!r}")
    return builders[kind](num)


def group_from_spec(spec) -> FiniteGroup:
    """Build a group from the JSON input format (already parsed to a dict)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InvalidInputError("group spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "perm":
        return group_from_permutations(spec.get("generators", []))
    if kind == "abelian":
        return group_from_abelian_invariants(spec.get("invariants", [1]))
    if kind == "named":
        return named_group(str(spec.get("name", "")))
    if kind == "product":
        factors = [group_from_spec(f) for f in spec.get("factors", [])]
        if not factors:
            return group_from_abelian_invariants([1])
        result = factors[0]
        for f in factors[1:]:
            result = direct_product(result, f)
        return result
    raise InvalidInputError(f"unknown group kind {kind!r}")


# --------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup = field(repr=False)
    elements: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def key(self) -> bytes:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[list(self.elements)] = True
        return np.packbits(mask).tobytes()

    @cached_property
    def member(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[list(self.elements)] = True
        mask.setflags(write=False)
        return mask

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @cached_property
    def is_cyclic(self) -> bool:
        orders = self.parent.element_orders[list(self.elements)]
        return bool(np.any(orders == self.order))

    def __contains__(self, x) -> bool:
        return bool(self.member[int(x)])

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and other.elements == self.elements

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __le__(self, other: "Subgroup") -> bool:
        return bool(np.all(other.member[list(self.elements)]))

    def sort_key(self):
        return (self.order, self.elements)

    def __repr__(self):
        head = ", ".join(map(str, self.elements[:8]))
        more = ", ..." if self.order > 8 else ""
        return f"Subgroup(order={self.order}, [{head}{more}])"


def _from_mask(g: FiniteGroup, mask: np.ndarray) -> Subgroup:
    return Subgroup(g, tuple(int(x) for x in np.flatnonzero(mask)))


def check_subgroup(h: Subgroup) -> bool:
    g = h.parent
    el = np.array(h.elements)
    if 0 not in h or g.order % h.order:
        return False
    closed = np.all(h.member[g.table[np.ix_(el, el)]])
    return bool(closed and np.all(h.member[g.inverses[el]]))


def _closure(g: FiniteGroup, seed: np.ndarray, gens: np.ndarray) -> np.ndarray:
    """Boolean mask of the subgroup generated by seed-set and gens (seed must contain 0)."""
    mask = np.zeros(g.order, dtype=bool)
    mask[seed] = True
    mask[0] = True
    frontier = np.flatnonzero(mask)
    allgens = np.unique(np.concatenate([gens, np.flatnonzero(mask)]))
    while frontier.size:
        prods = g.table[np.ix_(frontier, allgens)].ravel()
        new = np.unique(prods[~mask[prods]])
        mask[new] = True
        frontier = new
    return mask


def subgroup_generated(g: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = np.array(sorted(set(int(x) for x in gens)) or [0], dtype=np.int64)
    return _from_mask(g, _closure(g, np.array([0]), gens))


def cyclic_subgroup(g: FiniteGroup, x: int) -> Subgroup:
    elems = [0]
    y = int(x)
    while y != 0:
        elems.append(y)
        y = g.mul(y, x)
    return Subgroup(g, tuple(sorted(elems)))


def greedy_generating_set(g: FiniteGroup) -> list:
    mask = np.zeros(g.order, dtype=bool)
    mask[0] = True
    gens: list = []
    # larger element orders first keeps the set short
    for x in sorted(range(g.order), key=lambda e: (-int(g.element_orders[e]), e)):
        if not mask[x]:
            gens.append(x)
            mask = _closure(g, np.flatnonzero(mask), np.array(gens))
    return gens


def _join(g: FiniteGroup, hmask: np.ndarray, c: int) -> np.ndarray:
    """Mask of <H, c>; uses the coset union when c normalizes H."""
    el = np.flatnonzero(hmask)
    conj = g.table[g.table[c, el], g.inverses[c]]
    if np.all(hmask[conj]):
        out = hmask.copy()
        power = c
        while not hmask[power]:
            out[g.table[el, power]] = True
            power = int(g.table[power, c])
        return out
    return _closure(g, el, np.array([c]))


def cyclic_subgroups(g: FiniteGroup) -> list:
    """Distinct <x> over x in G, sorted by (order, elements)."""
    if "cyclic" not in g._cache:
        seen = {}
        for x in range(g.order):
            c = cyclic_subgroup(g, x)
            seen.setdefault(c.elements, c)
        g._cache["cyclic"] = sorted(seen.values(), key=Subgroup.sort_key)
    return list(g._cache["cyclic"])


def _is_prime_power(n: int) -> bool:
    return n > 1 and len(factorint(n)) == 1


def _enumerate_subgroups(g: FiniteGroup) -> list:
    cyc = cyclic_subgroups(g)
    builders = [c for c in cyc if _is_prime_power(c.order)]
    builder_gens = []
    for c in builders:
        orders = g.element_orders[list(c.elements)]
        builder_gens.append(int(np.array(c.elements)[orders == c.order][0]))
    found = {}
    queue = deque()
    for c in cyc:
        found[c.key] = c.member.copy()
        queue.append(c.key)
    while queue:
        key = queue.popleft()
        hmask = found[key]
        for c in builder_gens:
            if hmask[c]:
                continue
            jmask = _join(g, hmask, c)
            jkey = np.packbits(jmask).tobytes()
            if jkey not in found:
                found[jkey] = jmask
                queue.append(jkey)
    subs = [_from_mask(g, m) for m in found.values()]
    subs.sort(key=Subgroup.sort_key)
    return subs


def all_subgroups(g: FiniteGroup, max_index: Optional[int] = None, cyclic_only: bool = False) -> list:
    """Every subgroup (or every cyclic subgroup) of index <= max_index, each once.

    Subgroups are built bottom-up: start from the cyclic subgroups and
    repeatedly join with cyclic subgroups of prime-power order until no new
    element set appears.  The full list is cached on the group.
    """
    if cyclic_only:
        subs = cyclic_subgroups(g)
    else:
        if "all" not in g._cache:
            g._cache["all"] = _enumerate_subgroups(g)
        subs = list(g._cache["all"])
    if max_index is not None:
        subs = [h for h in subs if h.index <= max_index]
    return subs


def subgroup_id(h: Subgroup) -> int:
    """Position of h in the all_subgroups ordering of its parent."""
    ids = h.parent._cache.get("ids")
    if ids is None:
        ids = {s.elements: i for i, s in enumerate(all_subgroups(h.parent))}
        h.parent._cache["ids"] = ids
    return ids[h.elements]


def conjugate_subgroup(h: Subgroup, x: int) -> Subgroup:
    """x H x^-1."""
    g = h.parent
    el = np.array(h.elements)
    conj = g.table[g.table[x, el], g.inverses[x]]
    return Subgroup(g, tuple(sorted(int(e) for e in conj)))


def conjugacy_class_of_subgroup(h: Subgroup) -> list:
    seen = {}
    for x in range(h.parent.order):
        k = conjugate_subgroup(h, x)
        seen.setdefault(k.elements, k)
    return sorted(seen.values(), key=Subgroup.sort_key)


def is_conjugation_closed(subgroups: Sequence[Subgroup]) -> bool:
    present = {h.elements for h in subgroups}
    for h in subgroups:
        for k in conjugacy_class_of_subgroup(h):
            if k.elements not in present:
                return False
    return True


def normalizer(g: FiniteGroup, h: Subgroup) -> Subgroup:
    el = np.array(h.elements)
    xs = np.arange(g.order)
    conj = g.table[g.table[xs[:, None], el[None, :]], g.inverses[xs][:, None]]
    keep = np.all(h.member[conj], axis=1)
    return _from_mask(g, keep)


def coset_representatives(g: FiniteGroup, h: Subgroup, side: str = "left") -> list:
    """Smallest element of each coset xH (left) or Hx (right), in increasing order."""
    if side not in ("left", "right"):
        raise InvalidInputError("side must be 'left' or 'right'")
    el = np.array(h.elements)
    covered = np.zeros(g.order, dtype=bool)
    reps = []
    for x in range(g.order):
        if covered[x]:
            continue
        reps.append(x)
        covered[g.table[x, el] if side == "left" else g.table[el, x]] = True
    return reps


# --------------------------------------------------------------------------
# abelian groups


@dataclass(frozen=True)
class AbelianStructure:
    invariant_factors: tuple
    generator_elements: tuple
    largest_cyclic_order: int
    p_parts: dict = field(repr=False, default_factory=dict)  # p -> (G_p, G_{p'})

    def coordinates(self, group: FiniteGroup) -> np.ndarray:
        """coords[x] = exponent tuple of x w.r.t. generator_elements."""
        return _abelian_coordinates(group, self)


def _abelian_coordinates(g: FiniteGroup, st: AbelianStructure) -> np.ndarray:
    k = len(st.invariant_factors)
    coords = np.zeros((g.order, k), dtype=np.int64)
    elem = np.zeros(1, dtype=np.int64)
    tuples = np.zeros((1, k), dtype=np.int64)
    for j, (d, x) in enumerate(zip(st.invariant_factors, st.generator_elements)):
        powers = [0]
        for _ in range(d - 1):
            powers.append(g.mul(powers[-1], x))
        powers = np.array(powers)
        elem = g.table[elem[:, None], powers[None, :]].ravel()
        t = np.repeat(tuples, d, axis=0)
        t[:, j] = np.tile(np.arange(d), len(tuples))
        tuples = t
    coords[elem] = tuples
    return coords


def _p_basis(g: FiniteGroup, elems: list, p: int) -> list:
    """Basis (element, order) of the abelian p-group on ``elems``; largest orders first."""
    orders = g.element_orders
    total = len(elems)
    cand = sorted(elems, key=lambda e: (-int(orders[e]), e))

    def extend(basis, mask, size):
        if size == total:
            return basis
        # next basis element: largest order compatible with a direct sum
        for e in cand:
            if mask[e]:
                continue
            o = int(orders[e])
            new = _join(g, mask, e)
            if int(new.sum()) == size * o:
                res = extend(basis + [(e, o)], new, size * o)
                if res is not None:
                    return res
        return None

    mask = np.zeros(g.order, dtype=bool)
    mask[0] = True
    basis = extend([], mask, 1)
    if basis is None:  # pragma: no cover - a finite abelian p-group always has a basis
        raise RuntimeError("failed to find a basis of an abelian p-group")
    return basis


def abelian_structure(g: FiniteGroup) -> AbelianStructure:
    """Invariant factors d1 | d2 | ... | dk with generators of exactly those orders."""
    if not g.is_abelian:
        raise NotAbelianError(f"{g.label or 'group'} is not abelian")
    if "abelian" in g._cache:
        return g._cache["abelian"]
    n = g.order
    orders = g.element_orders
    primes = sorted(factorint(n)) if n > 1 else []
    p_bases = {}
    p_parts = {}
    for p in primes:
        pe = p ** factorint(n)[p]
        elems = [x for x in range(n) if pe % int(orders[x]) == 0]
        p_bases[p] = _p_basis(g, elems, p)
        gp = Subgroup(g, tuple(elems))
        comp = Subgroup(g, tuple(x for x in range(n) if gcd(int(orders[x]), p) == 1))
        p_parts[p] = (gp, comp)
    k = max((len(b) for b in p_bases.values()), default=0)
    factors, gens = [], []
    for j in range(k):
        d, x = 1, 0
        for p in primes:
            b = p_bases[p]
            if j < len(b):
                e, o = b[j]
                d *= o
                x = g.mul(x, e)
        factors.append(d)
        gens.append(x)
    # ascending order gives d1 | d2 | ...
    factors.reverse()
    gens.reverse()
    st = AbelianStructure(tuple(factors), tuple(gens), max(factors, default=1), p_parts)
    g._cache["abelian"] = st
    return st


# --------------------------------------------------------------------------
# pq-subgroups


def has_noncyclic_pq_subgroup(g: FiniteGroup):
    """Return (True, witness) if G has a non-cyclic subgroup of order pq, else (False, None)."""
    orders = g.element_orders
    n = g.order
    primes = sorted(factorint(n)) if n > 1 else []
    by_order = {p: [x for x in range(n) if orders[x] == p] for p in primes}
    # p = q: two commuting elements of order p generating distinct subgroups
    for p in primes:
        xs = by_order[p]
        for i, x in enumerate(xs):
            cx = cyclic_subgroup(g, x)
            for y in xs[i + 1:]:
                if y in cx:
                    continue
                if g.mul(x, y) == g.mul(y, x):
                    return True, subgroup_generated(g, [x, y])
    # p < q, p | q - 1: y of order p normalizing <x> (order q) without centralizing it
    for q in primes:
        for p in primes:
            if p >= q or (q - 1) % p:
                continue
            for x in by_order[q]:
                cx = cyclic_subgroup(g, x)
                for y in by_order[p]:
                    c = g.conjugate(x, y)
                    if c != x and c in cx:
                        return True, subgroup_generated(g, [x, y])
    return False, None


def subgroup_as_group(h: Subgroup, label: str = ""):
    """The subgroup as a standalone FiniteGroup, plus the embedding (list of parent indices)."""
    g = h.parent
    el = np.array(h.elements)  # sorted, so the identity 0 comes first
    pos = np.full(g.order, -1, dtype=np.int64)
    pos[el] = np.arange(len(el))
    table = pos[g.table[np.ix_(el, el)]]
    return FiniteGroup(table, label=label or f"sub{h.order}({g.label})"), [int(x) for x in el]


def lift_subgroup(h: Subgroup, parent_subgroup: Subgroup, embedding: Sequence[int]) -> Subgroup:
    """Image in the parent of a subgroup of subgroup_as_group(parent_subgroup)."""
    return Subgroup(parent_subgroup.parent, tuple(sorted(embedding[x] for x in h.elements)))
