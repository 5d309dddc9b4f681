"""Dense group-algebra arithmetic over Q, Z and F_p, and two-sided ideals of norm elements."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from sympy import isprime

from .errors import InvalidInputError
from .groups import FiniteGroup, Subgroup, coset_representatives, normalizer


@dataclass(frozen=True)
class Ring:
    kind: str  # "rationals" | "integers" | "prime_field"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("rationals", "integers", "prime_field"):
            raise InvalidInputError(f"unknown ring {self.kind!r}")
        if self.kind == "prime_field" and not isprime(self.p):
            raise InvalidInputError(f"{self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return self.kind != "integers"

    def __str__(self):
        return {"rationals": "Q", "integers": "Z"}.get(self.kind, f"F_{self.p}")


QQ = Ring("rationals")
ZZ = Ring("integers")


def GF(p: int) -> Ring:
    return Ring("prime_field", int(p))


def _coerce(values, ring: Ring) -> np.ndarray:
    if ring.kind == "rationals":
        return np.array([Fraction(v) for v in values], dtype=object)
    if ring.kind == "integers":
        out = []
        for v in values:
            f = Fraction(v)
            if f.denominator != 1:
                raise InvalidInputError(f"{v} is not an integer")
            out.append(int(f))
        return np.array(out, dtype=object)
    out = []
    for v in values:
        f = Fraction(v)
        out.append(int(f.numerator) * pow(f.denominator, -1, ring.p) % ring.p)
    return np.array(out, dtype=object)


class AlgebraElement:
    """An element sum_g c_g g of R[G], stored as a length-|G| coefficient vector."""

    __slots__ = ("group", "ring", "coeffs")

    def __init__(self, group: FiniteGroup, ring: Ring, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) != group.order:
            raise InvalidInputError("coefficient vector length must equal the group order")
        self.group = group
        self.ring = ring
        self.coeffs = _coerce(coeffs, ring)

    @classmethod
    def zero(cls, group, ring=ZZ):
        return cls(group, ring, [0] * group.order)

    @classmethod
    def basis(cls, group, x: int, ring=ZZ, coeff=1):
        c = [0] * group.order
        c[int(x)] = coeff
        return cls(group, ring, c)

    @classmethod
    def one(cls, group, ring=ZZ):
        return cls.basis(group, 0, ring)

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            raise InvalidInputError("algebra element expected")
        if other.group is not self.group:
            raise InvalidInputError("elements belong to different groups")
        if other.ring != self.ring:
            raise InvalidInputError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _wrap(self, coeffs):
        out = object.__new__(AlgebraElement)
        out.group, out.ring = self.group, self.ring
        if self.ring.kind == "prime_field":
            coeffs = np.array([int(c) % self.ring.p for c in coeffs], dtype=object)
        out.coeffs = coeffs
        return out

    def __add__(self, other):
        self._check(other)
        return self._wrap(self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return self._wrap(self.coeffs - other.coeffs)

    def __neg__(self):
        return self._wrap(-self.coeffs)

    def scale(self, k):
        k = _coerce([k], self.ring)[0]
        return self._wrap(self.coeffs * k)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and other.group is self.group
                and other.ring == self.ring and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash((id(self.group), self.ring, tuple(self.coeffs)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> list:
        return [i for i, c in enumerate(self.coeffs) if c]

    def to_list(self) -> list:
        return [c for c in self.coeffs]

    def change_ring(self, ring: Ring) -> "AlgebraElement":
        return AlgebraElement(self.group, ring, self.coeffs)

    def __repr__(self):
        terms = [f"{c}*g{i}" for i, c in enumerate(self.coeffs) if c]
        return f"AlgebraElement[{self.ring}](" + (" + ".join(terms) or "0") + ")"


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Convolution product (xy)_g = sum_{uv=g} x_u y_v."""
    x._check(y)
    g = x.group
    out = np.zeros(g.order, dtype=object)
    if x.ring.kind == "rationals":
        out[:] = Fraction(0)
    for u in x.support():
        # u * v lands at table[u, v]
        out[g.table[u]] += x.coeffs[u] * y.coeffs
    return x._wrap(out)


def norm_element(h: Subgroup, ring: Ring = ZZ) -> AlgebraElement:
    c = [0] * h.parent.order
    for e in h.elements:
        c[e] = 1
    return AlgebraElement(h.parent, ring, c)


def set_indicator(group: FiniteGroup, elements, ring: Ring = ZZ) -> AlgebraElement:
    c = [0] * group.order
    for e in elements:
        c[int(e)] += 1
    return AlgebraElement(group, ring, c)


# --------------------------------------------------------------------------
# ideals


def ideal_generators(g: FiniteGroup, subgroups: Sequence[Subgroup]):
    """The family (H, x, y) with x over G/H and y over N(H)\\G, plus their 0/1 vectors.

    Duplicate vectors (the same subset xHy arising twice) are dropped.
    """
    family, rows, seen = [], [], set()
    for h in subgroups:
        el = np.array(h.elements)
        lefts = coset_representatives(g, h, "left")
        rights = coset_representatives(g, normalizer(g, h), "right")
        for y in rights:
            hy = g.table[el, y]
            for x in lefts:
                s = g.table[x, hy]
                key = tuple(sorted(int(e) for e in s))
                if key in seen:
                    continue
                seen.add(key)
                v = np.zeros(g.order, dtype=np.int64)
                v[s] = 1
                family.append((h, int(x), int(y)))
                rows.append(v)
    mat = np.array(rows, dtype=np.int64).reshape(len(rows), g.order)
    return family, mat


@dataclass
class IdealBasis:
    ring: Ring
    generators_used: list                 # (Subgroup, left rep, right rep)
    basis_matrix: np.ndarray              # echelon rows
    group: FiniteGroup = field(repr=False)
    generator_matrix: np.ndarray = field(repr=False, default=None)
    pivot_rows: list = field(default_factory=list)  # generators that became pivots

    @property
    def rank(self) -> int:
        return self.basis_matrix.shape[0]

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "rank": self.rank,
            "generators": [{"H": list(h.elements), "g": x, "h": y} for h, x, y in self.generators_used],
            "basis": [[str(c) for c in row] for row in self.basis_matrix],
        }


def bareiss_echelon(mat):
    """Fraction-free row echelon form over Q.

    Returns (echelon rows, pivot columns, original index of each pivot row).
    Rows that reduce to zero are discarded as elimination proceeds.
    """
    work = np.array(mat, dtype=object)
    m = work.shape[0]
    origin = list(range(m))
    if m == 0:
        return work, [], []
    n = work.shape[1]
    prev = 1
    r = 0
    piv_cols = []
    for col in range(n):
        if r >= work.shape[0]:
            break
        nz = [i for i in range(r, work.shape[0]) if work[i, col] != 0]
        if not nz:
            continue
        i = nz[0]
        if i != r:
            work[[r, i]] = work[[i, r]]
            origin[r], origin[i] = origin[i], origin[r]
        p = work[r, col]
        below = work[r + 1:]
        if below.shape[0]:
            f = below[:, col].copy()
            below = (p * below - f[:, None] * work[r]) // prev
            keep = [k for k in range(below.shape[0]) if np.any(below[k] != 0)]
            work = np.concatenate([work[:r + 1], below[keep]], axis=0) if keep else work[:r + 1]
            tail = origin[r + 1:]
            origin = origin[:r + 1] + [tail[k] for k in keep]
        prev = p
        piv_cols.append(col)
        r += 1
    return work[:r], piv_cols, origin[:r]


def _echelon_mod_p(mat: np.ndarray, p: int):
    """Reduced row echelon form over F_p; returns (rows, pivot columns, origin rows)."""
    work = np.array(mat, dtype=np.int64) % p
    m = work.shape[0]
    origin = list(range(m))
    if m == 0:
        return work, [], []
    n = work.shape[1]
    r = 0
    piv_cols = []
    for col in range(n):
        if r >= work.shape[0]:
            break
        nz = np.flatnonzero(work[r:, col])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            work[[r, i]] = work[[i, r]]
            origin[r], origin[i] = origin[i], origin[r]
        inv = pow(int(work[r, col]), -1, p)
        work[r] = (work[r] * inv) % p
        f = work[:, col].copy()
        f[r] = 0
        work = (work - f[:, None] * work[r]) % p
        keep = np.ones(work.shape[0], dtype=bool)
        keep[r + 1:] = np.any(work[r + 1:] != 0, axis=1)
        origin = [o for o, k in zip(origin, keep) if k]
        work = work[keep]
        piv_cols.append(col)
        r += 1
    return work[:r], piv_cols, origin[:r]


def two_sided_ideal_basis(g: FiniteGroup, subgroups: Sequence[Subgroup], ring: Ring = QQ) -> IdealBasis:
    """Echelon basis of the ideal generated by the N_H, over Q (Bareiss) or F_p."""
    if not ring.is_field:
        raise InvalidInputError("integer ideals are handled by the lattice routines in relations")
    family, mat = ideal_generators(g, subgroups)
    if ring.kind == "rationals":
        ech, _, origin = bareiss_echelon(mat)
    else:
        ech, _, origin = _echelon_mod_p(mat, ring.p)
        ech = ech.astype(object)
    ech = ech.reshape(len(origin), g.order)
    return IdealBasis(ring, family, ech, g, mat, origin)


def _solve_left(rows: np.ndarray, target: list, ring: Ring) -> Optional[list]:
    """x with x @ rows == target over the field, rows linearly independent."""
    k = rows.shape[0]
    if k == 0:
        return None if any(target) else []
    if ring.kind == "rationals":
        # solve rows^T x = target by fraction-free elimination on the augmented system
        aug = np.concatenate([rows.T.astype(object), np.array(target, dtype=object)[:, None]], axis=1)
        ech, piv, _ = bareiss_echelon(aug)
        if piv and piv[-1] == k:
            return None
        x = [Fraction(0)] * k
        for i in range(len(piv) - 1, -1, -1):
            c = piv[i]
            s = Fraction(ech[i, k]) - sum(Fraction(ech[i, j]) * x[j] for j in range(c + 1, k))
            x[c] = s / Fraction(ech[i, c])
        return x
    p = ring.p
    aug = np.concatenate([rows.T.astype(np.int64) % p, np.array(target, dtype=np.int64)[:, None] % p], axis=1)
    ech, piv, _ = _echelon_mod_p(aug, p)
    if piv and piv[-1] == k:
        return None
    x = [0] * k
    for i, c in enumerate(piv):
        x[c] = int(ech[i, k])
    return x


def contains_one(basis: IdealBasis):
    """(True, certificate) if 1 lies in the ideal, else (False, None).

    The certificate is a list of ((H, x, y), coefficient) with
    sum coefficient * x N_H y = 1.
    """
    ring = basis.ring
    target = [0] * basis.group.order
    target[0] = 1
    rows = basis.generator_matrix[basis.pivot_rows] if basis.pivot_rows else np.zeros((0, basis.group.order), dtype=np.int64)
    sol = _solve_left(rows, target, ring)
    if sol is None:
        return False, None
    cert = [(basis.generators_used[i], c) for i, c in zip(basis.pivot_rows, sol) if c]
    return True, cert


def reassemble(g: FiniteGroup, certificate, ring: Ring) -> AlgebraElement:
    """Multiply out sum c * x N_H y from a certificate."""
    total = AlgebraElement.zero(g, ring)
    for (h, x, y), c in certificate:
        term = multiply(multiply(AlgebraElement.basis(g, x, ring), norm_element(h, ring)),
                        AlgebraElement.basis(g, y, ring))
        total = total + term.scale(c)
    return total
