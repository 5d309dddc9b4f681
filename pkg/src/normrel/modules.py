"""Z[G]-lattices, quotient exponents, and finite abelian group bookkeeping.

A lattice in Z^n is a matrix whose columns are a basis, kept in column
Hermite normal form (the transpose of ``lattice.hnf`` applied to the rows).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm, prod
from typing import Optional, Sequence

import numpy as np

from . import lattice
from .errors import InvalidInputError, VerificationError
from .groups import FiniteGroup, Subgroup, coset_representatives, _closure
from .relations import ScalarRelation, minimal_conjugation_closure


def column_hnf(cols) -> np.ndarray:
    cols = np.asarray(cols)
    if cols.size == 0:
        return np.zeros((cols.shape[0], 0), dtype=np.int64)
    return lattice.hnf(cols.T).T


@dataclass
class ZGModule:
    """Z^n with a left G-action given on generators and extended through the Cayley table."""

    group: FiniteGroup = field(repr=False)
    rank: int
    action: dict  # generator element -> n x n integer matrix

    def __post_init__(self):
        self.action = {int(k): _compact(v) for k, v in self.action.items()}
        for k, v in self.action.items():
            if v.shape != (self.rank, self.rank):
                raise InvalidInputError("action matrices must be rank x rank")
        self._all = None

    def matrices(self) -> dict:
        """rho(x) for every x, built breadth-first with rho(x s) = rho(x) rho(s)."""
        if self._all is None:
            g = self.group
            mats = {0: np.eye(self.rank, dtype=np.int64)}
            frontier = [0]
            while frontier:
                nxt = []
                for x in frontier:
                    for s, ms in self.action.items():
                        y = g.mul(x, s)
                        if y not in mats:
                            mats[y] = _matmul(mats[x], ms)
                            nxt.append(y)
                frontier = nxt
            if len(mats) != g.order:
                raise InvalidInputError("action generators do not generate the group")
            self._all = mats
        return self._all

    def matrix(self, x: int) -> np.ndarray:
        return self.matrices()[int(x)]

    def act(self, a, m: np.ndarray) -> np.ndarray:
        """Action of a group-algebra element (coefficient vector) on column vectors."""
        coeffs = a.coeffs if hasattr(a, "coeffs") else a
        out = np.zeros((self.rank,) + np.shape(m)[1:], dtype=object)
        for x, c in enumerate(coeffs):
            if c:
                out = out + int(c) * self.matrix(x).dot(np.asarray(m, dtype=object))
        return out

    def check(self) -> bool:
        """Every rho(x) is invertible over Z and rho(x) rho(y) = rho(xy) on the whole table."""
        g = self.group
        mats = self.matrices()
        for x in range(g.order):
            det = _det(mats[x])
            if abs(det) != 1:
                return False
        for x in range(g.order):
            for y in range(g.order):
                if not np.array_equal(_matmul(mats[x], mats[y]), mats[g.mul(x, y)]):
                    return False
        return True


def _compact(m) -> np.ndarray:
    """int64 when the entries are small, Python integers otherwise."""
    m = np.array(m, dtype=object)
    if m.size == 0 or max(abs(int(x)) for x in m.ravel()) < (1 << 31):
        return m.astype(np.int64)
    return m


def _matmul(a, b) -> np.ndarray:
    if a.dtype != object and b.dtype != object:
        bound = int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) * max(a.shape[1], 1)
        if bound < (1 << 62):
            return a.dot(b)
    return _compact(a.astype(object).dot(b.astype(object)))


def _det(m) -> int:
    n = m.shape[0]
    if n == 0:
        return 1
    return int(round(np.linalg.det(m.astype(float)))) if n <= 8 else _bareiss_det(m)


def _bareiss_det(m) -> int:
    a = [[int(x) for x in row] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k]), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def regular_module(g: FiniteGroup) -> ZGModule:
    """Z[G] acting on itself by left multiplication: rho(x) e_y = e_{xy}."""
    mats = {}
    for s in g.generators:
        m = np.zeros((g.order, g.order), dtype=np.int64)
        m[g.table[s], np.arange(g.order)] = 1
        mats[s] = m
    return ZGModule(g, g.order, mats)


def permutation_module(g: FiniteGroup, k: Subgroup) -> ZGModule:
    """Z[G/K] with G permuting the left cosets."""
    reps = coset_representatives(g, k, "left")
    el = np.array(k.elements)
    label = np.empty(g.order, dtype=np.int64)
    for i, x in enumerate(reps):
        label[g.table[x, el]] = i
    n = len(reps)
    mats = {}
    for s in g.generators:
        m = np.zeros((n, n), dtype=np.int64)
        for i, x in enumerate(reps):
            m[label[g.mul(s, x)], i] = 1
        mats[s] = m
    return ZGModule(g, n, mats)


def direct_sum(m1: ZGModule, m2: ZGModule) -> ZGModule:
    if m1.group is not m2.group:
        raise InvalidInputError("modules over different groups")
    gens = set(m1.action) | set(m2.action)
    mats = {}
    for s in gens:
        a, b = m1.matrix(s), m2.matrix(s)
        top = np.concatenate([a, np.zeros((m1.rank, m2.rank), dtype=object)], axis=1)
        bot = np.concatenate([np.zeros((m2.rank, m1.rank), dtype=object), b], axis=1)
        mats[s] = np.concatenate([top, bot], axis=0)
    return ZGModule(m1.group, m1.rank + m2.rank, mats)


def random_unimodular(n: int, rng: np.random.Generator, steps: int = 12):
    """(U, U^-1) from random elementary row operations with small multipliers."""
    u = np.eye(n, dtype=np.int64).astype(object)
    ui = u.copy()
    for _ in range(steps if n > 1 else 0):
        i, j = rng.choice(n, size=2, replace=False)
        k = int(rng.integers(-2, 3)) or 1
        u[i] = u[i] + k * u[j]            # U <- E U
        ui[:, j] = ui[:, j] - k * ui[:, i]  # U^-1 <- U^-1 E^-1
    return u, ui


def conjugate_module(m: ZGModule, u, u_inv) -> ZGModule:
    mats = {s: u.dot(a).dot(u_inv) for s, a in m.action.items()}
    return ZGModule(m.group, m.rank, mats)


def random_module(g: FiniteGroup, rng: np.random.Generator, max_rank: int = 8,
                  subgroups: Optional[Sequence[Subgroup]] = None) -> ZGModule:
    """A sum of coset permutation modules of total rank <= max_rank, in a random Z-basis."""
    from .groups import all_subgroups

    pool = [h for h in (subgroups if subgroups is not None else all_subgroups(g)) if h.index <= max_rank]
    pool.sort(key=lambda h: h.sort_key())
    first = pool[int(rng.integers(len(pool)))]
    mod = permutation_module(g, first)
    rest = [h for h in pool if h.index <= max_rank - mod.rank]
    if rest and rng.random() < 0.5:
        mod = direct_sum(mod, permutation_module(g, rest[int(rng.integers(len(rest)))]))
    u, ui = random_unimodular(mod.rank, rng)
    return conjugate_module(mod, u, ui)


def _subgroup_generators(h: Subgroup) -> list:
    g = h.parent
    mask = np.zeros(g.order, dtype=bool)
    mask[0] = True
    gens = []
    for x in h.elements:
        if not mask[x]:
            gens.append(x)
            mask = _closure(g, np.flatnonzero(mask), np.array(gens))
    return gens


def fixed_submodule(m: ZGModule, h: Subgroup) -> np.ndarray:
    """Column-HNF basis of M^H, the integer kernel of the stacked rho(h) - 1."""
    gens = _subgroup_generators(h)
    if not gens:
        return np.eye(m.rank, dtype=np.int64)
    eye = np.eye(m.rank, dtype=np.int64)
    stacked = np.concatenate([_compact(m.matrix(x) - eye) for x in gens], axis=0)
    ker = lattice.kernel_basis(stacked.T)  # rows x with x @ stacked^T = 0, i.e. stacked x^T = 0
    return column_hnf(ker.T) if ker.size else np.zeros((m.rank, 0), dtype=np.int64)


def relation_submodule(m: ZGModule, rel) -> np.ndarray:
    """Column-HNF basis of sum_i a_i M^{H_i}."""
    if isinstance(rel, ScalarRelation):
        rel = rel.as_norm_relation()
    if rel.group is not m.group:
        raise InvalidInputError("relation and module are over different groups")
    cols = []
    fixed = {}
    for a, h, _ in rel.terms:
        if h.elements not in fixed:
            fixed[h.elements] = fixed_submodule(m, h)
        f = fixed[h.elements]
        if f.shape[1]:
            cols.append(m.act(a, f))
    if not cols:
        return np.zeros((m.rank, 0), dtype=np.int64)
    return column_hnf(np.concatenate(cols, axis=1).astype(object))


def _coordinates(full: np.ndarray, sub: np.ndarray) -> np.ndarray:
    """Integer X with full @ X = sub, or raise if sub is not inside full."""
    full = np.asarray(full, dtype=object)
    sub = np.asarray(sub, dtype=object)
    r = full.shape[1]
    if r == 0:
        if np.any(sub != 0):
            raise InvalidInputError("sublattice is not contained in the full lattice")
        return np.zeros((0, sub.shape[1]), dtype=object)
    h = lattice.hnf(full.T)  # rows span the same lattice as the columns of full
    coords = []
    for j in range(sub.shape[1]):
        c = lattice.row_in_lattice(h, sub[:, j])
        if c is None:
            raise InvalidInputError("sublattice is not contained in the full lattice")
        coords.append(c)
    if h.shape[0] != r:
        raise InvalidInputError("full lattice basis is not linearly independent")
    return np.array(coords, dtype=object).reshape(sub.shape[1], r).T


def quotient_invariants(full, sub) -> list:
    """Invariants (>1) of full/sub, which must be finite."""
    x = _coordinates(full, sub)
    r = x.shape[0]
    if r == 0:
        return []
    h = lattice.hnf(x.T)  # rows: basis of sub in full-coordinates
    if h.shape[0] != r:
        raise InvalidInputError("sublattice does not have finite index")
    return [d for d in lattice.elementary_divisors(h) if d > 1]


def lattice_index(full, sub) -> int:
    """[full : sub] as the determinant of sub in coordinates of full."""
    x = _coordinates(full, sub)
    r = x.shape[0]
    if r == 0:
        return 1
    h = lattice.hnf(x.T)
    if h.shape[0] != r:
        raise InvalidInputError("sublattice does not have finite index")
    return lattice.determinant_of_full_rank(h)


def quotient_exponent(full, sub) -> int:
    """Exponent of full/sub: the least e with e * full contained in sub."""
    x = _coordinates(full, sub)
    r = x.shape[0]
    if r == 0:
        return 1
    h = lattice.hnf(x.T)
    if h.shape[0] != r:
        raise InvalidInputError("sublattice does not have finite index")
    det = lattice.determinant_of_full_rank(h)
    if det == 1:
        return 1
    # e * I lies in the row span of the triangular h iff e * h^-1 is integral
    inv = _upper_triangular_inverse(h)
    return lcm(*(v.denominator for row in inv for v in row))


def _upper_triangular_inverse(h) -> list:
    r = h.shape[0]
    hh = [[Fraction(int(v)) for v in row] for row in h]
    inv = [[Fraction(0)] * r for _ in range(r)]
    for i in range(r - 1, -1, -1):
        for j in range(r):
            s = Fraction(int(i == j))
            for k in range(i + 1, r):
                if hh[i][k]:
                    s -= hh[i][k] * inv[k][j]
            inv[i][j] = s / hh[i][i]
    return inv


def _regular_generated_lattice(g: FiniteGroup, subgroups: Sequence[Subgroup]) -> np.ndarray:
    """Column HNF of the Z[G]-module generated by the M^H inside the regular module.

    Conjugate subgroups have G-translate fixed modules and M^H is contained in
    M^K for K inside H, so one representative per conjugacy class of minimal
    members suffices.
    """
    m = regular_module(g)
    reps, seen = [], set()
    for k, h, t in minimal_conjugation_closure(subgroups):
        cls = frozenset(_conjugates(k))
        if cls & seen:
            continue
        seen |= cls
        reps.append(k)
    vecs = []
    for k in reps:
        f = fixed_submodule(m, k)
        for x in range(g.order):
            # rho(x) permutes coordinates: (rho(x) v)[x y] = v[y]
            moved = np.zeros_like(f)
            moved[g.table[x]] = f
            vecs.append(moved.T.astype(np.int64))
    rows = np.unique(np.concatenate(vecs, axis=0), axis=0)
    return lattice.hnf(rows).T


def _conjugates(k: Subgroup):
    from .groups import conjugacy_class_of_subgroup
    return [c.elements for c in conjugacy_class_of_subgroup(k)]


def regular_index(g: FiniteGroup, subgroups: Sequence[Subgroup]) -> int:
    """Index in Z[G] of the Z[G]-module generated by sum of M^H (0 if infinite)."""
    sub = _regular_generated_lattice(g, subgroups)
    if sub.shape[1] < g.order:
        return 0
    return lattice.determinant_of_full_rank(sub.T)


def regular_exponent(g: FiniteGroup, subgroups: Sequence[Subgroup]) -> int:
    """Exponent of Z[G] modulo the Z[G]-module generated by sum of M^H (0 if infinite)."""
    sub = _regular_generated_lattice(g, subgroups)
    if sub.shape[1] < g.order:
        return 0
    return quotient_exponent(np.eye(g.order, dtype=np.int64), sub)


# --------------------------------------------------------------------------
# finite abelian groups


@dataclass(frozen=True)
class FinAbGroup:
    """Z/d1 + ... + Z/dk + Z^free_rank with d1 | d2 | ... and each di >= 2."""

    invariants: tuple = ()
    free_rank: int = 0

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants)
        object.__setattr__(self, "invariants", inv)
        if any(d < 2 for d in inv):
            raise InvalidInputError("invariants must be >= 2")
        if any(inv[i + 1] % inv[i] for i in range(len(inv) - 1)):
            raise InvalidInputError("invariants must form a divisibility chain")
        if self.free_rank < 0:
            raise InvalidInputError("free rank must be >= 0")

    @classmethod
    def from_orders(cls, orders, free_rank: int = 0) -> "FinAbGroup":
        """Any list of cyclic orders, normalised through Smith normal form."""
        orders = [int(o) for o in orders]
        if not orders:
            return cls((), free_rank)
        diag = lattice.elementary_divisors(np.diag(orders).astype(object))
        return cls(tuple(d for d in diag if d > 1), free_rank)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> Optional[int]:
        return prod(self.invariants) if self.is_finite else None

    @property
    def ngens(self) -> int:
        return len(self.invariants) + self.free_rank

    @property
    def gen_orders(self) -> tuple:
        """Order of each generator, 0 for free generators."""
        return self.invariants + (0,) * self.free_rank

    def reduce(self, v) -> tuple:
        return tuple(int(x) % o if o else int(x) for x, o in zip(v, self.gen_orders))

    def is_zero(self, v) -> bool:
        return not any(self.reduce(v))

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariants] + ["Z"] * self.free_rank
        return " + ".join(parts) or "0"


@dataclass
class AbHom:
    source: FinAbGroup
    target: FinAbGroup
    matrix: np.ndarray  # target.ngens x source.ngens

    def __post_init__(self):
        self.matrix = np.array(self.matrix, dtype=object).reshape(self.target.ngens, self.source.ngens)
        for j, o in enumerate(self.source.gen_orders):
            col = self.matrix[:, j]
            if o == 0:
                continue
            if not self.target.is_zero([o * int(c) for c in col]):
                raise InvalidInputError(f"column {j} is not killed by the source order {o}")

    def __call__(self, v) -> tuple:
        return self.target.reduce(self.matrix.dot(np.array(v, dtype=object)))

    def compose(self, other: "AbHom") -> "AbHom":
        """self o other."""
        if other.target != self.source:
            raise InvalidInputError("maps do not compose")
        return AbHom(other.source, self.target, self.matrix.dot(other.matrix))

    def is_multiplication_by(self, d: int) -> bool:
        if self.source != self.target:
            return False
        n = self.source.ngens
        diff = self.matrix - d * np.eye(n, dtype=np.int64).astype(object)
        return all(self.target.is_zero(diff[:, j]) for j in range(n))

    def image(self) -> FinAbGroup:
        """Isomorphism type of the image, via the kernel of Z^n -> target."""
        return _image_in_raw_sum(self.matrix, self.source, _RawSum(self.target.gen_orders))


def cokernel_group(cols, n: int) -> FinAbGroup:
    """Z^n modulo the columns of ``cols``."""
    cols = np.asarray(cols, dtype=object).reshape(n, -1)
    if cols.shape[1] == 0:
        return FinAbGroup((), n)
    diag = lattice.elementary_divisors(cols)
    nonzero = [d for d in diag if d != 0]
    return FinAbGroup(tuple(d for d in nonzero if d > 1), n - len(nonzero))


def class_group_from_valuations(valuations, num_primes: int) -> FinAbGroup:
    """Cokernel of the valuation map Z^k -> Z^num_primes (columns are valuation vectors)."""
    v = np.asarray(valuations, dtype=object)
    if v.size == 0:
        return FinAbGroup((), num_primes)
    v = v.reshape(num_primes, -1)
    return cokernel_group(v, num_primes)


def prime_to_part(a: FinAbGroup, d: int) -> FinAbGroup:
    """The group after inverting d: drop the d-primary part of each invariant."""
    out = []
    for x in a.invariants:
        g = gcd(x, d)
        while g > 1:
            x //= g
            g = gcd(x, d)
        if x > 1:
            out.append(x)
    return FinAbGroup(tuple(out), a.free_rank)


@dataclass
class TransferReport:
    image_summand: FinAbGroup
    verified: bool
    denominator: int
    image: FinAbGroup


def class_group_transfer(rel, class_group: FinAbGroup, subfield_groups: Sequence[FinAbGroup],
                         norm_maps: Sequence[AbHom], extension_maps: Sequence[AbHom]) -> TransferReport:
    """Check Psi o Phi = d on Cl(K) and describe the image of Phi after inverting d.

    ``norm_maps[i]`` goes Cl(K) -> subfield_groups[i] and ``extension_maps[i]``
    goes back; Phi and Psi are their direct sum and sum.
    """
    d = rel if isinstance(rel, int) else rel.denominator
    if not (len(subfield_groups) == len(norm_maps) == len(extension_maps)):
        raise InvalidInputError("one norm map and one extension map per subfield group")
    if not class_group.is_finite:
        raise InvalidInputError("class group must be finite")
    blocks_phi, blocks_psi = [], []
    for a, phi, psi in zip(subfield_groups, norm_maps, extension_maps):
        if phi.source != class_group or phi.target != a:
            raise InvalidInputError("norm map has the wrong source or target")
        if psi.source != a or psi.target != class_group:
            raise InvalidInputError("extension map has the wrong source or target")
        blocks_phi.append(phi.matrix)
        blocks_psi.append(psi.matrix)
    # the sum of subfield groups keeps its generators (not re-normalised)
    orders = [o for a in subfield_groups for o in a.gen_orders]
    phi_mat = np.concatenate(blocks_phi, axis=0) if blocks_phi else np.zeros((0, class_group.ngens), dtype=object)
    psi_mat = np.concatenate(blocks_psi, axis=1) if blocks_psi else np.zeros((class_group.ngens, 0), dtype=object)
    comp = AbHom(class_group, class_group, psi_mat.dot(phi_mat))
    if not comp.is_multiplication_by(d):
        raise InvalidInputError(f"Psi o Phi is not multiplication by {d}")
    # image of Phi inside the sum, presented with the raw generator orders
    sum_group = _RawSum(tuple(orders))
    image = _image_in_raw_sum(phi_mat, class_group, sum_group)
    # e = Phi Psi / d is idempotent after inverting d: (Phi Psi)^2 = d Phi Psi
    pp = phi_mat.dot(psi_mat)
    sq = pp.dot(pp)
    idem = all(sum_group.is_zero(col) for col in (sq - d * pp).T)
    summand = prime_to_part(image, d)
    if not idem:  # pragma: no cover - follows algebraically from Psi Phi = d
        raise VerificationError("Phi Psi fails the idempotent identity")
    return TransferReport(summand, True, d, image)


@dataclass(frozen=True)
class _RawSum:
    orders: tuple

    def is_zero(self, v) -> bool:
        return all((int(x) % o == 0) if o else int(x) == 0 for x, o in zip(v, self.orders))


def _image_in_raw_sum(phi_mat, source: FinAbGroup, target: _RawSum) -> FinAbGroup:
    """Image of Z^n -> target, presented as Z^n modulo {x : Phi x = 0 in target}."""
    n = source.ngens
    rel_cols = [np.eye(len(target.orders), dtype=np.int64)[:, k] * o for k, o in enumerate(target.orders) if o]
    big = np.concatenate([np.array(phi_mat, dtype=object).reshape(len(target.orders), n)]
                         + [np.array(c, dtype=object)[:, None] for c in rel_cols], axis=1)
    # rows (x, y) of the left kernel of big^T satisfy Phi x + T y = 0
    ker = lattice.kernel_basis(np.array(big, dtype=object).T)
    rels = ker[:, :n] if ker.size else np.zeros((0, n), dtype=np.int64)
    return cokernel_group(np.array(rels, dtype=object).T, n)
