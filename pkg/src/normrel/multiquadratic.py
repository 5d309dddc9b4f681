"""Unit groups of real multiquadratic fields from quadratic subfield units.

Elements are exact rational coordinate vectors over the basis
b_T = sqrt(r_T), where T runs over subsets of the generators (as bitmasks) and
r_T is the squarefree part of prod_{i in T} d_i.  The Galois group C2^n acts
by sign patterns: the automorphism with mask s sends b_T to (-1)^|T & s| b_T,
and the real embedding with the same mask is that automorphism followed by the
positive square roots.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product as iproduct
from math import isqrt, lcm, log, prod
from typing import Optional, Sequence

import mpmath
import numpy as np
from mpmath import iv, mp
from sympy import factorint, isprime, nextprime
from sympy.ntheory import sqrt_mod

from .errors import BadReductionError, BudgetExceededError, InvalidInputError, VerificationError


def squarefree_part(n: int) -> int:
    if n == 0:
        raise InvalidInputError("0 has no squarefree part")
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorint(abs(n)).values())


def _popcount(x: int) -> int:
    return bin(x).count("1")


class MQField:
    """Q(sqrt d_1, ..., sqrt d_n) for squarefree d_i > 1 independent modulo squares."""

    def __init__(self, generators: Sequence[int]):
        gens = [int(d) for d in generators]
        if not gens:
            raise InvalidInputError("a multiquadratic field needs at least one generator")
        for d in gens:
            if d <= 1:
                raise InvalidInputError(f"generator {d} must be > 1 (totally real fields only)")
            if not is_squarefree(d):
                raise InvalidInputError(f"{d} is not squarefree")
        self.generators = tuple(gens)
        self.n = len(gens)
        self.degree = 1 << self.n
        rad = [1] * self.degree
        for t in range(1, self.degree):
            rad[t] = squarefree_part(prod(gens[i] for i in range(self.n) if t >> i & 1))
        if len(set(rad[1:])) != self.degree - 1 or 1 in rad[1:]:
            raise InvalidInputError("generators are dependent modulo squares")
        self.radicands = tuple(rad)
        # b_S b_T = mult[S][T] * b_{S xor T}
        self.mult = [[isqrt(rad[s] * rad[t] // rad[s ^ t]) for t in range(self.degree)]
                     for s in range(self.degree)]
        self._index_of_radicand = {r: t for t, r in enumerate(rad)}
        self._galois = None

    def __repr__(self):
        return f"MQField({list(self.generators)})"

    def __eq__(self, other):
        return isinstance(other, MQField) and other.generators == self.generators

    def __hash__(self):
        return hash(self.generators)

    @property
    def basis(self) -> list:
        return [f"sqrt({r})" if t else "1" for t, r in enumerate(self.radicands)]

    @cached_property
    def discriminant_log(self) -> float:
        """log |disc K| as the sum of the quadratic subfield discriminants' logs."""
        total = 0.0
        for d in self.radicands[1:]:
            total += log(d if d % 4 == 1 else 4 * d)
        return total

    @cached_property
    def discriminant(self) -> int:
        return prod(d if d % 4 == 1 else 4 * d for d in self.radicands[1:])

    def subset_of_radicand(self, d: int) -> int:
        return self._index_of_radicand[d]

    def element(self, coords) -> "MQElement":
        return MQElement(self, coords)

    def rational(self, q) -> "MQElement":
        c = [Fraction(0)] * self.degree
        c[0] = Fraction(q)
        return MQElement(self, c)

    def one(self) -> "MQElement":
        return self.rational(1)

    def sqrt_of(self, d: int) -> "MQElement":
        """The basis element sqrt(d) for a radicand d of the field."""
        c = [Fraction(0)] * self.degree
        c[self.subset_of_radicand(d)] = Fraction(1)
        return MQElement(self, c)

    def galois_group(self):
        """C2^n with element index equal to the sign mask."""
        from .groups import group_from_abelian_invariants
        if self._galois is None:
            self._galois = group_from_abelian_invariants([2] * self.n, label=f"Gal{list(self.generators)}")
        return self._galois

    def pattern(self, signs) -> int:
        """Sign mask from an int or from a collection of generators being negated."""
        if isinstance(signs, int):
            if not 0 <= signs < self.degree:
                raise InvalidInputError("sign mask out of range")
            return signs
        mask = 0
        for d in signs:
            if int(d) not in self.generators:
                raise InvalidInputError(f"{d} is not a generator of the field")
            mask |= 1 << self.generators.index(int(d))
        return mask


def quad_subfields(f: MQField) -> list:
    """The squarefree D with Q(sqrt D) inside the field, ascending."""
    return sorted(f.radicands[1:])


class MQElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: MQField, coords):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != field.degree:
            raise InvalidInputError("coordinate vector has the wrong length")
        self.field = field
        self.coords = coords

    def _check(self, other):
        if not isinstance(other, MQElement) or other.field != self.field:
            raise InvalidInputError("elements of different fields")

    def __add__(self, other):
        self._check(other)
        return MQElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return MQElement(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return MQElement(self.field, [-a for a in self.coords])

    def __mul__(self, other):
        if not isinstance(other, MQElement):
            return MQElement(self.field, [a * Fraction(other) for a in self.coords])
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, MQElement):
            return MQElement(self.field, [a / Fraction(other) for a in self.coords])
        return mul(self, inv(other))

    def __pow__(self, k: int):
        return power(self, k)

    def __eq__(self, other):
        return isinstance(other, MQElement) and other.field == self.field and other.coords == self.coords

    def __hash__(self):
        return hash((self.field, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __repr__(self):
        parts = []
        for t, c in enumerate(self.coords):
            if c:
                parts.append(str(c) if t == 0 else f"{c}*sqrt({self.field.radicands[t]})")
        return "MQElement(" + (" + ".join(parts) or "0") + ")"

    def to_json(self) -> list:
        return [str(c) for c in self.coords]


def mul(x: MQElement, y: MQElement) -> MQElement:
    x._check(y)
    f = x.field
    out = [Fraction(0)] * f.degree
    ynz = [(t, c) for t, c in enumerate(y.coords) if c]
    for s, a in enumerate(x.coords):
        if not a:
            continue
        row = f.mult[s]
        for t, b in ynz:
            out[s ^ t] += a * b * row[t]
    return MQElement(f, out)


def conjugate(x: MQElement, sign_pattern) -> MQElement:
    """Apply the automorphism flipping sqrt(d_i) for the generators in the pattern."""
    s = x.field.pattern(sign_pattern)
    return MQElement(x.field, [-c if _popcount(t & s) % 2 else c for t, c in enumerate(x.coords)])


def norm(x: MQElement) -> Fraction:
    """Absolute norm: the product of all 2^n conjugates, an exact rational."""
    total = x.field.one()
    for s in range(x.field.degree):
        total = mul(total, conjugate(x, s))
    if not total.is_rational():  # pragma: no cover - Galois-invariant by construction
        raise VerificationError("norm is not rational")
    return total.coords[0]


def inv(x: MQElement) -> MQElement:
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero")
    f = x.field
    rest = f.one()
    for s in range(1, f.degree):
        rest = mul(rest, conjugate(x, s))
    nrm = mul(x, rest)
    return MQElement(f, [c / nrm.coords[0] for c in rest.coords])


def power(x: MQElement, k: int) -> MQElement:
    if k < 0:
        x, k = inv(x), -k
    result = x.field.one()
    base = x
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def apply_algebra_element(x: MQElement, a) -> MQElement:
    """x^a = prod_g g(x)^{a_g} for a in Z[Gal]; group elements are sign masks."""
    if x.is_zero():
        raise InvalidInputError("cannot act on zero")
    f = x.field
    g = a.group
    if g.order != f.degree or not np.array_equal(g.table, f.galois_group().table):
        raise InvalidInputError("algebra element is not over the Galois group of this field")
    result = f.one()
    for s, c in enumerate(a.coeffs):
        c = int(c)
        if c:
            result = mul(result, power(conjugate(x, s), c))
    return result


def apply_relation(x: MQElement, rel) -> MQElement:
    """prod_i ((x^{b_i})^{N_{H_i}})^{a_i}; equals x^d by the Artin identity."""
    from .algebra import ZZ, norm_element
    result = x.field.one()
    for a, h, b in rel.terms:
        y = apply_algebra_element(x, b)
        y = apply_algebra_element(y, norm_element(h, ZZ))
        result = mul(result, apply_algebra_element(y, a))
    return result


# --------------------------------------------------------------------------
# quadratic units


def fundamental_unit(d: int, max_steps: int = 200_000) -> MQElement:
    """Fundamental unit > 1 of the maximal order of Q(sqrt d), by continued fractions.

    For d = 1 mod 4 the expansion is that of (1 + sqrt d)/2; the unit appears at
    the first k with Q_{k+1} = 2 and equals (p_k - q_k/2) + (q_k/2) sqrt d.
    Otherwise the expansion of sqrt d is used and the unit p_k + q_k sqrt d
    appears at the first k with Q_{k+1} = 1.
    """
    d = int(d)
    if d <= 1 or not is_squarefree(d):
        raise InvalidInputError(f"{d} must be a squarefree integer > 1")
    f = MQField([d])
    s = isqrt(d)
    half = d % 4 == 1
    p_val, q_val = (1, 2) if half else (0, 1)
    target = 2 if half else 1
    # convergent numerators h and denominators k, seeded with h_{-1}=1, h_{-2}=0
    h1, h2 = 1, 0
    k1, k2 = 0, 1
    for _ in range(max_steps):
        a = (p_val + s) // q_val
        h1, h2 = a * h1 + h2, h1
        k1, k2 = a * k1 + k2, k1
        p_val = a * q_val - p_val
        q_val = (d - p_val * p_val) // q_val
        if q_val == target:
            if half:
                unit = f.element([Fraction(h1) - Fraction(k1, 2), Fraction(k1, 2)])
            else:
                unit = f.element([h1, k1])
            if abs(norm(unit)) != 1:  # pragma: no cover
                raise VerificationError(f"continued fraction unit for {d} has norm {norm(unit)}")
            return unit
    raise BudgetExceededError(f"continued fraction of sqrt({d}) exceeds {max_steps} steps")


def embed_quadratic(f: MQField, u: MQElement) -> MQElement:
    """Image in f of an element of Q(sqrt D), D a radicand of f."""
    if u.field.n != 1:
        raise InvalidInputError("expected an element of a quadratic field")
    d = u.field.generators[0]
    c = [Fraction(0)] * f.degree
    c[0] = u.coords[0]
    c[f.subset_of_radicand(d)] = u.coords[1]
    return MQElement(f, c)


# --------------------------------------------------------------------------
# local characters


@dataclass(frozen=True)
class LocalCharacter:
    """Quadratic-residue character at a degree-one prime above a split prime q."""

    prime: int
    root_choices: dict      # d_i -> chosen sqrt(d_i) mod q
    tested_unit_only: bool = True
    field_gens: tuple = field(default=(), repr=False)

    def basis_images(self, f: MQField) -> list:
        q = self.prime
        out = []
        for t in range(f.degree):
            # sqrt(r_T) = prod_{i in T} sqrt(d_i) / c_T with prod d_i = c_T^2 r_T
            full = prod(f.generators[i] for i in range(f.n) if t >> i & 1)
            c = isqrt(full // f.radicands[t])
            v = 1
            for i in range(f.n):
                if t >> i & 1:
                    v = v * self.root_choices[f.generators[i]] % q
            out.append(v * pow(c, -1, q) % q)
        return out

    def __hash__(self):
        return hash((self.prime, tuple(sorted(self.root_choices.items()))))


def make_local_character(f: MQField, q: int) -> Optional[LocalCharacter]:
    """Character at q when every d_i is a nonzero square mod q (q splits completely)."""
    q = int(q)
    if q == 2 or not isprime(q):
        raise InvalidInputError(f"{q} must be an odd prime")
    roots = {}
    for d in f.generators:
        if d % q == 0:
            return None
        r = sqrt_mod(d % q, q, all_roots=True)
        if not r:
            return None
        roots[d] = min(r)
    return LocalCharacter(q, roots, True, f.generators)


def reduce_mod(c: LocalCharacter, x: MQElement) -> int:
    q = c.prime
    images = c.basis_images(x.field)
    total = 0
    for coeff, img in zip(x.coords, images):
        if coeff:
            if coeff.denominator % q == 0:
                raise BadReductionError(f"denominator of {x} divisible by {q}")
            total += coeff.numerator * pow(coeff.denominator, -1, q) * img
    total %= q
    if total == 0:
        raise BadReductionError(f"{x} reduces to 0 modulo the prime above {q}")
    return total


def evaluate_character(c: LocalCharacter, x: MQElement) -> int:
    """0 if x is a square in the residue field, 1 otherwise (Euler's criterion)."""
    v = reduce_mod(c, x)
    return 0 if pow(v, (c.prime - 1) // 2, c.prime) == 1 else 1


def split_primes(f: MQField, start: int = 3):
    """Odd primes q >= start with a local character, in increasing order."""
    q = max(start, 3)
    if not isprime(q):
        q = nextprime(q)
    while True:
        ch = make_local_character(f, q)
        if ch is not None:
            yield ch
        q = nextprime(q)


# --------------------------------------------------------------------------
# numerics


@contextmanager
def _iv_prec(bits: int):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _embedding_values(x: MQElement, bits: int) -> list:
    f = x.field
    with mp.workprec(bits):
        roots = [mp.sqrt(r) for r in f.radicands]
        terms = [mp.mpf(c.numerator) / c.denominator * roots[t] for t, c in enumerate(x.coords)]
        out = []
        for s in range(f.degree):
            out.append(mp.fsum(-v if _popcount(t & s) % 2 else v for t, v in enumerate(terms)))
    return out


def _embedding_intervals(x: MQElement, bits: int) -> list:
    f = x.field
    with _iv_prec(bits):
        roots = [iv.sqrt(iv.mpf(r)) for r in f.radicands]
        terms = [iv.mpf(c.numerator) / iv.mpf(c.denominator) * roots[t] for t, c in enumerate(x.coords)]
        out = []
        for s in range(f.degree):
            acc = iv.mpf(0)
            for t, v in enumerate(terms):
                acc = acc - v if _popcount(t & s) % 2 else acc + v
            out.append(acc)
    return out


def log_embedding(x: MQElement, bits: int = 128) -> list:
    """(log |sigma(x)|)_sigma over the 2^n real embeddings (mpf values)."""
    if x.is_zero():
        raise InvalidInputError("log embedding of zero")
    with mp.workprec(bits):
        vals = _embedding_values(x, bits + 32)
        return [mp.log(abs(v)) for v in vals]


def _log_intervals(x: MQElement, bits: int) -> list:
    vals = _embedding_intervals(x, bits)
    with _iv_prec(bits):
        out = []
        for v in vals:
            a = abs(v)
            if a.a <= 0:
                raise BudgetExceededError("embedding interval contains 0; raise the precision")
            out.append(iv.log(a))
    return out


def height(x: MQElement, bits: int = 128) -> float:
    """Logarithmic height sum_sigma max(0, log|sigma x|) of a unit."""
    return float(sum(max(v, 0) for v in log_embedding(x, bits)))


def _to_fraction(v) -> Fraction:
    # man_exp drops the sign, so read the raw tuple
    sign, man, exp, _ = mpmath.mpf(v)._mpf_
    return (-1 if sign else 1) * Fraction(int(man)) * (Fraction(2) ** int(exp))


def _certified_negative_embedding(x: MQElement, bits: int) -> bool:
    return any(v.b < 0 for v in _embedding_intervals(x, bits))


def _sqrt_attempt(x: MQElement, bits: int) -> Optional[MQElement]:
    f = x.field
    deg = f.degree
    vals = _embedding_values(x, bits)
    with mp.workprec(bits):
        if any(v <= 0 for v in vals):
            return None
        roots = [mp.sqrt(v) for v in vals]
        scale = [mp.sqrt(r) * deg for r in f.radicands]
        bound = 1 << max(bits // 4, 8)
        tol = mp.mpf(2) ** (-(bits // 2))
        for signs in iproduct((1, -1), repeat=deg - 1):
            eps = (1,) + signs
            coords = []
            ok = True
            for t in range(deg):
                acc = mp.fsum(eps[s] * roots[s] * (-1 if _popcount(s & t) % 2 else 1) for s in range(deg))
                c = acc / scale[t]
                fr = _to_fraction(c).limit_denominator(bound)
                if abs(c - mp.mpf(fr.numerator) / fr.denominator) > tol * max(1, abs(c)):
                    ok = False
                    break
                coords.append(fr)
            if not ok:
                continue
            y = MQElement(f, coords)
            if mul(y, y) == x:
                return y
    return None


def sqrt_in_field(x: MQElement, min_bits: int = 128, max_bits: int = 8192,
                  char_limit: int = 5000) -> Optional[MQElement]:
    """y with y^2 = x exactly, or None when x is certified not to be a square.

    Numeric square roots of the embeddings are combined over all sign patterns,
    coordinates are recovered by bounded-denominator rational approximation,
    and every candidate is squared exactly.  A None answer needs a certificate:
    a negative real embedding, or a local character taking the value 1.
    """
    if x.is_zero():
        return x
    f = x.field
    bits = min_bits
    while bits <= max_bits:
        if _certified_negative_embedding(x, bits):
            return None   # squares are totally positive
        y = _sqrt_attempt(x, bits)
        if y is not None:
            return y
        bits *= 2
    for count, ch in enumerate(split_primes(f)):
        if count >= char_limit:
            break
        try:
            if evaluate_character(ch, x) == 1:
                return None
        except BadReductionError:
            continue
    raise BudgetExceededError("could not decide whether the element is a square")


# --------------------------------------------------------------------------
# unit groups


@dataclass
class SaturationBudget:
    precision_cap: int = 8192
    char_cap: int = 4096           # hard cap on |T|
    max_passes: Optional[int] = None  # defaults to 3n
    prime_limit: Optional[float] = None  # defaults to the Grunwald-Wang bound


@dataclass
class UnitSubgroup:
    field: MQField
    generators: list                      # MQElement, modulo +-1 independent
    includes_minus_one: bool = True
    precision_bits: int = 128
    exponents: list = None                # rational rows relative to the initial group
    certified_to_bound: bool = False
    grh_conditional: bool = False
    passes: int = 0
    log: list = field(default_factory=list)
    characters_used: int = 0

    def __post_init__(self):
        if self.exponents is None:
            r = len(self.generators)
            self.exponents = [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def log_matrix(self) -> list:
        return [log_embedding(u, self.precision_bits) for u in self.generators]

    def quotient_exponent(self) -> int:
        """Exponent of (this group)/(initial group), from the exponent rows."""
        return lcm(*(c.denominator for row in self.exponents for c in row)) if self.exponents else 1

    def quotient_index(self) -> Fraction:
        """[this group : initial group] as 1/|det E|."""
        from sympy import Matrix
        if not self.exponents:
            return Fraction(1)
        det = Matrix(self.exponents).det()
        return 1 / abs(Fraction(int(det.p), int(det.q)))

    def copy(self, **kw) -> "UnitSubgroup":
        data = dict(field=self.field, generators=list(self.generators),
                    includes_minus_one=self.includes_minus_one, precision_bits=self.precision_bits,
                    exponents=[list(r) for r in self.exponents], certified_to_bound=self.certified_to_bound,
                    grh_conditional=self.grh_conditional, passes=self.passes, log=list(self.log),
                    characters_used=self.characters_used)
        data.update(kw)
        return UnitSubgroup(**data)


def gw_bound(d: int, n: int, log_disc: float, log_ms: float) -> float:
    """c0 = 18 d^2 (2 log|disc| + 6 n log d + log M_S)^2."""
    d = int(d)
    if d < 2 or len(factorint(d)) != 1:
        raise InvalidInputError("d must be a prime power >= 2")
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    return 18 * d * d * (2 * log_disc + 6 * n * math.log(d) + log_ms) ** 2


def _f2_kernel(rows: list, m: int) -> list:
    """Reduced echelon basis of {e in F2^m : row . e = 0 for all rows} (rows as int bitsets)."""
    pivots = {}
    for r in rows:
        for p, vec in pivots.items():
            if r >> p & 1:
                r ^= vec
        if r:
            p = r.bit_length() - 1
            for q in list(pivots):
                if pivots[q] >> p & 1:
                    pivots[q] ^= r
            pivots[p] = r
    free = [j for j in range(m) if j not in pivots]
    basis = []
    for j in free:
        v = 1 << j
        for p, vec in pivots.items():
            if vec >> j & 1:
                v |= 1 << p
        basis.append(v)
    # re-echelonise the kernel so pivots sit at the lowest bit (non-torsion first)
    red = []
    for v in basis:
        for w in red:
            low = w & -w
            if v & low:
                v ^= w
        if v:
            low = v & -v
            red = [w ^ v if w & low else w for w in red]
            red.append(v)
    return sorted(red, key=lambda v: (v & -v))


def two_saturate(v: UnitSubgroup, budget: Optional[SaturationBudget] = None) -> UnitSubgroup:
    """Adjoin square roots until the character matrix has trivial kernel.

    Columns of the F2 matrix are the generators followed by -1.  Each kernel
    basis vector gives a candidate product; every candidate that is a square
    has its root adjoined in place of the generator at its pivot, and the pass
    restarts.  When the kernel is nonempty but no candidate is a square, the
    character set doubles.
    """
    budget = budget or SaturationBudget()
    f = v.field
    out = v.copy()
    r = out.rank
    max_passes = budget.max_passes if budget.max_passes is not None else 3 * f.n
    prime_limit = budget.prime_limit or gw_bound(2, f.degree, f.discriminant_log, 0.0)
    size = 10 + r
    chars: list = []
    source = split_primes(f)

    def extend_to(k):
        while len(chars) < k:
            ch = next(source)
            if ch.prime > prime_limit:
                return False
            chars.append(ch)
        return True

    minus_one = f.rational(-1)
    while True:
        if not extend_to(size):
            out.log.append({"event": "prime-limit", "size": len(chars)})
        cols = list(out.generators) + ([minus_one] if out.includes_minus_one else [])
        m = len(cols)
        rows = []
        bad = []
        for ch in chars:
            try:
                bits = [evaluate_character(ch, u) for u in cols]
            except BadReductionError:
                bad.append(ch)
                continue
            rows.append(sum(b << j for j, b in enumerate(bits)))
        for ch in bad:
            chars.remove(ch)
        kernel = _f2_kernel(rows, m)
        out.characters_used = len(chars)
        if not kernel:
            out.certified_to_bound = True
            out.grh_conditional = False
            out.log.append({"event": "kernel-empty", "characters": len(chars), "max_prime": chars[-1].prime if chars else None})
            return out
        roots = []
        for vec in kernel:
            pivot = (vec & -vec).bit_length() - 1
            if pivot >= r:  # only -1: never a square in a real field
                continue
            w = f.one()
            for j in range(m):
                if vec >> j & 1:
                    w = mul(w, cols[j])
            try:
                y = sqrt_in_field(w, max_bits=budget.precision_cap)
            except BudgetExceededError as exc:
                out.log.append({"event": "budget-exhausted", "stage": "sqrt", "square": w_json(vec, cols)})
                raise BudgetExceededError(str(exc), partial=out) from exc
            if y is not None:
                if mul(y, y) != w:  # pragma: no cover
                    raise VerificationError("square root failed exact verification")
                roots.append((pivot, vec, y))
        if not roots:
            if len(chars) >= budget.char_cap or len(chars) < size:
                out.certified_to_bound = False
                out.log.append({"event": "budget-exhausted", "characters": len(chars)})
                raise BudgetExceededError("character budget exhausted during saturation", partial=out)
            size = min(2 * size, budget.char_cap)
            out.log.append({"event": "grow-characters", "size": size})
            continue
        out.passes += 1
        if out.passes > max_passes:
            raise BudgetExceededError(f"saturation exceeded {max_passes} passes", partial=out)
        for pivot, vec, y in roots:
            old = out.exponents
            row = [Fraction(0)] * len(old[0])
            for j in range(r):
                if vec >> j & 1:
                    row = [a + b / 2 for a, b in zip(row, old[j])]
            out.generators[pivot] = y
            out.exponents[pivot] = row
            out.log.append({"event": "adjoin-root", "pass": out.passes, "replaces": pivot,
                            "square": w_json(vec, cols)})


def w_json(vec: int, cols: list) -> list:
    return [j for j in range(len(cols)) if vec >> j & 1]


def size_reduce(v: UnitSubgroup, bits: Optional[int] = None) -> UnitSubgroup:
    """Pairwise nearest-integer reduction in log space; a step is kept only if it lowers the height."""
    bits = bits or v.precision_bits
    out = v.copy()
    r = out.rank
    if r <= 1:
        return out
    with mp.workprec(bits):
        logs = [log_embedding(u, bits) for u in out.generators]
        changed = True
        while changed:
            changed = False
            for i in range(r):
                for j in range(r):
                    if i == j:
                        continue
                    num = mp.fsum(a * b for a, b in zip(logs[i], logs[j]))
                    den = mp.fsum(b * b for b in logs[j])
                    k = int(mp.nint(num / den))
                    if k == 0:
                        continue
                    new = [a - k * b for a, b in zip(logs[i], logs[j])]
                    if mp.fsum(max(a, 0) for a in new) < mp.fsum(max(a, 0) for a in logs[i]) - mp.mpf(2) ** (-bits // 2):
                        out.generators[i] = mul(out.generators[i], power(out.generators[j], -k))
                        out.exponents[i] = [a - k * b for a, b in zip(out.exponents[i], out.exponents[j])]
                        logs[i] = log_embedding(out.generators[i], bits)
                        changed = True
    return out


def _regulator_interval(gens: list, bits: int):
    if not gens:
        return iv.mpf(1)
    with _iv_prec(bits):
        rows = [_log_intervals(u, bits)[:-1] for u in gens]
        det = iv.det(iv.matrix(rows))
        return abs(det)


def regulator(v: UnitSubgroup, bits: Optional[int] = None) -> tuple:
    """(lo, hi) floats enclosing the regulator, checked at bits and 2*bits."""
    bits = bits or v.precision_bits
    lo_int = _regulator_interval(v.generators, bits)
    hi_int = _regulator_interval(v.generators, 2 * bits)
    a1, b1 = lo_int.a, lo_int.b
    a2, b2 = hi_int.a, hi_int.b
    if b2 < a1 or b1 < a2:
        raise VerificationError("regulator intervals at two precisions are disjoint")
    lo = math.nextafter(float(mpmath.mpf(a2)), -math.inf)
    hi = math.nextafter(float(mpmath.mpf(b2)), math.inf)
    return lo, hi


def independence_certified(v: UnitSubgroup, bits: Optional[int] = None) -> bool:
    """Regulator interval excludes 0 at bits and at 2*bits."""
    bits = bits or v.precision_bits
    if v.rank == 0:
        return True
    if v.rank != v.field.degree - 1:
        # independence of a partial system: use a Gram determinant interval
        for b in (bits, 2 * bits):
            with _iv_prec(b):
                rows = [_log_intervals(u, b) for u in v.generators]
                gram = iv.matrix([[sum((x * y for x, y in zip(ri, rj)), iv.mpf(0)) for rj in rows] for ri in rows])
                if iv.det(gram).a <= 0:
                    return False
        return True
    return all(_regulator_interval(v.generators, b).a > 0 for b in (bits, 2 * bits))


@dataclass
class UnitGroupResult:
    units: UnitSubgroup
    subfield_units: dict          # D -> fundamental unit of Q(sqrt D)
    initial_index_exponent: int   # k with exponent of [final : initial] equal to 2^k
    saturation_index: Fraction
    regulator: tuple
    gw_bound: float
    certified_to_bound: bool
    grh_conditional: bool


def unit_group(f: MQField, budget: Optional[SaturationBudget] = None, bits: int = 128) -> UnitGroupResult:
    """Units of f from its quadratic subfields, 2-saturated until every character test is mod-2 trivial."""
    budget = budget or SaturationBudget()
    subs = {D: fundamental_unit(D) for D in quad_subfields(f)}
    gens = [embed_quadratic(f, subs[D]) for D in quad_subfields(f)]
    for u in gens:
        if abs(norm(u)) != 1:  # pragma: no cover
            raise VerificationError("subfield unit is not a unit")
    v = UnitSubgroup(f, gens, True, bits)
    if not independence_certified(v):  # pragma: no cover - subfield units are independent
        raise VerificationError("subfield units are dependent")
    sat = two_saturate(v, budget)
    red = size_reduce(sat)
    for u in red.generators:
        if abs(norm(u)) != 1:  # pragma: no cover
            raise VerificationError("returned generator is not a unit")
    e = red.quotient_exponent()
    k = e.bit_length() - 1
    if 1 << k != e:  # pragma: no cover - roots are square roots only
        raise VerificationError("saturation quotient exponent is not a power of 2")
    reg = regulator(red, bits)
    c0 = gw_bound(2, f.degree, f.discriminant_log, 0.0)
    return UnitGroupResult(red, subs, k, red.quotient_index(), reg, c0,
                           red.certified_to_bound, red.grh_conditional)
