"""Finite fields F_{p^d}, cyclotomic classes and cyclotomic numbers.

Field elements are polynomials over Z_p reduced modulo a fixed monic
irreducible.  They share their index encoding with the additive group
``GroupSpec((), field)``: the coefficient tuple (low degree first) read
lexicographically.  Multiplication goes through precomputed exp/log tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from pgdesign.groups import GroupSpec, Subset


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# polynomial helpers (coefficient lists, low degree first) -----------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _polymul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division of a monic polynomial by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _polymod(poly, list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True, eq=False)
class FieldSpec:
    p: int
    d: int
    modulus: tuple[int, ...]
    primitive_element: int
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)

    @property
    def key(self) -> tuple:
        return (self.p, self.d, self.modulus)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def order(self) -> int:
        return self.p**self.d

    @cached_property
    def additive_group(self) -> GroupSpec:
        return GroupSpec((), self)

    def coeffs(self, x: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.additive_group.digits[int(x)])

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        return self.additive_group.index((tuple(coeffs),))

    def from_int(self, n: int) -> int:
        """The image of the integer n in the prime subfield."""
        return self.from_coeffs((n % self.p,) + (0,) * (self.d - 1))

    def add(self, a, b):
        return self.additive_group.add(a, b)

    def sub(self, a, b):
        return self.additive_group.sub(a, b)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        q1 = self.order - 1
        prod = self.exp[(self.log[a] + self.log[b]) % q1]
        return np.where((a == 0) | (b == 0), 0, prod)

    def power(self, a, s: int):
        a = np.asarray(a, dtype=np.int64)
        if s == 0:
            return np.ones_like(a)
        q1 = self.order - 1
        return np.where(a == 0, 0, self.exp[(self.log[a] * (s % q1)) % q1])

    def modulus_text(self) -> str:
        terms = []
        for i in range(len(self.modulus) - 1, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)

    def describe(self) -> dict:
        return {
            "p": self.p,
            "d": self.d,
            "modulus": list(self.modulus),
            "primitive_element": list(self.coeffs(self.primitive_element)),
        }


_FIELD_CACHE: dict[tuple[int, int], FieldSpec] = {}


def build_field(p: int, d: int = 1) -> FieldSpec:
    """F_{p^d} with the least monic irreducible modulus and least primitive element.

    "Least" compares coefficient tuples lexicographically, low degree first,
    so two builds of the same (p, d) are identical.
    """
    if (p, d) in _FIELD_CACHE:
        return _FIELD_CACHE[(p, d)]
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if d < 1:
        raise FieldError(f"degree must be >= 1, got {d}")
    for low in itertools.product(range(p), repeat=d):
        modulus = tuple(low) + (1,)
        if is_irreducible(modulus, p):
            break
    q = p**d
    weights = [p ** (d - 1 - i) for i in range(d)]

    def to_index(poly: Sequence[int]) -> int:
        c = list(poly) + [0] * (d - len(poly))
        return sum(x * w for x, w in zip(c, weights))

    def to_poly(x: int) -> list[int]:
        return [(x // w) % p for w in weights]

    one = to_index([1])
    prim = None
    exp = None
    for cand in range(1, q):
        g = to_poly(cand)
        powers = [one]
        cur = [1]
        while True:
            cur = _polymod(_polymul(cur, g, p), modulus, p)
            i = to_index(cur)
            if i == one:
                break
            powers.append(i)
        if len(powers) == q - 1:
            prim, exp = cand, powers
            break
    assert prim is not None, "finite field without a primitive element"
    exp_arr = np.array(exp, dtype=np.int64)
    log_arr = np.full(q, -1, dtype=np.int64)
    log_arr[exp_arr] = np.arange(q - 1)
    for arr in (exp_arr, log_arr):
        arr.setflags(write=False)
    f = FieldSpec(p, d, modulus, prim, exp_arr, log_arr)
    _FIELD_CACHE[(p, d)] = f
    return f


def field_from_description(desc: dict) -> FieldSpec:
    f = build_field(int(desc["p"]), int(desc["d"]))
    if "modulus" in desc and tuple(desc["modulus"]) != f.modulus:
        raise FieldError(f"modulus {desc['modulus']} differs from the canonical {list(f.modulus)}")
    return f


def multiplicative_order(f: FieldSpec, x: int) -> int:
    if x == 0:
        raise FieldError("0 has no multiplicative order")
    one = f.from_int(1)
    k, cur = 1, x
    while cur != one:
        cur = int(f.mul(cur, x))
        k += 1
    return k


# cyclotomy -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CyclotomicTable:
    field: FieldSpec
    e: int
    classes: list[Subset]
    numbers: np.ndarray = field(repr=False)

    @property
    def class_size(self) -> int:
        return (self.field.order - 1) // self.e

    @cached_property
    def class_of(self) -> np.ndarray:
        """Class index of every field element, -1 for zero."""
        out = np.full(self.field.order, -1, dtype=np.int64)
        for i, c in enumerate(self.classes):
            out[list(c.indices)] = i
        return out


def cyclotomic_classes(f: FieldSpec, e: int) -> CyclotomicTable:
    """C_i = gamma^i <gamma^e> for i < e, with all e^2 cyclotomic numbers."""
    q1 = f.order - 1
    if e < 1 or q1 % e:
        raise FieldError(f"order e={e} does not divide q-1={q1}")
    g = f.additive_group
    classes = [Subset(g, tuple(int(f.exp[i + k * e]) for k in range(q1 // e))) for i in range(e)]
    class_of = np.full(f.order, -1, dtype=np.int64)
    for i, c in enumerate(classes):
        class_of[list(c.indices)] = i
    one = f.from_int(1)
    numbers = np.zeros((e, e), dtype=np.int64)
    # (i, j) = |C_i ∩ (C_j + 1)|: push every element of C_j forward by 1
    for j, c in enumerate(classes):
        shifted = f.add(c.array, one)
        for y in shifted.tolist():
            if class_of[y] >= 0:
                numbers[class_of[y], j] += 1
    numbers.setflags(write=False)
    return CyclotomicTable(f, e, classes, numbers)


def cyclotomic_number(table: CyclotomicTable, i: int, j: int) -> int:
    if not (0 <= i < table.e and 0 <= j < table.e):
        raise IndexError(f"cyclotomic index ({i},{j}) outside 0..{table.e - 1}")
    return int(table.numbers[i, j])


@dataclass(frozen=True)
class GroupRingReport:
    i: int
    j: int
    a_ij: int
    holds: bool
    lemma_cases_apply: bool
    first_discrepancy: tuple[str, int, int] | None = None  # (element, lhs, rhs)


def group_ring_constant(table: CyclotomicTable, i: int, j: int) -> tuple[int, bool]:
    """a_ij of the product identity, and whether its parity cases cover (e, f)."""
    e, f = table.e, table.class_size
    if f % 2 == 0:
        return (f if j % e == i % e else 0), True
    if e % 2 == 0:
        return (f if j % e == (i + e // 2) % e else 0), True
    return 0, False


def verify_group_ring_identity(table: CyclotomicTable, i: int, j: int) -> GroupRingReport:
    """Check C_i C_j = a_ij 1 + sum_k (j-i, k-i) C_k in Z[F_q] by direct convolution."""
    f = table.field
    e = table.e
    ci, cj = table.classes[i % e], table.classes[j % e]
    sums = f.add(ci.array[:, None], cj.array[None, :])
    lhs = np.bincount(sums.ravel(), minlength=f.order)
    a_ij, applies = group_ring_constant(table, i, j)
    rhs = np.zeros(f.order, dtype=np.int64)
    rhs[0] = a_ij
    for k in range(e):
        coeff = cyclotomic_number(table, (j - i) % e, (k - i) % e)
        rhs[list(table.classes[k].indices)] += coeff
    bad = np.nonzero(lhs != rhs)[0]
    disc = None
    if bad.size:
        x = int(bad[0])
        disc = (f.additive_group.format_element(x), int(lhs[x]), int(rhs[x]))
    return GroupRingReport(i, j, a_ij, disc is None, applies, disc)


@dataclass(frozen=True)
class IntersectionReport:
    j: int
    x: int
    counts: tuple[int, ...]  # |(x - S_j) ∩ C_i| for every i

    @property
    def holds(self) -> bool:
        return all(c == 1 for i, c in enumerate(self.counts) if i != self.j)


def intersection_property_check(f: FieldSpec, j: int, x) -> IntersectionReport:
    """Count |(x - S_j) ∩ C_i| where S_j = C_j ∪ {0} and the classes have order p+1 over F_{p^2}."""
    if f.d != 2:
        raise FieldError("the intersection property concerns F_{p^2}")
    table = cyclotomic_classes(f, f.p + 1)
    g = f.additive_group
    x = g.index(x)
    s_j = set(table.classes[j].indices) | {0}
    if x in s_j:
        raise FieldError(f"x = {g.format_element(x)} lies in S_{j}")
    diffs = f.sub(x, np.array(sorted(s_j)))
    counts = np.bincount(table.class_of[diffs][table.class_of[diffs] >= 0], minlength=table.e)
    return IntersectionReport(j, x, tuple(int(c) for c in counts))
