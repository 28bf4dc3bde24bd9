"""Finite abelian groups, subsets and difference multisets.

A group is a direct product of cyclic factors ``Z_n`` optionally followed by
the additive group of a finite field.  Elements are addressed two ways:

* as *coordinates*: a tuple of residues, one per cyclic factor, with the
  field coordinate (if any) given as a tuple of polynomial coefficients,
  low degree first;
* as an *index* in ``range(order)``, the position of the element in the
  lexicographic ordering of its coordinates.

All heavy arithmetic works on indices through numpy so that window sums
over a few hundred points stay cheap.
"""

from __future__ import annotations

import ast
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Iterator, Sequence

import numpy as np

if TYPE_CHECKING:
    from pgdesign.galois import FieldSpec


class GroupError(ValueError):
    """Raised for malformed groups, elements or subsets."""


Coords = tuple


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """Z_{n_1} x ... x Z_{n_r} [x (F_q, +)].

    Iteration order, and therefore every listing this package emits, is the
    lexicographic order on coordinate tuples.
    """

    cyclic_orders: tuple[int, ...]
    field_factor: FieldSpec | None = None

    def __post_init__(self) -> None:
        orders = tuple(int(n) for n in self.cyclic_orders)
        if any(n < 1 for n in orders):
            raise GroupError(f"cyclic factor orders must be >= 1, got {orders}")
        object.__setattr__(self, "cyclic_orders", orders)

    # identity -----------------------------------------------------------

    def _key(self) -> tuple:
        ff = self.field_factor
        return (self.cyclic_orders, None if ff is None else ff.key)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupSpec) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"GroupSpec({self.describe()})"

    def describe(self) -> str:
        parts = [f"Z_{n}" for n in self.cyclic_orders]
        if self.field_factor is not None:
            parts.append(f"F_{self.field_factor.order}")
        return " x ".join(parts) if parts else "trivial"

    # shape --------------------------------------------------------------

    @cached_property
    def radices(self) -> tuple[int, ...]:
        """Per-digit moduli: the cyclic orders then ``d`` copies of ``p``."""
        ff = self.field_factor
        tail = () if ff is None else (ff.p,) * ff.d
        return self.cyclic_orders + tail

    @cached_property
    def order(self) -> int:
        return int(np.prod(self.radices, dtype=object)) if self.radices else 1

    def __len__(self) -> int:
        return self.order

    @cached_property
    def _weights(self) -> np.ndarray:
        w = [1] * len(self.radices)
        for i in range(len(self.radices) - 2, -1, -1):
            w[i] = w[i + 1] * self.radices[i + 1]
        return np.array(w, dtype=np.int64)

    @cached_property
    def _radix_arr(self) -> np.ndarray:
        return np.array(self.radices, dtype=np.int64)

    @cached_property
    def digits(self) -> np.ndarray:
        """``order x len(radices)`` array of flat digits, row i is element i."""
        if not self.radices:
            return np.zeros((1, 0), dtype=np.int64)
        grid = np.array(list(itertools.product(*(range(n) for n in self.radices))), dtype=np.int64)
        return grid.reshape(self.order, len(self.radices))

    # conversions --------------------------------------------------------

    def _flat_to_coords(self, flat: Sequence[int]) -> Coords:
        r = len(self.cyclic_orders)
        head = tuple(int(x) for x in flat[:r])
        if self.field_factor is None:
            return head
        return head + (tuple(int(x) for x in flat[r:]),)

    def _coords_to_flat(self, coords: Sequence) -> tuple[int, ...]:
        coords = tuple(coords)
        r = len(self.cyclic_orders)
        expected = r + (self.field_factor is not None)
        if len(coords) != expected:
            raise GroupError(f"element {coords!r} has {len(coords)} coordinates, expected {expected}")
        flat = [int(c) for c in coords[:r]]
        if self.field_factor is not None:
            fc = coords[r]
            if isinstance(fc, int):
                fc = (fc,)
            fc = tuple(int(c) for c in fc)
            if len(fc) != self.field_factor.d:
                raise GroupError(f"field coordinate {fc!r} must have {self.field_factor.d} coefficients")
            flat.extend(fc)
        return tuple(flat)

    def index(self, element) -> int:
        """Index of an element given as coordinates (or an index, returned as is)."""
        if isinstance(element, (int, np.integer)):
            i = int(element)
            if not 0 <= i < self.order:
                raise GroupError(f"index {i} outside group of order {self.order}")
            return i
        flat = self._coords_to_flat(element)
        for x, n in zip(flat, self.radices):
            if not 0 <= x < n:
                raise GroupError(f"coordinate {x} not reduced modulo {n} in {element!r}")
        return int(np.dot(flat, self._weights)) if flat else 0

    def element(self, index: int) -> Coords:
        return self._flat_to_coords(self.digits[int(index)])

    def elements(self) -> list[Coords]:
        return [self.element(i) for i in range(self.order)]

    def __iter__(self) -> Iterator[Coords]:
        return iter(self.elements())

    def __contains__(self, element) -> bool:
        try:
            self.index(element)
        except GroupError:
            return False
        return True

    def reduce(self, coords: Sequence) -> int:
        """Index of ``coords`` after reducing every residue into range."""
        flat = self._coords_to_flat(coords)
        red = [x % n for x, n in zip(flat, self.radices)]
        return int(np.dot(red, self._weights)) if red else 0

    # arithmetic ---------------------------------------------------------

    @property
    def identity(self) -> int:
        return 0

    def _combine(self, a, b, sign: int):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if not self.radices:
            return np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        d = (self.digits[a] + sign * self.digits[b]) % self._radix_arr
        return d @ self._weights

    def add(self, a, b):
        """Elementwise sum of index arrays (broadcasting)."""
        return self._combine(a, b, 1)

    def sub(self, a, b):
        return self._combine(a, b, -1)

    @cached_property
    def neg(self) -> np.ndarray:
        return self.sub(0, np.arange(self.order))

    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[x, y] = x - y`` as indices."""
        idx = np.arange(self.order)
        return self.sub(idx[:, None], idx[None, :])

    def format_element(self, index: int) -> str:
        return format_coords(self.element(index))

    def parse_element(self, text: str) -> int:
        return self.index(parse_coords(text))


def format_coords(coords: Coords) -> str:
    parts = []
    for c in coords:
        parts.append(format_coords(c) if isinstance(c, tuple) else str(c))
    return "(" + ",".join(parts) + ")"


def parse_coords(text: str) -> Coords:
    try:
        value = ast.literal_eval(text.strip())
    except (ValueError, SyntaxError) as exc:
        raise GroupError(f"cannot parse element {text!r}") from exc
    if isinstance(value, int):
        return (value,)
    if not isinstance(value, tuple):
        raise GroupError(f"cannot parse element {text!r}")
    return value


def make_group(cyclic_orders: Iterable[int], field_factor: FieldSpec | None = None) -> GroupSpec:
    return GroupSpec(tuple(cyclic_orders), field_factor)


# subsets ----------------------------------------------------------------


@dataclass(frozen=True)
class Subset:
    """A duplicate-free set of group elements, stored as sorted indices."""

    group: GroupSpec
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise GroupError("subset contains duplicate elements")
        for i in idx:
            if not 0 <= i < self.group.order:
                raise GroupError(f"index {i} outside group of order {self.group.order}")
        object.__setattr__(self, "indices", tuple(sorted(idx)))

    @classmethod
    def from_elements(cls, group: GroupSpec, elements: Iterable) -> Subset:
        return cls(group, tuple(group.index(e) for e in elements))

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, item) -> bool:
        return self.group.index(item) in self.indices

    @property
    def elements(self) -> list[Coords]:
        return [self.group.element(i) for i in self.indices]

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.indices, dtype=np.int64)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[list(self.indices)] = True
        return m

    def translate(self, g) -> Subset:
        g = self.group.index(g)
        return Subset(self.group, tuple(self.group.add(self.array, g).tolist()))

    def negate(self) -> Subset:
        return Subset(self.group, tuple(self.group.neg[self.array].tolist()))

    def union(self, other: Subset) -> Subset:
        _same_group(self.group, other.group)
        return Subset(self.group, tuple(set(self.indices) | set(other.indices)))

    def format(self) -> list[str]:
        return [self.group.format_element(i) for i in self.indices]


def _same_group(a: GroupSpec, b: GroupSpec) -> None:
    if a != b:
        raise GroupError(f"subsets live in different groups: {a.describe()} vs {b.describe()}")


# difference multisets ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class DifferenceMultiset:
    """Multiplicity of every group element in a multiset of differences."""

    group: GroupSpec
    counts: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        c = np.asarray(self.counts, dtype=np.int64).copy()
        if c.shape != (self.group.order,):
            raise GroupError("count vector does not match group order")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    def __getitem__(self, element) -> int:
        return int(self.counts[self.group.index(element)])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DifferenceMultiset)
            and self.group == other.group
            and np.array_equal(self.counts, other.counts)
        )

    def __add__(self, other: DifferenceMultiset) -> DifferenceMultiset:
        _same_group(self.group, other.group)
        return DifferenceMultiset(self.group, self.counts + other.counts)

    def __mul__(self, k: int) -> DifferenceMultiset:
        return DifferenceMultiset(self.group, self.counts * int(k))

    __rmul__ = __mul__

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def as_dict(self) -> dict[Coords, int]:
        """Nonzero multiplicities keyed by coordinates, in element order."""
        return {self.group.element(i): int(c) for i, c in enumerate(self.counts) if c}

    def format(self) -> dict[str, int]:
        return {self.group.format_element(i): int(c) for i, c in enumerate(self.counts) if c}


def delta_multiset(s: Subset) -> DifferenceMultiset:
    """Delta(S): all ordered differences x - y with x, y in S, diagonal included."""
    if len(s) == 0:
        raise GroupError("difference multiset of an empty subset")
    a = s.array
    diffs = s.group.sub(a[:, None], a[None, :])
    return DifferenceMultiset(s.group, np.bincount(diffs.ravel(), minlength=s.group.order))


def delta_family(family: Sequence[Subset]) -> DifferenceMultiset:
    """Multiset union of Delta(S_i) over the family."""
    if not family:
        raise GroupError("difference multiset of an empty family")
    g = family[0].group
    total = np.zeros(g.order, dtype=np.int64)
    for s in family:
        _same_group(g, s.group)
        total += delta_multiset(s).counts
    return DifferenceMultiset(g, total)


def cyclic_subgroup(group: GroupSpec, generator) -> Subset:
    """<generator>, the closure of one element under addition."""
    g = group.index(generator)
    seen = [0]
    x = g
    while x != 0:
        seen.append(x)
        x = int(group.add(x, g))
    return Subset(group, tuple(seen))


def subgroup_closure(group: GroupSpec, generators: Iterable) -> Subset:
    members = {0}
    frontier = [0]
    gens = [group.index(g) for g in generators]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = int(group.add(x, g))
            if y not in members:
                members.add(y)
                frontier.append(y)
    return Subset(group, tuple(members))


def cosets(group: GroupSpec, h: Subset) -> list[Subset]:
    """Cosets of ``h``, sorted by minimal representative."""
    _same_group(group, h.group)
    left = set(range(group.order))
    out = []
    while left:
        g = min(left)
        c = h.translate(g)
        out.append(c)
        left.difference_update(c.indices)
    return out
