"""Candidate partial geometric difference sets and families.

Every constructor returns a :class:`ConstructedFamily` that carries the
parameter tuple printed for it as a *claim*.  Nothing here decides whether a
claim is true; that is the job of :mod:`pgdesign.verify`.

Construction ids (used by the CLI and in JSON documents):

=======  ==========================================================  ===========================
id       block(s)                                                    group
=======  ==========================================================  ===========================
th30     Sigma_0 x S_i  ∪  Sigma_1 x S_j                             Z_m x F_{p^2}
th31     {0,3} x S_i  ∪  {1,4} x S_j                                 Z_6 x F_{p^2}
th32     {(x^s, x) : x in F_{p^m}}  (graph of a planar power map)    F_{p^m} x F_{p^m}
th33     {0}x(H ∪ H+1) ∪ {1}x(H ∪ H+3), or the swapped variant       Z_2 x Z_{4l}
th41     (pl - 1){0, ..., p^(u-1) - 1} for l = 1..p^(u-1)             Z_{p^u}
th40     one th30 block per pair of a perfect matching of I          Z_m x F_{p^2}
cor40    one th30 block per pair of the cyclic chain through I       Z_m x F_{p^2}
cor41    th31 blocks for a matching (theta0) or chain (theta1)       Z_6 x F_{p^2}
th42     H ∪ (H + g_i) for coset representatives g_i                 any odd-order abelian group
=======  ==========================================================  ===========================

Here S_i = C_i ∪ {0} for the cyclotomic classes C_i of order p + 1 in
F_{p^2}, and Sigma_l = l + {0, 2, ..., m - 2} in Z_m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Callable, Sequence

import numpy as np

from pgdesign.galois import FieldSpec, build_field, cyclotomic_classes, is_prime
from pgdesign.groups import GroupError, GroupSpec, Subset, cyclic_subgroup, make_group


class ConstructionError(ValueError):
    """Parameters outside a construction's stated constraints."""


@dataclass(frozen=True)
class ClaimedProfile:
    """The printed tuple (v, k, n; first, second).

    ``first`` and ``second`` are kept in printed order; which of them is the
    in-set value is not assumed anywhere.
    """

    v: int
    k: int
    n: int
    tuple_first: int
    tuple_second: int
    source: str

    def as_dict(self) -> dict:
        return {
            "v": self.v,
            "k": self.k,
            "n": self.n,
            "tuple": [self.tuple_first, self.tuple_second],
            "source": self.source,
        }


@dataclass(frozen=True)
class ConstructedFamily:
    group: GroupSpec
    blocks: tuple[Subset, ...]
    claimed: ClaimedProfile
    construction: str
    params: dict[str, Any]
    notes: tuple[str, ...] = ()

    @property
    def k(self) -> int:
        return len(self.blocks[0])

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def has_duplicate_blocks(self) -> bool:
        return len({b.indices for b in self.blocks}) != len(self.blocks)


@dataclass(frozen=True, eq=False)
class PlanarFunction:
    """x -> x^s on F_{p^m} together with its certified perfect nonlinearity."""

    field: FieldSpec
    exponent: int
    values: np.ndarray = field(repr=False)  # values[x] = x^s
    exponent_case: str | None

    def preimage(self, b: int) -> list[int]:
        return np.nonzero(self.values == b)[0].tolist()


def _exact(x: Fraction) -> int:
    if x.denominator != 1:
        raise ConstructionError(f"printed parameter evaluates to non-integer {x}")
    return int(x)


# claimed parameter tuples ------------------------------------------------


def _require(cond: bool, constraint: str) -> None:
    if not cond:
        raise ConstructionError(f"constraint violated: {constraint}")


def _odd_prime(p: int, constraint: str = "p an odd prime") -> None:
    _require(is_prime(p) and p % 2 == 1, constraint)


def claimed_profile(construction: str, params: dict[str, Any]) -> ClaimedProfile:
    """Evaluate the printed parameter formula for a construction exactly as typeset."""
    c = construction
    if c == "th30":
        m, p = params["m"], params["p"]
        _require(m > 0 and m % 2 == 0, "m even")
        _odd_prime(p, "m even, p an odd prime")
        h = Fraction(m, 2)
        return ClaimedProfile(m * p * p, m * p, 1, _exact(h * h * p * (p + 3)), _exact(Fraction(3, 4) * m * m * p),
                              "th30: (mp^2, mp; (m/2)^2 p(p+3), (3/4) m^2 p)")
    if c == "th31":
        p = params["p"]
        _odd_prime(p)
        return ClaimedProfile(6 * p * p, 4 * p, 1, 20 * p, 8 * p, "th31: (6p^2, 4p; 20p, 8p)")
    if c == "th32":
        p, m = params["p"], params["m"]
        _odd_prime(p)
        _require(m >= 1, "m >= 1")
        n = p**m
        return ClaimedProfile(n * n, n, 1, 2 * n - 1, n - 1, "th32: (n^2, n; 2n-1, n-1), n = p^m")
    if c == "th33":
        l = params["l"]
        _require(l >= 1, "n = 4l for positive integer l")
        return ClaimedProfile(8 * l, 4 * l, 1, 6 * l * l, 10 * l * l, "th33: (8l, 4l; 6l^2, 10l^2)")
    if c == "th41":
        p, u = params["p"], params["u"]
        _odd_prime(p, "p an odd prime, u >= 2 an integer")
        _require(u >= 2, "p an odd prime, u >= 2 an integer")
        a = (p ** (u - 1) - 1) * p ** (u - 1) * p ** (u - 2)
        return ClaimedProfile(p**u, p ** (u - 1), p ** (u - 1), a, p**u + a,
                              "th41: (p^u, p^(u-1), p^(u-1); (p^(u-1)-1)p^(u-1)p^(u-2), p^u + (p^(u-1)-1)p^(u-1)p^(u-2))")
    if c in ("th40", "cor40"):
        m, p, kappa = params["m"], params["p"], params["kappa"]
        _require(m > 0 and m % 2 == 0, "m even")
        _odd_prime(p, "m even, p an odd prime")
        _require(1 <= kappa <= (p + 1) // 2, "1 <= kappa <= (p+1)/2")
        h = Fraction(m, 2)
        base = h * h * p * (p + 3)
        three_q = Fraction(3, 4) * m * m * p
        if c == "th40":
            return ClaimedProfile(m * p * p, m * p, kappa, _exact(base + (kappa - 1) * three_q), _exact(kappa * three_q),
                                  "th40: (mp^2, mp, kappa; (m/2)^2 p(p+3) + (kappa-1)(3/4)m^2 p, kappa (3/4) m^2 p)")
        return ClaimedProfile(m * p * p, m * p, kappa, _exact(base + (2 * kappa - 1) * three_q),
                              _exact(kappa * Fraction(3, 2) * m * m * p),
                              "cor40: (mp^2, mp, kappa; (m/2)^2 p(p+3) + (2kappa-1)(3/4)m^2 p, kappa (3/2) m^2 p)")
    if c == "cor41":
        p, kappa, pattern = params["p"], params["kappa"], params["pattern"]
        _odd_prime(p)
        _require(1 <= kappa <= (p + 1) // 2, "1 <= kappa <= (p+1)/2")
        if pattern == "theta0":
            return ClaimedProfile(6 * p * p, 4 * p, kappa, 20 * p + 8 * (kappa - 1) * p, 8 * kappa * p,
                                  "cor41/theta0: (6p^2, 4p, kappa; 20p + 8(kappa-1)p, 8 kappa p)")
        return ClaimedProfile(6 * p * p, 4 * p, 2 * kappa, 20 * p + 8 * (2 * kappa - 1) * p, 16 * kappa * p,
                              "cor41/theta1: (6p^2, 4p, 2kappa; 20p + 8(2kappa-1)p, 16 kappa p)")
    if c == "th42":
        n, m = params["n"], params["m"]
        _require(n % 2 == 1 and not is_prime(n) and n > 1, "G abelian of odd, composite order n")
        _require(1 < m < n and n % m == 0, "H proper, nontrivial, m | n")
        kappa = (n // m - 1) // 2
        return ClaimedProfile(n, 2 * m, kappa, n + m * (m - 1), 2 * m * m, "th42: (n, 2m, kappa; n + m(m-1), 2m^2)")
    raise ConstructionError(f"unknown construction id {construction!r}")


# shared pieces -----------------------------------------------------------


def line_subgroups(p: int) -> tuple[FieldSpec, list[Subset]]:
    """F_{p^2} and S_i = C_i ∪ {0} for the classes of order p + 1."""
    f = build_field(p, 2)
    table = cyclotomic_classes(f, p + 1)
    return f, [Subset(f.additive_group, c.indices + (0,)) for c in table.classes]


def _product_block(group: GroupSpec, pieces: Sequence[tuple[Sequence[int], Subset]]) -> Subset:
    """Union of {h} x S over (hs, S) pairs in Z_m x F."""
    q = group.field_factor.order
    idx = [h * q + z for hs, s in pieces for h in hs for z in s.indices]
    return Subset(group, tuple(idx))


def _check_pair(p: int, i: int, j: int) -> None:
    _require(0 <= i <= p and 0 <= j <= p, "i', j' in {0, 1, ..., p}")
    _require(i != j, "i' != j'")


def _sigma_block(group: GroupSpec, m: int, s_i: Subset, s_j: Subset) -> Subset:
    return _product_block(group, [(range(0, m, 2), s_i), (range(1, m, 2), s_j)])


def _z6_block(group: GroupSpec, s_i: Subset, s_j: Subset) -> Subset:
    return _product_block(group, [((0, 3), s_i), ((1, 4), s_j)])


# single sets -------------------------------------------------------------


def sigma_product_set(m: int, p: int, i: int, j: int) -> ConstructedFamily:
    params = {"m": m, "p": p, "i": i, "j": j}
    claimed = claimed_profile("th30", params)
    _check_pair(p, i, j)
    f, lines = line_subgroups(p)
    group = make_group([m], f)
    block = _sigma_block(group, m, lines[i], lines[j])
    return ConstructedFamily(group, (block,), claimed, "th30", params)


def z6_product_set(p: int, i: int, j: int) -> ConstructedFamily:
    params = {"p": p, "i": i, "j": j}
    claimed = claimed_profile("th31", params)
    _check_pair(p, i, j)
    f, lines = line_subgroups(p)
    group = make_group([6], f)
    return ConstructedFamily(group, (_z6_block(group, lines[i], lines[j]),), claimed, "th31", params)


def planar_exponent_case(p: int, m: int, s: int) -> str | None:
    """Which listed family of planar power exponents s belongs to, if any."""
    if s == 2:
        return "s = 2"
    for k in range(1, 4 * m + 1):
        if s == p**k + 1 and (m // gcd(m, k)) % 2 == 1:
            return f"s = p^{k} + 1, m/gcd(m,k) odd"
        if p == 3 and k % 2 == 1 and gcd(m, k) == 1 and s == (3**k + 1) // 2:
            return f"s = (3^{k} + 1)/2, k odd, gcd(m,k) = 1"
    return None


class NotPlanarError(ConstructionError):
    def __init__(self, s: int, a: str, b: str, count: int):
        super().__init__(f"x^{s} is not perfectly nonlinear: f(x+a) - f(x) = b has {count} solutions for a={a}, b={b}")
        self.witness = (a, b)


def planar_function(p: int, m: int, s: int) -> PlanarFunction:
    """Certify x^s on F_{p^m}: every x -> f(x+a) - f(x), a != 0, must be a bijection."""
    f = build_field(p, m)
    q = f.order
    xs = np.arange(q)
    values = f.power(xs, s)
    for a in range(1, q):
        diff = f.sub(values[f.add(xs, a)], values)
        counts = np.bincount(diff, minlength=q)
        if counts.max() > 1:
            b = int(np.argmax(counts))
            g = f.additive_group
            raise NotPlanarError(s, g.format_element(a), g.format_element(b), int(counts[b]))
    values.setflags(write=False)
    return PlanarFunction(f, s, values, planar_exponent_case(p, m, s))


def planar_set(p: int, m: int, s: int) -> ConstructedFamily:
    """C = {(f(x), x)} in F_{p^m} x F_{p^m}, written as Z_p^{2m}."""
    params = {"p": p, "m": m, "s": s}
    claimed = claimed_profile("th32", params)
    pf = planar_function(p, m, s)
    q = pf.field.order
    group = make_group([p] * (2 * m))
    # first m digits carry f(x), last m carry x; both use the field's index encoding
    block = Subset(group, tuple(int(pf.values[x]) * q + x for x in range(q)))
    notes = () if pf.exponent_case else (f"x^{s} is perfectly nonlinear but outside the listed exponent families",)
    return ConstructedFamily(group, (block,), claimed, "th32", params, notes)


def mod4_pair_set(l: int, variant: str = "A") -> ConstructedFamily:
    params = {"l": l, "variant": variant}
    claimed = claimed_profile("th33", params)
    _require(variant in ("A", "B"), "variant in {A, B}")
    n = 4 * l
    group = make_group([2, n])
    h = [x for x in range(n) if x % 4 == 0]
    low = h + [x + 1 for x in h]
    high = h + [x + 3 for x in h]
    top, bottom = (0, 1) if variant == "A" else (1, 0)
    pts = [(top, x) for x in low] + [(bottom, x) for x in high]
    return ConstructedFamily(group, (Subset.from_elements(group, pts),), claimed, "th33", params)


# families ----------------------------------------------------------------


def multiplier_family(p: int, u: int) -> ConstructedFamily:
    """S_l = (pl - 1) S mod p^u, S = {0, ..., p^(u-1) - 1}, for l = 1..p^(u-1)."""
    params = {"p": p, "u": u}
    claimed = claimed_profile("th41", params)
    n = p**u
    k = p ** (u - 1)
    group = make_group([n])
    blocks = tuple(Subset(group, tuple(((p * l - 1) * s) % n for s in range(k))) for l in range(1, k + 1))
    fam = ConstructedFamily(group, blocks, claimed, "th41", params)
    if fam.has_duplicate_blocks:
        fam = ConstructedFamily(group, blocks, claimed, "th41", params, ("family contains repeated blocks",))
    return fam


def theta_pairs(index_set: Sequence[int], pattern: str, pairs: Sequence[tuple[int, int]] | None = None) -> list[tuple[int, int]]:
    """Ordered pairs over I: a perfect matching (theta0) or the cyclic chain (theta1)."""
    index_set = list(index_set)
    _require(len(index_set) > 0 and len(index_set) % 2 == 0, "|I| = 2 kappa for a positive integer kappa")
    _require(len(set(index_set)) == len(index_set), "I is a set")
    if pattern == "theta0":
        if pairs is None:
            pairs = [(index_set[t], index_set[t + 1]) for t in range(0, len(index_set), 2)]
        pairs = [tuple(pr) for pr in pairs]
        used = [x for pr in pairs for x in pr]
        _require(all(i != j for i, j in pairs), "pairs (i, j) with i != j")
        _require(sorted(used) == sorted(index_set), "each member of I appears in exactly one ordered pair")
        return pairs
    if pattern == "theta1":
        _require(pairs is None, "theta1 is determined by the order of I")
        chain = [(index_set[-1], index_set[0])]
        chain += [(index_set[t], index_set[t + 1]) for t in range(len(index_set) - 1)]
        return chain
    raise ConstructionError(f"unknown pattern {pattern!r}")


def theta_family(base: str, p: int, index_set: Sequence[int], pattern: str, m: int | None = None,
                 pairs: Sequence[tuple[int, int]] | None = None) -> ConstructedFamily:
    """One product block per ordered pair of the pattern over I."""
    index_set = [int(i) for i in index_set]
    kappa = len(index_set) // 2
    if base == "sigma":
        cid = "th40" if pattern == "theta0" else "cor40"
        params: dict[str, Any] = {"m": m, "p": p, "I": index_set}
        claimed = claimed_profile(cid, {**params, "kappa": kappa})
    elif base == "z6":
        cid = "cor41"
        params = {"p": p, "I": index_set, "pattern": pattern}
        claimed = claimed_profile(cid, {**params, "kappa": kappa})
    else:
        raise ConstructionError(f"unknown base {base!r}")
    _require(all(0 <= i <= p for i in index_set), "I ⊆ {0, 1, ..., p}")
    ordered = theta_pairs(index_set, pattern, pairs)
    if pattern == "theta0":
        params["pairs"] = [list(pr) for pr in ordered]
    f, lines = line_subgroups(p)
    if base == "sigma":
        group = make_group([m], f)
        blocks = tuple(_sigma_block(group, m, lines[i], lines[j]) for i, j in ordered)
    else:
        group = make_group([6], f)
        blocks = tuple(_z6_block(group, lines[i], lines[j]) for i, j in ordered)
    notes = []
    if claimed.n != len(blocks):
        notes.append(f"printed family size {claimed.n} but the pattern yields {len(blocks)} blocks")
    if len({b.indices for b in blocks}) != len(blocks):
        notes.append("family contains repeated blocks")
    return ConstructedFamily(group, blocks, claimed, cid, params, tuple(notes))


def coset_pair_family(group: GroupSpec, h_gen, reps: Sequence) -> ConstructedFamily:
    """H ∪ (H + g_i) where {H ± g_i} must partition G minus H."""
    h = cyclic_subgroup(group, h_gen)
    n, m = group.order, len(h)
    params = {
        "orders": list(group.cyclic_orders),
        "h_gen": group.format_element(group.index(h_gen)),
        "reps": [group.format_element(group.index(g)) for g in reps],
    }
    _require(group.field_factor is None, "G a product of cyclic groups")
    claimed = claimed_profile("th42", {"n": n, "m": m})
    kappa = (n // m - 1) // 2
    _require(len(reps) == kappa, f"kappa = (n/m - 1)/2 = {kappa} representatives")
    seen = set(h.indices)
    for g in reps:
        for c in (h.translate(g), h.translate(group.neg[group.index(g)])):
            if seen & set(c.indices):
                raise ConstructionError(
                    f"constraint violated: {{H ± g_i}} is a partition of G minus H (coset {c.format()} overlaps)"
                )
            seen.update(c.indices)
    blocks = tuple(h.union(h.translate(g)) for g in reps)
    return ConstructedFamily(group, blocks, claimed, "th42", params)


# registry ----------------------------------------------------------------


def _parse_group_elements(group: GroupSpec, values: Sequence) -> list[int]:
    out = []
    for v in values:
        if isinstance(v, str):
            out.append(group.parse_element(v))
        elif isinstance(v, int) and len(group.radices) == 1:
            out.append(group.reduce((v,)))
        else:
            out.append(group.index(v))
    return out


def _build_th42(orders, h_gen, reps) -> ConstructedFamily:
    try:
        group = make_group(orders)
        (hg,) = _parse_group_elements(group, [h_gen])
        rs = _parse_group_elements(group, reps)
    except GroupError as exc:
        raise ConstructionError(str(exc)) from exc
    return coset_pair_family(group, hg, rs)


BUILDERS: dict[str, Callable[..., ConstructedFamily]] = {
    "th30": lambda m, p, i, j: sigma_product_set(m, p, i, j),
    "th31": lambda p, i, j: z6_product_set(p, i, j),
    "th32": lambda p, m, s: planar_set(p, m, s),
    "th33": lambda l, variant="A": mod4_pair_set(l, variant),
    "th41": lambda p, u: multiplier_family(p, u),
    "th40": lambda m, p, I, pairs=None: theta_family("sigma", p, I, "theta0", m=m, pairs=pairs),
    "cor40": lambda m, p, I: theta_family("sigma", p, I, "theta1", m=m),
    "cor41": lambda p, I, pattern="theta0", pairs=None: theta_family("z6", p, I, pattern, pairs=pairs),
    "th42": _build_th42,
}


def construct(construction: str, **params) -> ConstructedFamily:
    """Build a construction from its id and JSON-style parameters."""
    try:
        builder = BUILDERS[construction]
    except KeyError:
        raise ConstructionError(f"unknown construction id {construction!r}") from None
    try:
        return builder(**params)
    except TypeError as exc:
        raise ConstructionError(f"bad parameters for {construction}: {exc}") from exc
