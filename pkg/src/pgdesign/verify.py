"""Profiles of difference families and certification of their developments.

Two readings of the defining window sum are computed side by side and
neither is silently preferred:

``window``
    T_i(x) = sum_{y in S_i} Delta(family)(x - y), classified by x in S_i.
``blockwise``
    T(x) = sum_i sum_{y in S_i} delta_{S_i}(x - y), classified by whether x
    lies in some block.

For a single block the two coincide.

Design-level checks use exact int64 matrices; every routine asserts the
entries it multiplies stay far from overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from pgdesign.constructions import ConstructedFamily
from pgdesign.groups import DifferenceMultiset, GroupSpec, Subset, delta_family, delta_multiset

SEMANTICS = ("window", "blockwise")

VERDICTS = ("PASS", "ORDER-SWAPPED", "VALUE-MISMATCH", "NOT-PG")


class NotTacticalError(ValueError):
    pass


class PreconditionError(ValueError):
    """The design is outside the class a check is defined for."""


def _blocks_of(family) -> tuple[Subset, ...]:
    if isinstance(family, ConstructedFamily):
        return family.blocks
    return tuple(family)


# family profiles ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FamilyProfile:
    semantics: str
    sums: np.ndarray = field(repr=False)  # n x v; rows identical for blockwise
    inside: np.ndarray = field(repr=False)  # n x v bool, the in/off classification
    in_values: tuple[int, ...]
    off_values: tuple[int, ...]

    @property
    def two_valued(self) -> bool:
        return len(self.in_values) == 1 and len(self.off_values) <= 1

    @property
    def in_value(self) -> int | None:
        return self.in_values[0] if self.two_valued else None

    @property
    def off_value(self) -> int | None:
        return self.off_values[0] if self.two_valued and self.off_values else None

    @property
    def verdict(self) -> str:
        return "two_valued" if self.two_valued else "not_two_valued"

    def point_sums(self) -> np.ndarray:
        """T(x) per point (blockwise semantics only)."""
        if self.semantics != "blockwise":
            raise ValueError("window sums depend on the block")
        return self.sums[0]

    def summary(self) -> dict:
        return {
            "semantics": self.semantics,
            "verdict": self.verdict,
            "in_values": list(self.in_values),
            "off_values": list(self.off_values),
        }


def family_profile(family, semantics: str = "window") -> FamilyProfile:
    blocks = _blocks_of(family)
    if not blocks:
        raise ValueError("empty family")
    group = blocks[0].group
    sub = group.sub_table
    masks = np.array([b.mask() for b in blocks])
    if semantics == "window":
        total = delta_family(blocks).counts
        sums = np.array([total[sub[:, b.array]].sum(axis=1) for b in blocks])
        inside = masks
    elif semantics == "blockwise":
        point = np.zeros(group.order, dtype=np.int64)
        for b in blocks:
            point += delta_multiset(b).counts[sub[:, b.array]].sum(axis=1)
        sums = np.tile(point, (len(blocks), 1))
        covered = masks.any(axis=0)
        inside = np.tile(covered, (len(blocks), 1))
    else:
        raise ValueError(f"unknown semantics {semantics!r}")
    in_vals = tuple(sorted(set(sums[inside].tolist())))
    off_vals = tuple(sorted(set(sums[~inside].tolist())))
    return FamilyProfile(semantics, sums, inside, in_vals, off_vals)


@dataclass(frozen=True)
class FidelityRecord:
    construction: str
    params: dict
    semantics_used: str | None
    in_value: int | None
    off_value: int | None
    claimed: tuple[int, int]
    verdict: str
    profiles: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "construction": self.construction,
            "params": self.params,
            "semantics_used": self.semantics_used,
            "in_value": self.in_value,
            "off_value": self.off_value,
            "claimed": list(self.claimed),
            "verdict": self.verdict,
            "profiles": self.profiles,
            "notes": list(self.notes),
        }


def compare_claim(in_value: int | None, off_value: int | None, claimed: tuple[int, int]) -> str:
    if (in_value, off_value) == tuple(claimed):
        return "PASS"
    if (off_value, in_value) == tuple(claimed):
        return "ORDER-SWAPPED"
    return "VALUE-MISMATCH"


def pgds_verdict(family: ConstructedFamily, semantics: str = "both") -> FidelityRecord:
    """Profile under each requested semantics and grade the printed tuple.

    Among the two-valued profiles the one agreeing with the claim is
    reported (exact order first, then swapped); failing that the first
    two-valued one, in the order window, blockwise.
    """
    names = SEMANTICS if semantics == "both" else (semantics,)
    profiles = {s: family_profile(family, s) for s in names}
    claimed = (family.claimed.tuple_first, family.claimed.tuple_second)
    graded = [(s, compare_claim(p.in_value, p.off_value, claimed)) for s, p in profiles.items() if p.two_valued]
    notes = list(family.notes)
    if not graded:
        used, verdict, iv, ov = None, "NOT-PG", None, None
    else:
        used, verdict = min(graded, key=lambda sv: VERDICTS.index(sv[1]))
        iv, ov = profiles[used].in_value, profiles[used].off_value
        if iv is not None and ov is None:
            notes.append("no off-block pairs: every point lies in every block")
    return FidelityRecord(
        family.construction,
        dict(family.params),
        used,
        iv,
        ov,
        claimed,
        verdict,
        {s: p.summary() for s, p in profiles.items()},
        tuple(notes),
    )


@dataclass(frozen=True)
class SpectrumRecord:
    values: dict[int, int]  # delta value -> number of nonzero z attaining it

    @property
    def is_ads(self) -> bool:
        vals = sorted(self.values)
        return len(vals) == 2 and vals[1] - vals[0] == 1


def difference_spectrum(s: Subset) -> SpectrumRecord:
    """Distribution of delta_S(z) over z != 0."""
    counts = delta_multiset(s).counts[1:]
    vals, mult = np.unique(counts, return_counts=True)
    return SpectrumRecord({int(v): int(c) for v, c in zip(vals, mult)})


# designs ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Design:
    """Points 0..v-1 with printable labels, and blocks as sorted point tuples."""

    labels: tuple[str, ...]
    blocks: tuple[tuple[int, ...], ...]
    group: GroupSpec | None = None
    duplicates_collapsed: int = 0

    def __post_init__(self) -> None:
        v = len(self.labels)
        for b in self.blocks:
            if any(not 0 <= x < v for x in b):
                raise ValueError(f"block {b} references a point outside 0..{v - 1}")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable], points: Sequence | None = None) -> Design:
        """Design from blocks of arbitrary hashable point labels."""
        blocks = [list(b) for b in blocks]
        if points is None:
            points = sorted({x for b in blocks for x in b}, key=lambda x: (str(type(x)), x))
        where = {x: i for i, x in enumerate(points)}
        idx = tuple(tuple(sorted(where[x] for x in set(b))) for b in blocks)
        return cls(tuple(str(x) for x in points), idx)

    @classmethod
    def from_incidence(cls, a: np.ndarray, labels: Sequence[str] | None = None) -> Design:
        a = np.asarray(a)
        v = a.shape[0]
        blocks = tuple(tuple(np.nonzero(a[:, j])[0].tolist()) for j in range(a.shape[1]))
        return cls(tuple(labels) if labels else tuple(str(i) for i in range(v)), blocks)

    @property
    def v(self) -> int:
        return len(self.labels)

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def incidence(self) -> np.ndarray:
        a = np.zeros((self.v, self.b), dtype=np.int64)
        for j, blk in enumerate(self.blocks):
            a[list(blk), j] = 1
        return a

    def block_sizes(self) -> np.ndarray:
        return np.array([len(b) for b in self.blocks], dtype=np.int64)

    def replication(self) -> np.ndarray:
        r = np.zeros(self.v, dtype=np.int64)
        for blk in self.blocks:
            r[list(blk)] += 1
        return r

    def pair_indices(self) -> np.ndarray:
        """r_uw for u != w by enumerating the pairs inside each block; zero diagonal."""
        r = np.zeros((self.v, self.v), dtype=np.int64)
        for blk in self.blocks:
            arr = np.array(blk, dtype=np.int64)
            r[np.ix_(arr, arr)] += 1
        np.fill_diagonal(r, 0)
        return r

    def remove_block(self, j: int) -> Design:
        return Design(self.labels, self.blocks[:j] + self.blocks[j + 1 :], self.group)

    def flip(self, point: int, block: int) -> Design:
        """The same design with a single incidence toggled."""
        blk = set(self.blocks[block])
        blk.symmetric_difference_update({point})
        blocks = list(self.blocks)
        blocks[block] = tuple(sorted(blk))
        return Design(self.labels, tuple(blocks), self.group)


def develop(family, multiset: bool = False) -> Design:
    """Dev(family): all translates S_i + g.

    With ``multiset=False`` coincident translates are kept once; the number
    dropped is recorded in ``duplicates_collapsed``.
    """
    blocks = _blocks_of(family)
    group = blocks[0].group
    g_all = np.arange(group.order)
    translates = []
    for s in blocks:
        shifted = group.add(s.array[None, :], g_all[:, None])
        translates.extend(tuple(sorted(row)) for row in shifted.tolist())
    total = len(translates)
    if not multiset:
        translates = list(set(translates))
    translates.sort()
    labels = tuple(group.format_element(i) for i in range(group.order))
    return Design(labels, tuple(translates), group, total - len(translates))


def check_tactical(design: Design) -> tuple[int, int]:
    """Return (k, r) or raise naming the first offending block or point."""
    if design.b == 0:
        raise NotTacticalError("design has no blocks")
    sizes = design.block_sizes()
    bad = np.nonzero(sizes != sizes[0])[0]
    if bad.size:
        j = int(bad[0])
        raise NotTacticalError(f"block {j} has size {sizes[j]}, block 0 has size {sizes[0]}")
    reps = design.replication()
    bad = np.nonzero(reps != reps[0])[0]
    if bad.size:
        u = int(bad[0])
        raise NotTacticalError(
            f"point {design.labels[u]} has replication {reps[u]}, point {design.labels[0]} has {reps[0]}"
        )
    return int(sizes[0]), int(reps[0])


@dataclass(frozen=True, eq=False)
class PGReport:
    """Outcome of a partial geometric test.

    ``alpha_prime`` is s(u, b) on flags and ``beta_prime`` on anti-flags.  The
    matrix form AA^T A = n' A + c J has c = beta_prime and
    n' = r + k - 1 + alpha_prime - beta_prime.
    """

    method: str
    v: int
    b: int
    k: int
    r: int
    flag_values: tuple[int, ...]
    antiflag_values: tuple[int, ...]
    partial_geometric: bool
    alpha_prime: int | None = None
    beta_prime: int | None = None
    n_prime: int | None = None
    j_coefficient: int | None = None
    residual: np.ndarray | None = field(default=None, repr=False)

    @property
    def is_tactical(self) -> bool:
        return True

    def residual_max(self) -> int | None:
        return None if self.residual is None else int(np.abs(self.residual).max(initial=0))

    def same_verdict(self, other: PGReport) -> bool:
        return (self.partial_geometric, self.alpha_prime, self.beta_prime) == (
            other.partial_geometric,
            other.alpha_prime,
            other.beta_prime,
        )

    def summary(self) -> dict:
        return {
            "method": self.method,
            "v": self.v,
            "b": self.b,
            "k": self.k,
            "r": self.r,
            "partial_geometric": self.partial_geometric,
            "alpha_prime": self.alpha_prime,
            "beta_prime": self.beta_prime,
            "n_prime": self.n_prime,
            "flag_values": list(self.flag_values),
            "antiflag_values": list(self.antiflag_values),
            "residual_max": self.residual_max(),
        }


def _pg_fields(k: int, r: int, flag_vals, anti_vals) -> dict:
    ok = len(flag_vals) == 1 and len(anti_vals) <= 1
    out: dict = {"partial_geometric": ok}
    if ok:
        alpha = flag_vals[0]
        beta = anti_vals[0] if anti_vals else None
        out.update(alpha_prime=alpha, beta_prime=beta)
        if beta is not None:
            out.update(n_prime=r + k - 1 + alpha - beta, j_coefficient=beta)
    return out


def s_counts(design: Design) -> PGReport:
    """s(u, b) by counting flags, via pair indices enumerated block by block."""
    k, r = check_tactical(design)
    idx = design.pair_indices()
    a = design.incidence
    s = np.empty((design.v, design.b), dtype=np.int64)
    for j, blk in enumerate(design.blocks):
        s[:, j] = idx[:, list(blk)].sum(axis=1)
    # u in b: the w = u term is zero and each w contributes r_uw - 1
    s -= (k - 1) * a
    flag_vals = tuple(sorted(set(s[a == 1].tolist())))
    anti_vals = tuple(sorted(set(s[a == 0].tolist())))
    return PGReport("direct", design.v, design.b, k, r, flag_vals, anti_vals, **_pg_fields(k, r, flag_vals, anti_vals))


def pg_check_matrix(design: Design) -> PGReport:
    """Test AJ = rJ, JA = kJ and AA^T A = n'A + cJ with exact integers."""
    k, r = check_tactical(design)
    a = design.incidence
    if not (np.all(a.sum(axis=1) == r) and np.all(a.sum(axis=0) == k)):
        raise NotTacticalError("row or column sums of the incidence matrix are not constant")
    assert design.v * r * k < 2**62
    t = a @ a.T @ a
    inc, non = a == 1, a == 0
    flag_vals = tuple(sorted(set((t[inc] - (r + k - 1)).tolist())))
    anti_vals = tuple(sorted(set(t[non].tolist())))
    # solve n', c from the first entry of each class, then test globally
    c = int(t[non][0]) if non.any() else 0
    n_prime = int(t[inc][0]) - c
    residual = t - n_prime * a - c
    ok = not residual.any()
    fields: dict = {"partial_geometric": ok}
    if ok:
        fields.update(
            alpha_prime=n_prime + c - r - k + 1,
            beta_prime=c if non.any() else None,
            n_prime=n_prime if non.any() else None,
            j_coefficient=c if non.any() else None,
        )
    return PGReport("matrix", design.v, design.b, k, r, flag_vals, anti_vals, residual=residual, **fields)


# two-index designs --------------------------------------------------------


@dataclass(frozen=True)
class IndexProfile:
    values: tuple[int, ...]

    @property
    def two_index(self) -> bool:
        return len(self.values) == 2

    @property
    def mu1(self) -> int | None:
        return self.values[1] if self.two_index else None

    @property
    def mu2(self) -> int | None:
        return self.values[0] if self.two_index else None

    @property
    def adesign(self) -> bool:
        return self.two_index and self.values[1] - self.values[0] == 1


def index_profile(design: Design) -> IndexProfile:
    """The set of pair indices r_xy over distinct points."""
    check_tactical(design)
    idx = design.pair_indices()
    off = ~np.eye(design.v, dtype=bool)
    return IndexProfile(tuple(sorted(set(idx[off].tolist()))))


@dataclass(frozen=True, eq=False)
class SRGParams:
    """Parameters read off a symmetric 0/1 matrix, with the residual of the SRG identity."""

    v: int
    k: int | None
    lam: int | None
    mu: int | None
    residual: np.ndarray | None = field(default=None, repr=False)

    @property
    def certified(self) -> bool:
        return self.residual is not None and not self.residual.any()


def srg_parameters(adj: np.ndarray) -> SRGParams:
    """Read (k, lambda, mu) from A and A^2 and test A^2 = kI + lambda A + mu (J - I - A)."""
    adj = np.asarray(adj, dtype=np.int64)
    v = adj.shape[0]
    if v == 0 or not np.array_equal(adj, adj.T) or adj.diagonal().any():
        return SRGParams(v, None, None, None)
    deg = adj.sum(axis=1)
    if np.any(deg != deg[0]):
        return SRGParams(v, None, None, None)
    k = int(deg[0])
    sq = adj @ adj
    eye = np.eye(v, dtype=np.int64)
    edge = adj == 1
    non = (adj == 0) & (eye == 0)
    lam = int(sq[edge][0]) if edge.any() else 0
    mu = int(sq[non][0]) if non.any() else 0
    residual = sq - (k * eye + lam * adj + mu * (1 - eye - adj))
    return SRGParams(v, k, lam, mu, residual)


@dataclass(frozen=True, eq=False)
class TwoIndexReport:
    """A_1 for a two-index design.

    ``srg`` is read directly from A_1.  When the per-flag counts nu, zeta are
    constant the design is in the special class and the derived quantities
    sigma .. b are filled in and compared with ``srg``.
    """

    mu1: int
    mu2: int
    k: int
    r: int
    v: int
    partial_geometric: bool
    in_special_class: bool
    nu_values: tuple[int, ...]
    zeta_values: tuple[int, ...]
    a1: np.ndarray = field(repr=False)
    srg: SRGParams = field(repr=False)
    nu: int | None = None
    zeta: int | None = None
    sigma: int | None = None
    phi: int | None = None
    psi: int | None = None
    kappa: Fraction | None = None
    epsilon: Fraction | None = None
    k_prime: Fraction | None = None
    a: Fraction | None = None
    b: Fraction | None = None
    k_prime_printed: Fraction | None = None
    closed_forms_hold: bool | None = None
    printed_closed_forms_hold: bool | None = None

    @property
    def adesign(self) -> bool:
        return self.mu1 - self.mu2 == 1

    @property
    def degree_formula(self) -> Fraction:
        """((k-1) r + mu2 (1 - v)) / (mu1 - mu2)."""
        return Fraction((self.k - 1) * self.r + self.mu2 * (1 - self.v), self.mu1 - self.mu2)

    @property
    def srg_certified(self) -> bool:
        return self.srg.certified

    @property
    def formulas_agree(self) -> bool | None:
        """Whether sigma..b reproduce the directly read parameters (None outside the class)."""
        if not self.in_special_class or self.k_prime is None:
            return None
        return (self.k_prime, self.a, self.b, self.kappa) == (self.srg.k, self.srg.lam, self.srg.mu, self.srg.k)

    def summary(self) -> dict:
        def num(x):
            if x is None:
                return None
            return int(x) if isinstance(x, Fraction) and x.denominator == 1 else str(x)

        return {
            "mu1": self.mu1,
            "mu2": self.mu2,
            "adesign": self.adesign,
            "partial_geometric": self.partial_geometric,
            "in_special_class": self.in_special_class,
            "nu_values": list(self.nu_values),
            "zeta_values": list(self.zeta_values),
            "sigma": self.sigma,
            "phi": self.phi,
            "psi": self.psi,
            "kappa": num(self.kappa),
            "epsilon": num(self.epsilon),
            "derived": {"k": num(self.k_prime), "lambda": num(self.a), "mu": num(self.b)},
            "k_prime_printed": num(self.k_prime_printed),
            "srg": {"v": self.srg.v, "k": self.srg.k, "lambda": self.srg.lam, "mu": self.srg.mu},
            "srg_certified": self.srg_certified,
            "degree_formula": num(self.degree_formula),
            "formulas_agree": self.formulas_agree,
            "closed_forms_hold": self.closed_forms_hold,
            "printed_closed_forms_hold": self.printed_closed_forms_hold,
        }


def a1_srg_check(design: Design) -> TwoIndexReport:
    """A_1 of a two-index tactical configuration: SRG certificate plus the flag-count test.

    Raises PreconditionError unless there are exactly two pair indices.
    """
    k, r = check_tactical(design)
    prof = index_profile(design)
    if not prof.two_index:
        raise PreconditionError(f"design has pair indices {list(prof.values)}, not exactly two")
    mu1, mu2 = prof.mu1, prof.mu2
    v = design.v
    idx = design.pair_indices()
    a1 = (idx == mu1).astype(np.int64)
    np.fill_diagonal(a1, 0)
    srg = srg_parameters(a1)
    pg = pg_check_matrix(design)
    a = design.incidence
    counts = a1 @ a  # |{y in b : y != x, r_xy = mu1}|
    nu_vals = tuple(sorted(set(counts[a == 1].tolist())))
    zeta_vals = tuple(sorted(set(counts[a == 0].tolist())))
    base = dict(mu1=mu1, mu2=mu2, k=k, r=r, v=v, partial_geometric=pg.partial_geometric,
                nu_values=nu_vals, zeta_values=zeta_vals, a1=a1, srg=srg)
    if len(nu_vals) != 1 or len(zeta_vals) > 1 or not pg.partial_geometric:
        return TwoIndexReport(in_special_class=False, **base)
    nu = nu_vals[0]
    zeta = zeta_vals[0] if zeta_vals else 0
    n_prime = pg.n_prime if pg.n_prime is not None else 0
    c = pg.j_coefficient if pg.j_coefficient is not None else 0
    sigma, phi, psi = r - mu2, mu1 - mu2, nu - zeta
    kappa = Fraction((k - 1) * r + mu2 * (1 - v), phi)
    eps = zeta * r - mu2 * (kappa - psi)
    # A_1 A A^T expanded two ways: A_1^2 = (psi sigma/phi) I + (psi - sigma/phi) A_1 + (eps/phi) J
    return TwoIndexReport(
        in_special_class=True,
        nu=nu, zeta=zeta, sigma=sigma, phi=phi, psi=psi, kappa=kappa, epsilon=eps,
        k_prime=(eps + psi * sigma) / phi,
        a=(eps + psi * phi - sigma) / phi,
        b=eps / phi,
        k_prime_printed=(eps - psi * sigma) / phi,
        closed_forms_hold=phi * psi == n_prime - sigma and phi * zeta == c - mu2 * k,
        printed_closed_forms_hold=nu == n_prime + c - r + mu2 and zeta == c - mu2 * k,
        **base,
    )
