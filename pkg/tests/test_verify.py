import numpy as np
import pytest

from oracles import blockwise_map, flag_counts, product_group, window_profile
from pgdesign.constructions import construct, planar_set
from pgdesign.galois import build_field, cyclotomic_classes
from pgdesign.groups import Subset, cyclic_subgroup, make_group
from pgdesign.verify import (
    Design,
    NotTacticalError,
    PreconditionError,
    a1_srg_check,
    compare_claim,
    develop,
    difference_spectrum,
    family_profile,
    index_profile,
    pg_check_matrix,
    pgds_verdict,
    s_counts,
    srg_parameters,
)

SMALL = {
    "th30": dict(m=2, p=3, i=0, j=1),
    "th31": dict(p=3, i=0, j=1),
    "th32": dict(p=3, m=1, s=2),
    "th33": dict(l=1),
    "th41": dict(p=3, u=2),
    "th40": dict(m=2, p=3, I=[0, 1, 2, 3]),
    "cor40": dict(m=2, p=3, I=[0, 1]),
    "cor41": dict(p=3, I=[0, 1, 2, 3]),
    "th42": dict(orders=[15], h_gen="(5)", reps=["(1)", "(2)"]),
}


def _subgroup_family():
    g = make_group([15])
    return [cyclic_subgroup(g, (5,))]


@pytest.mark.parametrize("semantics", ["window", "blockwise"])
def test_subgroup_profile(semantics):
    prof = family_profile(_subgroup_family(), semantics)
    assert (prof.in_value, prof.off_value) == (9, 0)


@pytest.mark.parametrize("semantics", ["window", "blockwise"])
def test_mod4_profile(semantics):
    prof = family_profile(construct("th33", l=1), semantics)
    assert (prof.in_value, prof.off_value) == (10, 6)


def test_multiplier_family_both_readings():
    fam = construct("th41", p=3, u=2)
    win = family_profile(fam, "window")
    assert (win.in_value, win.off_value) == (15, 6)
    bw = family_profile(fam, "blockwise")
    assert not bw.two_valued
    elems, _, sub = product_group([9])
    want = blockwise_map(elems, [{(x,) for x in b.indices} for b in fam.blocks], sub)
    assert bw.point_sums().tolist() == [want[(x,)] for x in range(9)]
    # 0 -> 18, the other covered points -> 9, uncovered 3 -> 0 but uncovered 6 -> 9
    assert bw.point_sums().tolist() == [18, 9, 9, 0, 9, 9, 9, 9, 9]


def test_point_sums_only_for_blockwise():
    with pytest.raises(ValueError):
        family_profile(construct("th33", l=1), "window").point_sums()


def test_unknown_semantics():
    with pytest.raises(ValueError):
        family_profile(construct("th33", l=1), "sideways")


@pytest.mark.parametrize(
    "cid, params, window",
    [
        ("th41", dict(p=3, u=3), (297, 216)),
        ("th41", dict(p=5, u=2), (45, 20)),
        ("th31", dict(p=5, i=0, j=1), (140, 40)),
        ("th42", SMALL["th42"], (45, 18)),
        ("th40", dict(m=2, p=5, I=[0, 1, 2, 3]), (60, 35)),
        ("cor40", dict(m=2, p=3, I=[0, 1, 2, 3]), (60, 42)),
    ],
)
def test_frozen_window_values(cid, params, window):
    prof = family_profile(construct(cid, **params), "window")
    assert (prof.in_value, prof.off_value) == window


def test_window_matches_oracle_on_coset_pairs():
    fam = construct("th42", **SMALL["th42"])
    elems, _, sub = product_group([15])
    blocks = [{(x,) for x in b.indices} for b in fam.blocks]
    ins, offs = window_profile(elems, blocks, sub)
    prof = family_profile(fam, "window")
    assert (set(prof.in_values), set(prof.off_values)) == (ins, offs)


@pytest.mark.parametrize(
    "cid, params, verdict",
    [
        ("th32", SMALL["th32"], "PASS"),
        ("th33", SMALL["th33"], "ORDER-SWAPPED"),
        ("th42", SMALL["th42"], "VALUE-MISMATCH"),
        ("th30", SMALL["th30"], "PASS"),
        ("th41", SMALL["th41"], "ORDER-SWAPPED"),
        ("cor41", dict(p=3, I=[0, 1, 2, 3], pattern="theta1"), "NOT-PG"),
    ],
)
def test_pgds_verdicts(cid, params, verdict):
    rec = pgds_verdict(construct(cid, **params))
    assert rec.verdict == verdict


def test_verdict_record_shape():
    rec = pgds_verdict(construct("th33", l=1)).as_dict()
    assert rec["claimed"] == [6, 10] and (rec["in_value"], rec["off_value"]) == (10, 6)
    assert rec["semantics_used"] == "window"
    assert set(rec["profiles"]) == {"window", "blockwise"}


def test_single_semantics_verdict():
    rec = pgds_verdict(construct("th41", p=3, u=2), "blockwise")
    assert rec.verdict == "NOT-PG"


@pytest.mark.parametrize(
    "iv, ov, claim, want",
    [(5, 2, (5, 2), "PASS"), (10, 6, (6, 10), "ORDER-SWAPPED"), (45, 18, (21, 18), "VALUE-MISMATCH")],
)
def test_compare_claim(iv, ov, claim, want):
    assert compare_claim(iv, ov, claim) == want


def test_spectrum():
    assert difference_spectrum(planar_set(3, 1, 2).blocks[0]).is_ads
    spec = difference_spectrum(construct("th33", l=1).blocks[0])
    assert spec.values == {0: 1, 2: 6} and not spec.is_ads
    h = _subgroup_family()[0]
    assert difference_spectrum(h).values == {0: 12, 3: 2}


@pytest.mark.parametrize(
    "family, b",
    [
        (lambda: construct("th33", l=1), 8),
        (_subgroup_family, 5),
        (lambda: construct("th41", p=3, u=2), 27),
        (lambda: construct("th42", **SMALL["th42"]), 10),
    ],
)
def test_develop_block_counts(family, b):
    d = develop(family())
    assert d.b == b
    assert len(set(d.blocks)) == d.b


def test_develop_multiset_keeps_translates():
    d = develop(construct("th42", **SMALL["th42"]), multiset=True)
    assert d.b == 30 and d.duplicates_collapsed == 0
    assert develop(construct("th42", **SMALL["th42"])).duplicates_collapsed == 20


TRIANGLE = Design.from_blocks([[1, 2], [1, 3], [2, 3]])


def test_triangle_design_counts():
    rep = s_counts(TRIANGLE)
    assert rep.partial_geometric and (rep.alpha_prime, rep.beta_prime) == (0, 2)
    flag, anti = flag_counts(range(3), [set(b) for b in TRIANGLE.blocks])
    assert (flag, anti) == ({0}, {2})
    assert pg_check_matrix(TRIANGLE).same_verdict(rep)


@pytest.mark.parametrize("cid", ["th33", "th32", "th30", "th41", "th42", "th40"])
def test_direct_and_matrix_agree_with_oracle(cid):
    d = develop(construct(cid, **SMALL[cid]))
    direct, matrix = s_counts(d), pg_check_matrix(d)
    assert direct.same_verdict(matrix)
    if d.v <= 20:
        flag, anti = flag_counts(range(d.v), [set(b) for b in d.blocks])
        assert (set(direct.flag_values), set(direct.antiflag_values)) == (flag, anti)
    if matrix.partial_geometric:
        assert not matrix.residual.any()
        assert matrix.n_prime == direct.r + direct.k - 1 + direct.alpha_prime - direct.beta_prime


def test_mod4_development_values():
    rep = s_counts(develop(construct("th33", l=1)))
    assert (rep.k, rep.r, rep.alpha_prime, rep.beta_prime, rep.n_prime) == (4, 4, 3, 6, 4)


def test_subgroup_development_trivially_pg():
    rep = pg_check_matrix(develop(_subgroup_family()))
    assert rep.partial_geometric and rep.residual_max() == 0


def test_not_pg_development():
    d = develop(construct("cor41", p=3, I=[0, 1, 2, 3]))
    assert not s_counts(d).partial_geometric
    assert not pg_check_matrix(d).partial_geometric
    assert pg_check_matrix(d).residual_max() > 0


def test_removed_block_not_tactical():
    d = develop(construct("th33", l=1)).remove_block(0)
    with pytest.raises(NotTacticalError):
        s_counts(d)
    with pytest.raises(NotTacticalError):
        pg_check_matrix(d)


def test_index_profiles():
    assert index_profile(develop(planar_set(3, 1, 2))).values == (0, 1)
    complete = Design.from_blocks([[a, b] for a in range(4) for b in range(a + 1, 4)])
    prof = index_profile(complete)
    assert prof.values == (1,) and not prof.two_index


def test_a1_planar():
    rep = a1_srg_check(develop(planar_set(3, 1, 2)))
    assert rep.adesign and rep.in_special_class and rep.srg_certified
    assert (rep.srg.k, rep.srg.lam, rep.srg.mu) == (6, 3, 6)
    assert rep.k_prime == rep.kappa == rep.degree_formula == 6
    assert rep.formulas_agree and rep.closed_forms_hold


def _class_design(p, with_zero):
    f = build_field(p, 2)
    c = cyclotomic_classes(f, p + 1).classes[0]
    block = Subset(c.group, c.indices + ((0,) if with_zero else ()))
    return develop([block])


@pytest.mark.parametrize("p", [3, 5])
def test_a1_line_subgroup_development(p):
    rep = a1_srg_check(_class_design(p, True))
    assert rep.in_special_class and rep.srg_certified and rep.formulas_agree
    assert (rep.srg.k, rep.srg.lam, rep.srg.mu) == (p - 1, p - 2, 0)
    # the subtraction form of k' has the wrong sign on this class
    assert rep.k_prime == p - 1 and rep.k_prime_printed == -(p - 1)


def test_a1_bare_class_is_srg_but_not_pg():
    d = _class_design(3, False)
    assert index_profile(d).adesign
    assert not s_counts(d).partial_geometric
    rep = a1_srg_check(d)
    assert rep.srg_certified and (rep.srg.k, rep.srg.lam, rep.srg.mu) == (2, 1, 0)
    assert rep.srg.k == rep.degree_formula
    assert not rep.in_special_class and rep.zeta_values == (0, 2)


def test_a1_larger_bare_class_not_adesign():
    d = _class_design(5, False)
    assert index_profile(d).values == (0, 3)
    assert not a1_srg_check(d).in_special_class


def test_a1_mod4_development():
    rep = a1_srg_check(develop(construct("th33", l=1)))
    assert (rep.mu1, rep.mu2) == (2, 0) and not rep.adesign
    assert rep.srg_certified and rep.formulas_agree
    assert rep.closed_forms_hold and not rep.printed_closed_forms_hold


def test_a1_precondition():
    with pytest.raises(PreconditionError):
        a1_srg_check(develop(construct("th30", **SMALL["th30"])))


def test_srg_parameters_rejects_irregular():
    a = np.array([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
    assert not srg_parameters(a).certified
