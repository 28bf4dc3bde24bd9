"""Acceptance criteria 1-11, one PASS/FAIL line each, with runtime bounds."""

import time

import numpy as np
import pytest

from oracles import naive_search
from pgdesign.constructions import construct
from pgdesign.dsrg import antiflag_graph, dsrg_check, flag_graph
from pgdesign.galois import build_field, cyclotomic_classes, cyclotomic_number, verify_group_ring_identity
from pgdesign.groups import make_group
from pgdesign.search import SearchJob, run_search
from pgdesign.verify import (
    a1_srg_check,
    develop,
    difference_spectrum,
    family_profile,
    index_profile,
    pg_check_matrix,
    pgds_verdict,
    s_counts,
)

TH42 = dict(orders=[15], h_gen="(5)", reps=["(1)", "(2)"])
FAMILIES_3_TO_7 = (
    [("th32", dict(p=3, m=1, s=2))]
    + [("th33", dict(l=l)) for l in (1, 2, 3)]
    + [("th41", dict(p=p, u=u)) for p, u in ((3, 2), (3, 3), (5, 2))]
    + [("th42", TH42)]
    + [("th30", dict(m=m, p=p, i=0, j=1)) for m in (2, 4) for p in (3, 5)]
    + [("th31", dict(p=p, i=0, j=1)) for p in (3, 5)]
)


class Criterion:
    """Collects named checks, times the body and prints one result line."""

    def __init__(self, capsys, number, title, bound):
        self.capsys, self.number, self.title, self.bound = capsys, number, title, bound
        self.checks: dict[str, bool] = {}
        self.detail = ""

    def check(self, name, ok):
        self.checks[name] = bool(ok)

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        self.check(f"runtime {elapsed:.2f}s < {self.bound}s", elapsed < self.bound)
        if exc_type is not None:
            self.check(f"raised {exc_type.__name__}: {exc}", False)
        failed = [k for k, v in self.checks.items() if not v]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {self.number:>2} {status}: {self.title} [{elapsed:.2f}s]"
        if self.detail:
            line += f" {self.detail}"
        if failed:
            line += " failed: " + "; ".join(failed)
        with self.capsys.disabled():
            print("\n" + line)
        if exc_type is None:
            assert not failed, failed
        return False


def test_criterion_01_cyclotomy(capsys):
    with Criterion(capsys, 1, "order-(p+1) cyclotomic numbers over F_{p^2}", 1.0) as c:
        for p in (3, 5, 7):
            t = cyclotomic_classes(build_field(p, 2), p + 1)
            q = p * p
            for i in range(p + 1):
                for j in range(p + 1):
                    if i == j == 0:
                        want = (q - 1) // (p + 1) - 1
                    elif i == j or i == 0 or j == 0:
                        want = 0
                    else:
                        want = 1
                    c.check(f"p={p} ({i},{j})", cyclotomic_number(t, i, j) == want)
        # (0,0) = f - 1 = p - 2 for class size f = p - 1
        c.detail = "(0,0) = p-2"


def test_criterion_02_group_ring_identity(capsys):
    with Criterion(capsys, 2, "group-ring product identity, e in {2, p+1}, F_9 and F_25", 5.0) as c:
        for p in (3, 5):
            f = build_field(p, 2)
            for e in (2, p + 1):
                t = cyclotomic_classes(f, e)
                for i in range(e):
                    for j in range(e):
                        rep = verify_group_ring_identity(t, i, j)
                        c.check(f"F_{p * p} e={e} ({i},{j})", rep.holds and rep.lemma_cases_apply)


def test_criterion_03_planar(capsys):
    with Criterion(capsys, 3, "planar x^2 over F_3: profile (5, 2), ADS spectrum", 1.0) as c:
        fam = construct("th32", p=3, m=1, s=2)
        rec = pgds_verdict(fam)
        c.check("profile (5,2)", (rec.in_value, rec.off_value) == (5, 2))
        c.check("matches (2n-1, n-1)", rec.verdict == "PASS")
        spec = difference_spectrum(fam.blocks[0])
        vals = sorted(spec.values)
        c.check("two consecutive values", len(vals) == 2 and vals[1] - vals[0] == 1 and spec.is_ads)
        c.detail = f"spectrum {spec.values}"


def test_criterion_04_mod4(capsys):
    with Criterion(capsys, 4, "mod-4 pair set: (10, 6) at l=1, ORDER-SWAPPED; l=2,3 pair {6l^2, 10l^2}", 1.0) as c:
        rec = pgds_verdict(construct("th33", l=1))
        c.check("l=1 (10,6)", (rec.in_value, rec.off_value) == (10, 6))
        c.check("l=1 ORDER-SWAPPED", rec.verdict == "ORDER-SWAPPED")
        for l in (2, 3):
            prof = family_profile(construct("th33", l=l), "window")
            c.check(f"l={l} two-valued", prof.two_valued)
            c.check(f"l={l} pair", {prof.in_value, prof.off_value} == {6 * l * l, 10 * l * l})


@pytest.mark.xfail(
    strict=True,
    reason="the uncovered point 6 of Z_9 gets blockwise sum 9, not 0; only the uncovered point 3 maps to 0",
)
def test_criterion_05_multiplier_family(capsys):
    with Criterion(capsys, 5, "multiplier family (3,2): window (15,6); blockwise 0->18, covered->9, uncovered->0", 1.0) as c:
        fam = construct("th41", p=3, u=2)
        win = family_profile(fam, "window")
        c.check("window (15,6)", (win.in_value, win.off_value) == (15, 6))
        bw = family_profile(fam, "blockwise")
        c.check("blockwise not two-valued", not bw.two_valued)
        sums = bw.point_sums()
        covered = np.zeros(9, dtype=bool)
        for b in fam.blocks:
            covered[list(b.indices)] = True
        c.check("0 -> 18", sums[0] == 18)
        c.check("covered -> 9", all(sums[x] == 9 for x in range(1, 9) if covered[x]))
        bad = [x for x in range(9) if not covered[x] and sums[x] != 0]
        c.check(f"uncovered -> 0 (violated at {bad} with {[int(sums[x]) for x in bad]})", not bad)
        for params, want in ((dict(p=3, u=3), (297, 216)), (dict(p=5, u=2), (45, 20))):
            w = family_profile(construct("th41", **params), "window")
            c.check(f"{params} window {want}", (w.in_value, w.off_value) == want)


def test_criterion_06_coset_pairs(capsys):
    with Criterion(capsys, 6, "coset-pair family (15,3): off 18 = 2m^2, in 45 != 21, VALUE-MISMATCH", 1.0) as c:
        rec = pgds_verdict(construct("th42", **TH42))
        c.check("off 18", rec.off_value == 18 == rec.claimed[1])
        c.check("in 45 vs printed 21", rec.in_value == 45 and rec.claimed[0] == 21)
        c.check("VALUE-MISMATCH", rec.verdict == "VALUE-MISMATCH")


def test_criterion_07_product_sets(capsys):
    with Criterion(capsys, 7, "product sets at smallest parameters: two-valued, verdict recorded", 10.0) as c:
        verdicts = []
        cases = [("th30", dict(m=m, p=p, i=0, j=1)) for m in (2, 4) for p in (3, 5)]
        cases += [("th31", dict(p=p, i=0, j=1)) for p in (3, 5)]
        for cid, params in cases:
            rec = pgds_verdict(construct(cid, **params), "window")
            c.check(f"{cid} {params} two-valued", rec.in_value is not None)
            c.check(f"{cid} {params} verdict recorded", rec.verdict in ("PASS", "ORDER-SWAPPED", "VALUE-MISMATCH"))
            shown = ",".join(f"{k}={v}" for k, v in params.items() if k in ("m", "p"))
            verdicts.append(f"{cid}({shown}) {rec.verdict}")
        c.detail = "; ".join(verdicts)


def test_criterion_08_developments(capsys):
    with Criterion(capsys, 8, "developments of items 3-7 certified partial geometric, both methods agree", 30.0) as c:
        for cid, params in FAMILIES_3_TO_7:
            fam = construct(cid, **params)
            if not family_profile(fam, "window").two_valued:
                continue
            d = develop(fam)
            direct, matrix = s_counts(d), pg_check_matrix(d)
            tag = f"{cid} {params}"
            c.check(f"{tag} direct", direct.partial_geometric)
            c.check(f"{tag} matrix", matrix.partial_geometric and matrix.residual_max() == 0)
            c.check(f"{tag} agree", direct.same_verdict(matrix))
        c.detail = f"{len(FAMILIES_3_TO_7)} families"


def test_criterion_09_dsrg(capsys):
    with Criterion(capsys, 9, "flag and anti-flag DSRG certificates, mutation breaks one", 30.0) as c:
        for cid, params in (("th33", dict(l=1)), ("th32", dict(p=3, m=1, s=2))):
            d = develop(construct(cid, **params))
            fg, ag = flag_graph(d), antiflag_graph(d)
            if cid == "th33":
                c.check("32 flags / 32 anti-flags", (fg.order, ag.order) == (32, 32))
            c.check(f"{cid} flag certified", dsrg_check(fg).certified)
            c.check(f"{cid} anti-flag certified", dsrg_check(ag).certified)
        m = develop(construct("th33", l=1)).flip(0, 0)
        certs = [dsrg_check(flag_graph(m, False)), dsrg_check(antiflag_graph(m, False))]
        c.check("mutation detected", not all(x.certified for x in certs))


def test_criterion_10_two_index_pipeline(capsys):
    with Criterion(capsys, 10, "2-adesign pipeline: A_1 strongly regular, k' matches the degree formula", 10.0) as c:
        f = build_field(3, 2)
        cls = cyclotomic_classes(f, 4).classes[1]
        designs = {"class D_1 over F_9": develop([cls]), "planar n=3": develop(construct("th32", p=3, m=1, s=2))}
        for name, d in designs.items():
            prof = index_profile(d)
            c.check(f"{name} indices {{0,1}}", prof.values == (0, 1) and prof.adesign)
            rep = a1_srg_check(d)
            c.check(f"{name} SRG with zero residual", rep.srg_certified and not rep.srg.residual.any())
            c.check(f"{name} k' = ((k-1)r + mu2(1-v))/(mu1-mu2)", rep.srg.k == rep.degree_formula)
        srgs = {n: a1_srg_check(d).srg for n, d in designs.items()}
        c.detail = "; ".join(f"{n}: SRG({s.v},{s.k},{s.lam},{s.mu})" for n, s in srgs.items())


def test_criterion_11_search(capsys):
    with Criterion(capsys, 11, "search Z_2 x Z_4, k=4, fix-zero: finds the mod-4 block, equals naive enumeration", 10.0) as c:
        job = run_search(SearchJob(make_group([2, 4]), 4, fix_zero=True))
        target = construct("th33", l=1).blocks[0].indices
        c.check("mod-4 block found", any(h.block.indices == target for h in job.found))
        elems = job.group.elements()
        got = [(tuple(elems[i] for i in h.block.indices), h.in_value, h.off_value) for h in job.found]
        c.check("equals naive enumerator", got == naive_search([2, 4], 4, True))
        c.detail = f"{len(job.found)} hits of {job.space}"
