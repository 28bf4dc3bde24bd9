"""Command-line front end.

Exit codes: 0 success or PASS, 1 malformed input, 2 parameter rejection,
3 ORDER-SWAPPED, 4 VALUE-MISMATCH, 5 NOT-PG (or a design/graph that fails
certification), 6 search over budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from pgdesign.atlas import RangeError, build_atlas, parse_range, summary_table, write_atlas
from pgdesign.constructions import ConstructionError, construct
from pgdesign.dsrg import FORMATS as GRAPH_FORMATS
from pgdesign.dsrg import antiflag_graph, dsrg_check, export_graph, flag_graph
from pgdesign.formats import (
    FormatError,
    dumps,
    family_from_json,
    family_to_json,
    incidence_grid,
    read_family,
    read_incidence_grid,
)
from pgdesign.galois import FieldError, build_field
from pgdesign.groups import GroupError, make_group
from pgdesign.search import DEFAULT_BUDGET, SearchBudgetError, SearchJob, run_search
from pgdesign.verify import (
    Design,
    NotTacticalError,
    PreconditionError,
    a1_srg_check,
    develop,
    index_profile,
    pg_check_matrix,
    pgds_verdict,
    s_counts,
)

EXIT_OK, EXIT_MALFORMED, EXIT_REJECTED = 0, 1, 2
EXIT_SWAPPED, EXIT_MISMATCH, EXIT_NOT_PG, EXIT_BUDGET = 3, 4, 5, 6

VERDICT_EXIT = {"PASS": EXIT_OK, "ORDER-SWAPPED": EXIT_SWAPPED, "VALUE-MISMATCH": EXIT_MISMATCH, "NOT-PG": EXIT_NOT_PG}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# parameter plumbing -------------------------------------------------------


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _pairs(text: str) -> list[list[int]]:
    """"0-1,2-3" -> [[0, 1], [2, 3]]."""
    out = []
    for item in filter(None, text.replace(" ", "").split(",")):
        a, _, b = item.partition("-")
        out.append([int(a), int(b)])
    return out


def _elements(text: str) -> list[str]:
    """"(1);(2)" -> ["(1)", "(2)"]; elements are separated by semicolons."""
    return [x.strip() for x in text.split(";") if x.strip()]


CONSTRUCT_OPTIONS = {
    # option: (params key, parser)
    "p": ("p", int),
    "m": ("m", int),
    "s": ("s", int),
    "i": ("i", int),
    "j": ("j", int),
    "l": ("l", int),
    "u": ("u", int),
    "variant": ("variant", str),
    "I": ("I", _int_list),
    "pairs": ("pairs", _pairs),
    "pattern": ("pattern", str),
    "orders": ("orders", _int_list),
    "h_gen": ("h_gen", str),
    "reps": ("reps", _elements),
}


def construct_params(ns: argparse.Namespace) -> dict:
    params = {}
    for opt, (key, conv) in CONSTRUCT_OPTIONS.items():
        raw = getattr(ns, opt, None)
        if raw is None:
            continue
        try:
            params[key] = conv(raw)
        except ValueError as exc:
            raise CliError(f"bad value for --{opt.replace('_', '-')}: {raw!r} ({exc})", EXIT_MALFORMED) from None
    return params


# output --------------------------------------------------------------------


def _emit(ns: argparse.Namespace, doc, text: str | None = None) -> None:
    """Write ``doc`` as JSON (or ``text`` in text mode) to --out or stdout."""
    body = text if ns.format == "text" and text is not None else dumps(doc)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _load_design(path: str, multiset: bool = False) -> Design:
    """A design from an incidence grid or, for JSON input, the development of a family."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_MALFORMED) from None
    if text.lstrip().startswith("{"):
        try:
            return develop(family_from_json(json.loads(text)), multiset=multiset)
        except json.JSONDecodeError as exc:
            raise CliError(f"{path}: {exc}", EXIT_MALFORMED) from None
    return read_incidence_grid(text)


# subcommands ---------------------------------------------------------------


def cmd_construct(ns: argparse.Namespace) -> int:
    params = construct_params(ns)
    try:
        family = construct(ns.id, **params)
    except ConstructionError as exc:
        raise CliError(str(exc), EXIT_REJECTED) from None
    doc = family_to_json(family)
    c = family.claimed
    text = (
        f"{family.construction} in {family.group.describe()}: {family.n} block(s) of size {family.k}\n"
        + "".join(f"  {{{', '.join(b.format())}}}\n" for b in family.blocks)
        + f"claimed ({c.v}, {c.k}, {c.n}; {c.tuple_first}, {c.tuple_second})\n"
    )
    _emit(ns, doc, text)
    return EXIT_OK


def cmd_verify(ns: argparse.Namespace) -> int:
    family = read_family(ns.family)
    record = pgds_verdict(family, ns.semantics)
    text = (
        f"{record.construction}: verdict {record.verdict}; computed ({record.in_value}, {record.off_value}) "
        f"under {record.semantics_used}; claimed {tuple(record.claimed)}\n"
    )
    _emit(ns, record.as_dict(), text)
    return VERDICT_EXIT[record.verdict]


def cmd_develop(ns: argparse.Namespace) -> int:
    family = read_family(ns.family)
    design = develop(family, multiset=ns.multiset)
    doc = {
        "v": design.v,
        "b": design.b,
        "multiset": ns.multiset,
        "duplicates_collapsed": design.duplicates_collapsed,
        "points": list(design.labels),
        "blocks": [[design.labels[x] for x in blk] for blk in design.blocks],
    }
    _emit(ns, doc, incidence_grid(design))
    return EXIT_OK


def cmd_check_design(ns: argparse.Namespace) -> int:
    design = _load_design(ns.design, ns.multiset)
    try:
        direct, matrix = s_counts(design), pg_check_matrix(design)
    except NotTacticalError as exc:
        _emit(ns, {"tactical": False, "reason": str(exc)}, f"not tactical: {exc}\n")
        return EXIT_NOT_PG
    doc = {
        "tactical": True,
        "direct": direct.summary(),
        "matrix": matrix.summary(),
        "agree": direct.same_verdict(matrix),
    }
    prof = index_profile(design)
    doc["pair_indices"] = list(prof.values)
    if prof.two_index:
        try:
            doc["two_index"] = a1_srg_check(design).summary()
        except PreconditionError as exc:
            doc["two_index"] = {"error": str(exc)}
    pg = direct.partial_geometric and matrix.partial_geometric
    text = (
        f"v={design.v} b={design.b} k={direct.k} r={direct.r}: "
        + (f"partial geometric, alpha'={direct.alpha_prime} beta'={direct.beta_prime}" if pg else "not partial geometric")
        + f"; pair indices {list(prof.values)}\n"
    )
    _emit(ns, doc, text)
    return EXIT_OK if pg else EXIT_NOT_PG


def cmd_dsrg(ns: argparse.Namespace) -> int:
    design = _load_design(ns.design, ns.multiset)
    kinds = ("flag", "antiflag") if ns.graph == "both" else (ns.graph,)
    builders = {"flag": flag_graph, "antiflag": antiflag_graph}
    try:
        graphs = {kind: builders[kind](design) for kind in kinds}
    except NotTacticalError as exc:
        raise CliError(f"not tactical: {exc}", EXIT_NOT_PG) from None
    certs = {kind: dsrg_check(g) for kind, g in graphs.items()}
    doc = {kind: {"vertices": g.order, "provenance": g.provenance, **certs[kind].as_dict()} for kind, g in graphs.items()}
    if ns.export:
        if ns.out:
            os.makedirs(ns.out, exist_ok=True)
            ext = {"edge-list": "txt", "dot": "dot", "matrix": "grid"}[ns.export]
            for kind, g in graphs.items():
                with open(os.path.join(ns.out, f"{kind}.{ext}"), "w", encoding="utf-8") as fh:
                    fh.write(export_graph(g, ns.export))
            with open(os.path.join(ns.out, "certificates.json"), "w", encoding="utf-8") as fh:
                fh.write(dumps(doc))
        else:
            sys.stdout.write("".join(export_graph(g, ns.export) for g in graphs.values()))
    else:
        text = "".join(
            f"{kind}: " + (f"DSRG{c.params()}" if c.certified else f"not DSRG ({c.failure})") + "\n"
            for kind, c in certs.items()
        )
        _emit(ns, doc, text)
    return EXIT_OK if all(c.certified for c in certs.values()) else EXIT_NOT_PG


def cmd_atlas(ns: argparse.Namespace) -> int:
    try:
        spec = parse_range(ns.range)
    except RangeError as exc:
        raise CliError(str(exc), EXIT_MALFORMED) from None
    entries = build_atlas(spec, workers=ns.workers, max_v=ns.max_v, max_vertices=ns.max_vertices)
    if ns.out:
        write_atlas(entries, ns.out)
    for e in entries:
        for note in e.notes:
            if "skipped" in note:
                print(f"notice: {e.construction} {e.params}: {note}", file=sys.stderr)
    if ns.format == "text" or ns.out:
        sys.stdout.write(summary_table(entries) if entries else "empty atlas\n")
    else:
        sys.stdout.write(dumps([e.as_dict() for e in entries]))
    return EXIT_OK


def _search_group(ns: argparse.Namespace):
    orders = _int_list(ns.orders) if ns.orders else []
    field = None
    if ns.field:
        p, _, d = ns.field.partition("^")
        field = build_field(int(p), int(d or 1))
    if not orders and field is None:
        raise CliError("search needs --orders and/or --field", EXIT_MALFORMED)
    return make_group(orders, field)


def cmd_search(ns: argparse.Namespace) -> int:
    group = _search_group(ns)
    semantics = "window" if ns.semantics == "both" else ns.semantics
    job = SearchJob(group, ns.k, fix_zero=ns.fix_zero, semantics=semantics, dedupe=ns.dedupe, budget=ns.budget)
    try:
        run_search(job, workers=ns.workers)
    except SearchBudgetError as exc:
        print(f"over budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    text = f"{len(job.found)} hit(s) among {job.space} candidates\n" + "".join(
        f"  {{{', '.join(h.block.format())}}} -> ({h.in_value}, {h.off_value})\n" for h in job.found
    )
    _emit(ns, job.as_dict(), text)
    return EXIT_OK


# parser --------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--out", default=d(None), help="output file (directory for atlas and graph export)")
    parser.add_argument("--format", choices=("json", "text"), default=d("json"))
    parser.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET), help="search candidate cap")
    parser.add_argument("--semantics", choices=("both", "window", "blockwise"), default=d("both"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgdesign", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a construction and write its family document")
    p.add_argument("id")
    for opt in CONSTRUCT_OPTIONS:
        p.add_argument(f"--{opt.replace('_', '-')}", dest=opt)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="profile a family and grade its printed tuple")
    p.add_argument("family")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("develop", parents=[common], help="develop a family into a design")
    p.add_argument("family")
    p.add_argument("--multiset", action="store_true", help="keep coincident translates")
    p.set_defaults(func=cmd_develop)

    p = sub.add_parser("check-design", parents=[common], help="partial geometric test of a design")
    p.add_argument("design", help="incidence grid, or a family document to develop")
    p.add_argument("--multiset", action="store_true")
    p.set_defaults(func=cmd_check_design)

    p = sub.add_parser("dsrg", parents=[common], help="certify the flag and anti-flag digraphs")
    p.add_argument("design", help="incidence grid, or a family document to develop")
    p.add_argument("--graph", choices=("flag", "antiflag", "both"), default="both")
    p.add_argument("--export", choices=GRAPH_FORMATS)
    p.add_argument("--multiset", action="store_true")
    p.set_defaults(func=cmd_dsrg)

    p = sub.add_parser("atlas", parents=[common], help="sweep constructions over a parameter range")
    p.add_argument("--range", default="p=3,5", help="e.g. 'p=3,5;l=1,2;ids=th33' (empty string: empty atlas)")
    p.add_argument("--max-v", type=int, default=2000, dest="max_v")
    p.add_argument("--max-vertices", type=int, default=3000, dest="max_vertices")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("search", parents=[common], help="exhaustive search for two-valued k-subsets")
    p.add_argument("--orders", help="cyclic factor orders, e.g. 2,4")
    p.add_argument("--field", help="additive group of F_{p^d} as p^d, e.g. 3^2")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--fix-zero", action="store_true", dest="fix_zero")
    p.add_argument("--dedupe", action="store_true", help="keep one representative per translation class")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_search)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    try:
        return ns.func(ns)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (FormatError, FieldError, GroupError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
