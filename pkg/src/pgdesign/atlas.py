"""Parameter sweeps: every construction at small parameters, fully certified.

A range spec is a ``;``-separated list of ``key=v1,v2`` items, for example
``p=3,5;l=1,2;u=2,3;ids=th33,th41``.  Keys not given fall back to the
smallest admissible values; ``ids`` restricts the constructions.  An empty
spec is an empty atlas.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from pgdesign.constructions import BUILDERS, ConstructionError, construct
from pgdesign.dsrg import antiflag_graph, dsrg_check, flag_graph
from pgdesign.formats import dumps
from pgdesign.verify import (
    NotTacticalError,
    PreconditionError,
    a1_srg_check,
    develop,
    index_profile,
    pg_check_matrix,
    pgds_verdict,
    s_counts,
)

DEFAULTS: dict[str, list] = {"p": [3], "m": [2], "l": [1], "u": [2], "n": [15]}
ALL_IDS = tuple(BUILDERS)
INT_KEYS = ("p", "m", "l", "u", "n")


class RangeError(ValueError):
    pass


def parse_range(spec: str) -> dict[str, list] | None:
    """``None`` for an empty spec, otherwise the parsed key -> values map."""
    spec = spec.strip()
    if not spec:
        return None
    out: dict[str, list] = {}
    for item in filter(None, (s.strip() for s in spec.split(";"))):
        key, sep, vals = item.partition("=")
        key = key.strip()
        if not sep or not vals.strip():
            raise RangeError(f"range item {item!r} is not key=v1,v2")
        parts = [v.strip() for v in vals.split(",") if v.strip()]
        if key == "ids":
            unknown = [p for p in parts if p not in BUILDERS]
            if unknown:
                raise RangeError(f"unknown construction ids {unknown}")
            out[key] = parts
        elif key in INT_KEYS:
            try:
                out[key] = [int(p) for p in parts]
            except ValueError:
                raise RangeError(f"non-integer value in {item!r}") from None
        else:
            raise RangeError(f"unknown range key {key!r}")
    return out or None


def _instances(cid: str, r: dict[str, list]) -> list[dict[str, Any]]:
    get = lambda k: r.get(k, DEFAULTS[k])  # noqa: E731
    quad = [0, 1, 2, 3]
    if cid == "th30":
        return [dict(m=m, p=p, i=0, j=1) for m, p in itertools.product(get("m"), get("p"))]
    if cid == "th31":
        return [dict(p=p, i=0, j=1) for p in get("p")]
    if cid == "th32":
        return [dict(p=p, m=m, s=2) for p, m in itertools.product(get("p"), r.get("m", [1]))]
    if cid == "th33":
        return [dict(l=l, variant="A") for l in get("l")]
    if cid == "th41":
        return [dict(p=p, u=u) for p, u in itertools.product(get("p"), get("u"))]
    if cid == "th40":
        return [dict(m=m, p=p, I=quad) for m, p in itertools.product(get("m"), get("p"))]
    if cid == "cor40":
        return [dict(m=m, p=p, I=quad) for m, p in itertools.product(get("m"), get("p"))]
    if cid == "cor41":
        return [dict(p=p, I=quad, pattern=pat) for p in get("p") for pat in ("theta0", "theta1")]
    if cid == "th42":
        out = []
        for n in get("n"):
            kappa = (n // 3 - 1) // 2
            out.append(dict(orders=[n], h_gen=f"({n // 3})", reps=[f"({g})" for g in range(1, kappa + 1)]))
        return out
    raise RangeError(f"unknown construction id {cid!r}")


def expand(spec: dict[str, list] | None) -> list[tuple[str, dict]]:
    if spec is None:
        return []
    ids = spec.get("ids", list(ALL_IDS))
    return [(cid, params) for cid in ids for params in _instances(cid, spec)]


@dataclass
class AtlasEntry:
    construction: str
    params: dict
    shape: dict | None = None  # v, k, n of the constructed family
    fidelity: dict | None = None
    development: dict | None = None
    two_index: dict | None = None
    dsrg: dict | None = None
    notes: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def slug(self) -> str:
        def val(x):
            return "-".join(map(str, x)) if isinstance(x, (list, tuple)) else str(x)

        body = "_".join(f"{k}{val(v)}" for k, v in self.params.items())
        return "".join(ch if ch.isalnum() or ch in "_-" else "" for ch in f"{self.construction}_{body}")

    def as_dict(self) -> dict:
        return {
            "construction": self.construction,
            "params": self.params,
            "shape": self.shape,
            "fidelity": self.fidelity,
            "development": self.development,
            "two_index": self.two_index,
            "dsrg": self.dsrg,
            "notes": self.notes,
            "timings": self.timings,
        }


def build_entry(cid: str, params: dict, max_v: int = 2000, max_vertices: int = 3000) -> AtlasEntry:
    entry = AtlasEntry(cid, dict(params))
    t0 = time.perf_counter()
    try:
        family = construct(cid, **params)
    except ConstructionError as exc:
        entry.notes.append(f"skipped: {exc}")
        return entry
    entry.params = dict(family.params)
    entry.shape = {"v": family.group.order, "k": family.k, "n": family.n}
    record = pgds_verdict(family)
    entry.fidelity = record.as_dict()
    prof = record.profiles
    strip = lambda d: {k: v for k, v in d.items() if k != "semantics"}  # noqa: E731
    if set(prof) == {"window", "blockwise"} and strip(prof["window"]) != strip(prof["blockwise"]):
        entry.notes.append("window and blockwise profiles differ")
    t1 = time.perf_counter()
    entry.timings["verify"] = t1 - t0
    if family.group.order > max_v:
        entry.notes.append(f"development skipped: v = {family.group.order} exceeds cap {max_v}")
        return entry
    design = develop(family)
    try:
        direct, matrix = s_counts(design), pg_check_matrix(design)
    except NotTacticalError as exc:
        entry.development = {"v": design.v, "b": design.b, "tactical": False, "reason": str(exc)}
        return entry
    entry.development = {
        "v": design.v,
        "b": design.b,
        "duplicates_collapsed": design.duplicates_collapsed,
        "tactical": True,
        "direct": direct.summary(),
        "matrix": matrix.summary(),
        "agree": direct.same_verdict(matrix),
    }
    prof_idx = index_profile(design)
    entry.development["pair_indices"] = list(prof_idx.values)
    if prof_idx.two_index:
        try:
            entry.two_index = a1_srg_check(design).summary()
        except PreconditionError as exc:
            entry.notes.append(str(exc))
    t2 = time.perf_counter()
    entry.timings["develop"] = t2 - t1
    n_flags = int(design.block_sizes().sum())
    if max(n_flags, design.v * design.b - n_flags) > max_vertices:
        entry.notes.append(f"DSRG check skipped: more than {max_vertices} vertices")
    else:
        entry.dsrg = {
            "flag": dsrg_check(flag_graph(design)).as_dict(),
            "antiflag": dsrg_check(antiflag_graph(design)).as_dict(),
        }
    entry.timings["dsrg"] = time.perf_counter() - t2
    return entry


def build_atlas(spec: dict[str, list] | None, workers: int = 1, **caps) -> list[AtlasEntry]:
    jobs = expand(spec)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda j: build_entry(*j, **caps), jobs))
    return [build_entry(*j, **caps) for j in jobs]


COLUMNS = ("id", "params", "(v,k,n)", "claimed", "window", "blockwise", "verdict", "Dev PG", "DSRG flag", "DSRG anti")


def _row(e: AtlasEntry) -> list[str]:
    params = ",".join(f"{k}={v}" for k, v in e.params.items() if k != "pairs")
    if e.fidelity is None:
        return [e.construction, params, "", "", "", "", "skipped", "", "", ""]
    fid = e.fidelity

    def prof(name):
        p = fid["profiles"].get(name)
        if p is None:
            return ""
        if p["verdict"] != "two_valued":
            return f"in{p['in_values']} off{p['off_values']}"
        return f"({p['in_values'][0]},{p['off_values'][0] if p['off_values'] else '-'})"

    dev = e.development or {}
    pg = ""
    if dev:
        if not dev.get("tactical"):
            pg = "not tactical"
        else:
            pg = "yes" if dev["direct"]["partial_geometric"] and dev["agree"] else "no"
    cert = lambda g: "" if e.dsrg is None else ("yes" if e.dsrg[g]["certified"] else "no")  # noqa: E731
    c = fid["claimed"]
    s = e.shape
    return [
        e.construction,
        params,
        f"({s['v']},{s['k']},{s['n']})",
        f"({c[0]},{c[1]})",
        prof("window"),
        prof("blockwise"),
        fid["verdict"],
        pg,
        cert("flag"),
        cert("antiflag"),
    ]


def summary_table(entries: list[AtlasEntry]) -> str:
    rows = [list(COLUMNS)] + [_row(e) for e in entries]
    widths = [max(len(r[c]) for r in rows) for c in range(len(COLUMNS))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def write_atlas(entries: list[AtlasEntry], out_dir: str) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for i, e in enumerate(entries):
        path = os.path.join(out_dir, f"{i:03d}_{e.slug}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dumps(e.as_dict()))
        paths.append(path)
    with open(os.path.join(out_dir, "summary.txt"), "w", encoding="utf-8") as fh:
        fh.write(summary_table(entries))
    return paths
