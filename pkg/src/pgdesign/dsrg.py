"""Flag and anti-flag digraphs of a design and their DSRG certificates.

Vertices are incident (flag) or non-incident (anti-flag) point/block pairs,
numbered by (point index, block index).  In both graphs (u, b) -> (w, c)
exactly when u lies in c; the flag graph drops the loop (u, b) -> (u, b).
The anti-flag vertex set is read as u ∉ b.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from pgdesign.verify import Design, check_tactical

FORMATS = ("edge-list", "dot", "matrix")

ANTIFLAG_READING = "anti-flag vertices read as u ∉ b"


class GraphFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Digraph:
    kind: str  # "flag", "antiflag" or "raw"
    vertices: tuple[tuple[int, int], ...]  # (point, block)
    adjacency: np.ndarray = field(repr=False)
    provenance: str = ""
    labels: tuple[str, ...] = ()
    incidence: np.ndarray | None = field(default=None, repr=False)  # the design's N, for pair graphs

    def __post_init__(self) -> None:
        a = self.adjacency
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {a.shape}")
        if a.diagonal().any():
            raise ValueError("digraph has a loop")

    @property
    def order(self) -> int:
        return self.adjacency.shape[0]

    def vertex_label(self, i: int) -> str:
        if self.labels:
            return self.labels[i]
        if self.vertices:
            u, b = self.vertices[i]
            return f"({u},B{b})"
        return str(i)

    def square(self) -> np.ndarray:
        """A^2 in exact integers.

        For flag and anti-flag graphs, (u, b) -> (w, c) -> (x, d) factors
        through the design: A^2 = (N F N)[u, b] where F^T marks the vertex
        pairs, minus the loop terms for flags.  This is v x b work instead
        of a product of two n x n matrices.
        """
        a = self.adjacency
        if self.incidence is None or self.kind not in ("flag", "antiflag"):
            return a @ a
        n_mat = self.incidence
        f = n_mat.T if self.kind == "flag" else 1 - n_mat.T
        m = n_mat @ f @ n_mat
        us = np.array([u for u, _ in self.vertices], dtype=np.int64)
        bs = np.array([b for _, b in self.vertices], dtype=np.int64)
        sq = m[us[:, None], bs[None, :]]
        if self.kind == "flag":
            # A = B - I with B the unlooped gather, so A^2 = B^2 - 2B + I
            b_mat = a + np.eye(len(us), dtype=np.int64)
            sq = sq - 2 * b_mat + np.eye(len(us), dtype=np.int64)
        return sq

    def edges(self) -> list[tuple[int, int]]:
        src, dst = np.nonzero(self.adjacency)
        return list(zip(src.tolist(), dst.tolist()))

    @classmethod
    def from_adjacency(cls, a, provenance: str = "") -> Digraph:
        a = np.asarray(a, dtype=np.int64)
        return cls("raw", (), a, provenance)


def _pair_graph(design: Design, incident: bool, kind: str, note: str, require_tactical: bool) -> Digraph:
    if require_tactical:
        check_tactical(design)
    inc = design.incidence
    verts = tuple(zip(*np.nonzero(inc == (1 if incident else 0))))
    verts = tuple((int(u), int(b)) for u, b in verts)
    us = np.array([u for u, _ in verts], dtype=np.int64)
    bs = np.array([b for _, b in verts], dtype=np.int64)
    a = inc[us[:, None], bs[None, :]] if verts else np.zeros((0, 0), dtype=np.int64)
    a = np.array(a, dtype=np.int64)
    if incident:
        np.fill_diagonal(a, 0)
    labels = tuple(f"({design.labels[u]},B{b})" for u, b in verts)
    return Digraph(kind, verts, a, note, labels, inc)


def flag_graph(design: Design, require_tactical: bool = True) -> Digraph:
    """Vertices u ∈ b; (u, b) -> (w, c) iff the pairs differ and u ∈ c.

    ``require_tactical=False`` builds the graph of any design and leaves the
    verdict to :func:`dsrg_check` (used for mutation tests).
    """
    return _pair_graph(design, True, "flag", "flag graph", require_tactical)


def antiflag_graph(design: Design, require_tactical: bool = True) -> Digraph:
    """Vertices u ∉ b; (u, b) -> (w, c) iff u ∈ c (never a loop)."""
    return _pair_graph(design, False, "antiflag", f"anti-flag graph; {ANTIFLAG_READING}", require_tactical)


@dataclass(frozen=True)
class DSRGCertificate:
    v: int
    k: int | None
    t: int | None
    lam: int | None
    mu: int | None
    regular: bool  # AJ = JA = kJ
    identity_holds: bool  # A^2 = tI + lam A + mu (J - I - A)
    failure: str | None = None

    @property
    def certified(self) -> bool:
        return self.regular and self.identity_holds

    def params(self) -> tuple:
        return (self.v, self.k, self.t, self.lam, self.mu)

    def as_dict(self) -> dict:
        return {
            "v": self.v,
            "k": self.k,
            "t": self.t,
            "lambda": self.lam,
            "mu": self.mu,
            "regular": self.regular,
            "identity_holds": self.identity_holds,
            "certified": self.certified,
            "failure": self.failure,
        }


def _first_mismatch(values: np.ndarray, where: np.ndarray, graph: Digraph, name: str):
    """(value, failure text) for the entries of A^2 selected by ``where``."""
    pos = np.argwhere(where)
    if not len(pos):
        return 0, None
    vals = values[where]
    ref = int(vals[0])
    bad = np.nonzero(vals != ref)[0]
    if not bad.size:
        return ref, None
    (i0, j0), (i1, j1) = pos[0], pos[bad[0]]
    lab = graph.vertex_label
    return ref, (
        f"{name} not constant: A^2[{lab(i0)}, {lab(j0)}] = {ref} "
        f"but A^2[{lab(i1)}, {lab(j1)}] = {int(vals[bad[0]])}"
    )


def dsrg_check(graph: Digraph) -> DSRGCertificate:
    """Read (k, t, lambda, mu) off A and A^2 and test both identities globally."""
    a = graph.adjacency
    n = graph.order
    if n == 0:
        return DSRGCertificate(0, None, None, None, None, False, False, "empty digraph")
    rows, cols = a.sum(axis=1), a.sum(axis=0)
    k = int(rows[0])
    bad_r = np.nonzero(rows != k)[0]
    bad_c = np.nonzero(cols != k)[0]
    if bad_r.size or bad_c.size:
        if bad_r.size:
            i = int(bad_r[0])
            msg = f"out-degree of {graph.vertex_label(i)} is {int(rows[i])}, of {graph.vertex_label(0)} is {k}"
        else:
            i = int(bad_c[0])
            msg = f"in-degree of {graph.vertex_label(i)} is {int(cols[i])}, out-degree is {k}"
        return DSRGCertificate(n, None, None, None, None, False, False, msg)
    assert n * k < 2**62
    sq = graph.square()
    eye = np.eye(n, dtype=bool)
    t, f_t = _first_mismatch(sq, eye, graph, "t")
    lam, f_l = _first_mismatch(sq, a == 1, graph, "lambda")
    mu, f_m = _first_mismatch(sq, (a == 0) & ~eye, graph, "mu")
    failure = f_t or f_l or f_m
    if failure:
        return DSRGCertificate(n, k, None, None, None, True, False, failure)
    return DSRGCertificate(n, k, t, lam, mu, True, True)


# export and import ------------------------------------------------------


def _header(graph: Digraph) -> str:
    cert = dsrg_check(graph)
    fmt = lambda x: "-" if x is None else str(x)  # noqa: E731
    return f"# dsrg v={graph.order} k={fmt(cert.k)} t={fmt(cert.t)} lambda={fmt(cert.lam)} mu={fmt(cert.mu)}"


def export_graph(graph: Digraph, fmt: str) -> str:
    if fmt == "edge-list":
        lines = [_header(graph)] + [f"{i} {j}" for i, j in graph.edges()]
    elif fmt == "dot":
        lines = ["digraph dsrg {"]
        lines += [f'  {i} [label="{graph.vertex_label(i)}"];' for i in range(graph.order)]
        lines += [f"  {i} -> {j};" for i, j in graph.edges()]
        lines.append("}")
    elif fmt == "matrix":
        lines = [_grid_header(graph.adjacency)] + [" ".join(map(str, row)) for row in graph.adjacency.tolist()]
    else:
        raise GraphFormatError(f"unknown graph format {fmt!r}; expected one of {', '.join(FORMATS)}")
    return "\n".join(lines) + "\n"


def _grid_header(a: np.ndarray) -> str:
    rows, cols = a.sum(axis=1), a.sum(axis=0)
    c = str(int(cols[0])) if cols.size and np.all(cols == cols[0]) else "-"
    r = str(int(rows[0])) if rows.size and np.all(rows == rows[0]) else "-"
    return f"{a.shape[0]} {a.shape[1]} {c} {r}"


def read_edge_list(text: str) -> np.ndarray:
    lines = text.strip().splitlines()
    if not lines or not lines[0].startswith("# dsrg"):
        raise GraphFormatError("edge list must start with a '# dsrg' header")
    m = re.search(r"v=(\d+)", lines[0])
    if not m:
        raise GraphFormatError("header lacks v=<n>")
    n = int(m.group(1))
    a = np.zeros((n, n), dtype=np.int64)
    for ln in lines[1:]:
        try:
            i, j = map(int, ln.split())
        except ValueError:
            raise GraphFormatError(f"bad edge line {ln!r}") from None
        a[i, j] = 1
    return a


def read_dot(text: str) -> np.ndarray:
    nodes = {int(x) for x in re.findall(r"^\s*(\d+)\s*\[", text, flags=re.M)}
    edges = [(int(i), int(j)) for i, j in re.findall(r"(\d+)\s*->\s*(\d+)", text)]
    n = max(nodes | {x for e in edges for x in e}, default=-1) + 1
    a = np.zeros((n, n), dtype=np.int64)
    for i, j in edges:
        a[i, j] = 1
    return a


def read_matrix(text: str) -> np.ndarray:
    lines = text.strip().splitlines()
    if not lines:
        raise GraphFormatError("empty matrix")
    head = lines[0].split()
    rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    n_rows, n_cols = int(head[0]), int(head[1])
    if len(rows) != n_rows or any(len(r) != n_cols for r in rows):
        raise GraphFormatError(f"grid does not match its header {lines[0]!r}")
    return np.array(rows, dtype=np.int64).reshape(n_rows, n_cols)


READERS = {"edge-list": read_edge_list, "dot": read_dot, "matrix": read_matrix}


def import_graph(text: str, fmt: str) -> Digraph:
    try:
        reader = READERS[fmt]
    except KeyError:
        raise GraphFormatError(f"unknown graph format {fmt!r}") from None
    return Digraph.from_adjacency(reader(text), provenance=f"read from {fmt}")
