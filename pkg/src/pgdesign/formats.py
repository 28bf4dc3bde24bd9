"""On-disk documents: family JSON, fidelity JSON and incidence grids.

Group elements are written in their canonical text form, e.g. ``(1,(0,2))``,
and a field factor by its characteristic, degree and modulus, so a document
is readable without this package.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from pgdesign.constructions import ClaimedProfile, ConstructedFamily
from pgdesign.galois import FieldError, field_from_description
from pgdesign.groups import GroupError, GroupSpec, Subset, make_group
from pgdesign.verify import Design, FidelityRecord

FAMILY_FORMAT = "pgdesign-family/1"


class FormatError(ValueError):
    """A document that cannot be parsed."""


def dumps(doc: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def group_to_json(group: GroupSpec) -> dict:
    f = group.field_factor
    return {
        "cyclic_orders": list(group.cyclic_orders),
        "field": None if f is None else {"p": f.p, "d": f.d, "modulus": list(f.modulus)},
    }


def group_from_json(doc: dict) -> GroupSpec:
    try:
        f = doc.get("field")
        field = None if f is None else field_from_description(f)
        return make_group([int(n) for n in doc["cyclic_orders"]], field)
    except (KeyError, TypeError, FieldError, GroupError) as exc:
        raise FormatError(f"bad group description: {exc}") from exc


def family_to_json(family: ConstructedFamily) -> dict:
    return {
        "format": FAMILY_FORMAT,
        "group": group_to_json(family.group),
        "blocks": [b.format() for b in family.blocks],
        "claimed": family.claimed.as_dict(),
        "provenance": {
            "construction": family.construction,
            "params": family.params,
            "notes": list(family.notes),
        },
    }


def family_from_json(doc: Any) -> ConstructedFamily:
    if not isinstance(doc, dict) or doc.get("format") != FAMILY_FORMAT:
        raise FormatError(f"not a family document (expected format {FAMILY_FORMAT!r})")
    try:
        group = group_from_json(doc["group"])
        blocks = tuple(Subset.from_elements(group, [group.parse_element(x) for x in b]) for b in doc["blocks"])
        c = doc["claimed"]
        first, second = c["tuple"]
        claimed = ClaimedProfile(int(c["v"]), int(c["k"]), int(c["n"]), int(first), int(second), str(c["source"]))
        prov = doc["provenance"]
        construction, params, notes = prov["construction"], dict(prov["params"]), tuple(prov.get("notes", ()))
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed family document: {exc}") from exc
    if not blocks:
        raise FormatError("family document has no blocks")
    return ConstructedFamily(group, blocks, claimed, construction, params, notes)


def read_family(path) -> ConstructedFamily:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    return family_from_json(doc)


def fidelity_to_json(record: FidelityRecord) -> dict:
    return record.as_dict()


# incidence grids ----------------------------------------------------------


def incidence_grid(design: Design) -> str:
    """Header "v b k r" then one row of 0/1 per point; "-" marks a non-constant k or r."""
    a = design.incidence
    sizes, reps = design.block_sizes(), design.replication()
    k = str(int(sizes[0])) if sizes.size and np.all(sizes == sizes[0]) else "-"
    r = str(int(reps[0])) if reps.size and np.all(reps == reps[0]) else "-"
    lines = [f"{design.v} {design.b} {k} {r}"] + [" ".join(map(str, row)) for row in a.tolist()]
    return "\n".join(lines) + "\n"


def read_incidence_grid(text: str) -> Design:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty incidence grid")
    head = lines[0].split()
    if len(head) != 4:
        raise FormatError(f"grid header must be 'v b k r', got {lines[0]!r}")
    try:
        v, b = int(head[0]), int(head[1])
        claims = {key: None if x == "-" else int(x) for key, x in zip("kr", head[2:])}
        rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise FormatError(f"non-integer entry in grid: {exc}") from exc
    if len(rows) != v or any(len(row) != b for row in rows):
        raise FormatError(f"grid body is not {v} x {b}")
    a = np.array(rows, dtype=np.int64).reshape(v, b)
    if np.any((a != 0) & (a != 1)):
        raise FormatError("grid entries must be 0 or 1")
    design = Design.from_incidence(a)
    for key, got in (("k", design.block_sizes()), ("r", design.replication())):
        want = claims[key]
        if want is not None and got.size and np.any(got != want):
            raise FormatError(f"header claims {key}={want} but the grid disagrees")
    return design
