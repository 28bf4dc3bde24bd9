import json

import pytest

from pgdesign.constructions import construct
from pgdesign.formats import (
    FAMILY_FORMAT,
    FormatError,
    dumps,
    family_from_json,
    family_to_json,
    fidelity_to_json,
    incidence_grid,
    read_family,
    read_incidence_grid,
)
from pgdesign.verify import Design, develop, pgds_verdict

CASES = [
    ("th33", dict(l=1)),
    ("th30", dict(m=2, p=3, i=0, j=1)),
    ("th42", dict(orders=[15], h_gen="(5)", reps=["(1)", "(2)"])),
    ("cor41", dict(p=3, I=[0, 1, 2, 3])),
    ("th32", dict(p=3, m=1, s=2)),
]


@pytest.mark.parametrize("cid, params", CASES)
def test_family_round_trip(cid, params, tmp_path):
    fam = construct(cid, **params)
    path = tmp_path / "fam.json"
    path.write_text(dumps(family_to_json(fam)))
    back = read_family(path)
    assert [b.indices for b in back.blocks] == [b.indices for b in fam.blocks]
    assert back.claimed == fam.claimed
    assert dumps(fidelity_to_json(pgds_verdict(back))) == dumps(fidelity_to_json(pgds_verdict(fam)))


def test_family_document_shape():
    doc = family_to_json(construct("th32", p=3, m=1, s=2))
    assert doc["format"] == FAMILY_FORMAT
    assert doc["group"] == {"cyclic_orders": [3, 3], "field": None}
    assert doc["provenance"]["construction"] == "th32"
    mixed = family_to_json(construct("th31", p=3, i=0, j=1))["group"]
    assert mixed == {"cyclic_orders": [6], "field": {"p": 3, "d": 2, "modulus": [1, 0, 1]}}


def test_dumps_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"format": "other"},
        {"format": FAMILY_FORMAT},
        {"format": FAMILY_FORMAT, "group": {"cyclic_orders": [4]}, "blocks": [], "claimed": {}, "provenance": {}},
        {"format": FAMILY_FORMAT, "group": {"cyclic_orders": ["x"]}},
    ],
)
def test_bad_family_documents(doc):
    with pytest.raises(FormatError):
        family_from_json(doc)


def test_unreadable_family(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    with pytest.raises(FormatError):
        read_family(bad)
    with pytest.raises(FormatError):
        read_family(tmp_path / "missing.json")


def test_incidence_round_trip():
    d = develop(construct("th33", l=1))
    text = incidence_grid(d)
    assert text.splitlines()[0] == "8 8 4 4"
    back = read_incidence_grid(text)
    assert (back.incidence == d.incidence).all()


def test_nonconstant_header():
    d = Design.from_blocks([[0, 1], [0, 1, 2]])
    assert incidence_grid(d).splitlines()[0] == "3 2 - -"


@pytest.mark.parametrize(
    "text",
    ["", "2 2 1\n1 0\n0 1\n", "2 2 1 1\n1 0\n", "2 2 1 1\n1 2\n0 1\n", "2 2 2 1\n1 0\n0 1\n", "2 2 a 1\n1 0\n0 1\n"],
)
def test_bad_grids(text):
    with pytest.raises(FormatError):
        read_incidence_grid(text)


def test_fidelity_json_is_plain():
    rec = fidelity_to_json(pgds_verdict(construct("th33", l=1)))
    assert json.loads(dumps(rec)) == rec
