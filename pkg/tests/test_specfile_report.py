import json

import pytest
from hypothesis import given, strategies as st

from conftest import SPECS
from npcert.report import Report, normalize, parse, serialize, table
from npcert.specfile import SpecError, load_corpus, load_spec, parse_spec


def test_all_bundled_specs_load():
    specs = load_corpus(SPECS)
    assert len(specs) == 6
    for spec in specs:
        ctx = spec.context()
        assert ctx.B2 > 0


def test_spec_round_trip():
    spec = load_spec(SPECS / "ex5_3_n2_b4_m5.json")
    again = parse_spec(json.dumps(spec.to_dict()))
    assert again.to_dict() == spec.to_dict()


def _doc(**over):
    doc = {"base": {"kind": "hirzebruch", "e": 1}, "cover": {"degree": 2, "branch_class": [3, 8]}, "B": [1, 4]}
    doc.update(over)
    return doc


def test_degree_one_rejected():
    with pytest.raises(SpecError, match="cover.degree"):
        parse_spec(json.dumps(_doc(cover={"degree": 1, "branch_class": [3, 8]}), indent=2))


def test_unknown_key_rejected_with_line():
    text = json.dumps(_doc(colour="red"), indent=2)
    with pytest.raises(SpecError, match="Additional properties"):
        parse_spec(text, "x.json")


def test_wrong_type_names_field_and_line():
    text = json.dumps(_doc(B=[1, "4"]), indent=2)
    with pytest.raises(SpecError) as err:
        parse_spec(text, "x.json")
    assert "field B[1]" in str(err.value)
    assert str(err.value).startswith("x.json:")


def test_rank_mismatch_rejected():
    with pytest.raises(SpecError, match="2 coordinate"):
        parse_spec(json.dumps(_doc(B=[1])))
    with pytest.raises(SpecError, match="coordinate"):
        parse_spec(json.dumps({"base": {"kind": "plane"}, "cover": {"degree": 2, "branch_class": [5]}, "B": [1, 0]}))


def test_invalid_json_reports_line():
    with pytest.raises(SpecError, match=r"x.json:3"):
        parse_spec('{\n "base": {"kind": "plane"},\n "cover": oops\n}', "x.json")


def test_plane_with_e_rejected():
    with pytest.raises(SpecError):
        parse_spec(json.dumps(_doc(base={"kind": "plane", "e": 1})))


def test_booleans_are_not_integers():
    with pytest.raises(SpecError):
        parse_spec(json.dumps(_doc(cover={"degree": True, "branch_class": [3, 8]})))


def test_non_ample_branch_rejected():
    with pytest.raises(SpecError, match="ample"):
        parse_spec(json.dumps(_doc(cover={"degree": 2, "branch_class": [1, 1]})))


def test_huge_integers_accepted():
    spec = parse_spec(json.dumps(_doc(B=[1, 10**30])))
    assert spec.B[1] == 10**30


def test_missing_file():
    with pytest.raises(SpecError, match="cannot read"):
        load_spec(SPECS / "nope.json")


# -- reports -----------------------------------------------------------------

leaf = st.one_of(st.none(), st.booleans(), st.integers(-10**30, 10**30), st.text(max_size=8))
trees = st.recursive(
    leaf,
    lambda kids: st.one_of(st.lists(kids, max_size=4), st.dictionaries(st.text(max_size=5), kids, max_size=4)),
    max_leaves=20,
)


@given(st.dictionaries(st.text(max_size=5), trees, max_size=5))
def test_machine_round_trip(doc):
    text = serialize(doc)
    assert parse(text) == normalize(doc)
    assert serialize(parse(text)) == text


def test_numbers_become_strings():
    assert parse(serialize({"x": 10**40})) == {"x": str(10**40)}


def test_table_alignment():
    lines = table(["a", "long header"], [["xxxx", 1], ["y", 22]])
    assert lines[0].startswith("a     long header")
    assert lines[1].split() == ["----", "-----------"]


def test_report_text():
    rep = Report("describe", {"k": 1})
    rep.add_table("t", ["h"], [["v"]])
    assert parse(rep.machine_text()) == {"command": "describe", "exit_code": "0", "result": {"k": "1"}}
    assert rep.human_text().splitlines()[0] == "t"
