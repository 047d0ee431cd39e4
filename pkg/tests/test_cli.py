"""Exit codes and byte-exact output of the command-line front end."""

from __future__ import annotations

import contextlib
import io
import json
import subprocess
import sys

import pytest

from openstrings import cli
from openstrings.ainfty import (
    MapDatum,
    TensorEntry,
    assemble_differential,
    datum_to_json,
    homotopic_map,
    identity_continuation,
)
from openstrings.novikov import format_series

from conftest import CHAIN_UNITS, ONE, S, conjugate_datum, make_chain_datum

PASS, FAIL, BAD_INPUT = 0, 1, 2


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = cli.main(list(argv))
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def _entries_json(entries):
    return [{"inputs": list(e.inputs), "output": e.output,
             "coeff": format_series(e.coeff)} for e in entries]


@pytest.fixture(scope="module")
def chain_json():
    return datum_to_json(make_chain_datum())


@pytest.fixture(scope="module")
def conj_json():
    datum = make_chain_datum()
    units = {k: S(v) for k, v in CHAIN_UNITS.items()}
    return datum_to_json(conjugate_datum(datum, units))


@pytest.fixture(scope="module")
def diag_entries():
    datum = make_chain_datum()
    return [{"inputs": [g.id], "output": g.id, "coeff": CHAIN_UNITS[g.id]}
            for g in datum.generators]


@pytest.fixture(scope="module")
def ident_entries():
    datum = make_chain_datum()
    return [{"inputs": [g.id], "output": g.id, "coeff": "t^0"}
            for g in datum.generators]


MORSE_JSON = {
    "n": 2,
    "points": [
        {"id": "p", "index": 2, "value": 3},
        {"id": "q", "index": 1, "value": 1},
        {"id": "r", "index": 1, "value": 2},
        {"id": "s", "index": 0, "value": 0},
    ],
    "flows": [
        {"from": "p", "to": "q", "count": 1},
        {"from": "p", "to": "r", "count": -1},
        {"from": "q", "to": "s", "count": 1},
        {"from": "r", "to": "s", "count": 1},
    ],
}

LINE_PATH_JSON = {
    "n": 1, "reference": [["-1"]],
    "pieces": [{"t0": "-1", "t1": "1", "A": [[["0", "1"]]]}],
}


# ---------------------------------------------------------------------------
# polytope


def test_polytope_f_vector_default():
    assert run("polytope", "assoc", "--l", "5") == (PASS, "[14,21,9]\n", "")
    assert run("polytope", "assoc", "--l", "5", "--text") == (
        PASS, "14 21 9\n", "")
    assert run("polytope", "multi", "--l", "3", "--f-vector") == (
        PASS, "[6,6]\n", "")


def test_polytope_faces_listing():
    code, out, err = run("polytope", "assoc", "--l", "4", "--faces")
    assert (code, err) == (PASS, "")
    assert out == (
        '[{"dim":0,"face":"(((00)0)0)"},{"dim":0,"face":"((0(00))0)"},'
        '{"dim":0,"face":"((00)(00))"},{"dim":0,"face":"(0((00)0))"},'
        '{"dim":0,"face":"(0(0(00)))"},{"dim":1,"face":"((00)00)"},'
        '{"dim":1,"face":"((000)0)"},{"dim":1,"face":"(0(00)0)"},'
        '{"dim":1,"face":"(0(000))"},{"dim":1,"face":"(00(00))"},'
        '{"dim":2,"face":"(0000)"}]\n')


def test_polytope_boundary_check():
    assert run("polytope", "assoc", "--l", "5", "--boundary-check",
               "--text") == (PASS, "dd_zero=true faces=45 "
                             "boundary_entries=93\n", "")
    code, out, _ = run("polytope", "assoc", "--l", "5", "--boundary-check")
    assert code == PASS
    assert out == ('{"boundary_entries":93,"dd_zero":true,"faces":45,'
                   '"failures":[],"l":5,"polytope":"K"}\n')


def test_polytope_facet_signs():
    code, out, _ = run("polytope", "multi", "--l", "3", "--facet-signs")
    assert code == PASS
    rows = json.loads(out)
    assert [(r["kind"], r["sign"]) for r in rows] == [
        ("multi_lower", 1), ("multi_lower", -1), ("multi_end", -1),
        ("multi_end", 1), ("multi_upper", 1), ("multi_upper", -1)]
    _, text, _ = run("polytope", "multi", "--l", "3", "--facet-signs",
                     "--text")
    assert text.splitlines()[0] == "f(0u(00)) multi_lower(2, 2, 2) +1"


def test_polytope_flag_conflicts():
    code, out, err = run("polytope", "assoc", "--l", "5", "--faces",
                         "--f-vector")
    assert code == BAD_INPUT and not out
    assert "not allowed with argument" in err
    code, _, err = run("polytope", "assoc")
    assert code == BAD_INPUT and "--l" in err
    code, _, err = run("polytope", "nope", "--l", "3")
    assert code == BAD_INPUT and "invalid choice" in err


# ---------------------------------------------------------------------------
# novikov


def test_novikov_eval():
    assert run("novikov", "eval", "3t^1/2 + 7 - t^2") == (
        PASS, '{"series":"7t^0 + 3t^1/2 - t^2","valuation":"0"}\n', "")
    assert run("novikov", "eval", "3t^1/2 + 7 - t^2", "--text") == (
        PASS, "7t^0 + 3t^1/2 - t^2\n", "")
    assert run("novikov", "eval", "t^1 - t^1") == (
        PASS, '{"series":"0","valuation":null}\n', "")


def test_novikov_ring_and_cutoff():
    assert run("novikov", "eval", "1/2t^0 - t^3", "--ring", "Q") == (
        PASS, '{"series":"1/2t^0 - t^3","valuation":"0"}\n', "")
    assert run("novikov", "eval", "t^2 + 1", "--cutoff", "2") == (
        PASS, '{"series":"t^0","valuation":"0"}\n', "")
    code, out, err = run("novikov", "eval", "1/2t^0")
    assert code == BAD_INPUT and not out
    assert err == ("parse error: coefficient 1/2 is not an integer (ring Z)"
                   " (line 1, column 1)\n")


def test_novikov_parse_error_location():
    code, out, err = run("novikov", "eval", "2 + t")
    assert code == BAD_INPUT and not out
    assert err == "parse error: malformed term 't' (line 1, column 5)\n"


# ---------------------------------------------------------------------------
# maslov


def test_maslov_line_fixture(tmp_path):
    path = write(tmp_path, "line.json", LINE_PATH_JSON)
    assert run("maslov", "index", path) == (PASS, (
        '{"crossings":[{"interval":["-1","-1"],"kernel_dimension":1,'
        '"location":"start","parts":[["1/2",1]]}],"n":1,"rs_index":"-1/2",'
        '"string_index":1}\n'), "")
    assert run("maslov", "index", path, "--text") == (
        PASS, "rs_index=-1/2 string_index=1 crossings=1\n", "")


def test_maslov_non_transverse_reports_null(tmp_path):
    path = write(tmp_path, "closed.json", {
        "n": 1, "reference": [["-1"]],
        "pieces": [{"t0": "-1", "t1": "1", "A": [[["0", "1"]]]},
                   {"t0": "1", "t1": "3", "A": [[["2", "-1"]]]}],
    })
    code, out, _ = run("maslov", "index", path)
    assert code == PASS
    obj = json.loads(out)
    assert obj["string_index"] is None and obj["rs_index"] == "0"
    _, text, _ = run("maslov", "index", path, "--text")
    assert text == "rs_index=0 string_index=none crossings=2\n"


def test_maslov_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 1,\n  "oops"')
    code, out, err = run("maslov", "index", str(path))
    assert code == BAD_INPUT and not out
    assert err == "parse error at line 2, column 9: Expecting ':' delimiter\n"


def test_maslov_missing_file(tmp_path):
    code, out, err = run("maslov", "index", str(tmp_path / "missing.json"))
    assert code == BAD_INPUT and not out
    assert err.startswith("cannot read input:")


# ---------------------------------------------------------------------------
# ainfty


def test_ainfty_check(tmp_path, chain_json):
    path = write(tmp_path, "chain.json", chain_json)
    assert run("ainfty", "check", path) == (
        PASS, '{"nonzero_entries":[],"square_zero":true,"words":59}\n', "")
    assert run("ainfty", "check", path, "--text") == (
        PASS, "square_zero=true words=59\n", "")


def test_ainfty_check_detects_broken_datum(tmp_path, chain_json):
    broken = json.loads(json.dumps(chain_json))
    for e in broken["tensors"]:
        if e["output"] == "g03" and e["inputs"][0] == "g02":
            e["coeff"] = "-3t^2"
    path = write(tmp_path, "broken.json", broken)
    code, out, _ = run("ainfty", "check", path)
    assert code == FAIL
    assert json.loads(out)["square_zero"] is False


def test_ainfty_map(tmp_path, chain_json, conj_json, diag_entries):
    path = write(tmp_path, "map.json", {
        "source": conj_json, "target": chain_json, "map": diag_entries})
    assert run("ainfty", "map", path) == (
        PASS, '{"chain_map":true,"defects":[],"dual_expansion":true}\n', "")
    assert run("ainfty", "map", path, "--text") == (
        PASS, "chain_map=true dual_expansion=true\n", "")
    bad = [dict(e) for e in diag_entries]
    for e in bad:
        if e["output"] == "g12":
            e["coeff"] = "-" + e["coeff"]
    badpath = write(tmp_path, "mapbad.json", {
        "source": conj_json, "target": chain_json, "map": bad})
    code, out, _ = run("ainfty", "map", badpath)
    assert code == FAIL
    assert json.loads(out)["chain_map"] is False


def test_ainfty_homotopy(tmp_path, chain_json, ident_entries):
    datum = make_chain_datum()
    c = assemble_differential(datum)
    k = MapDatum(k=(TensorEntry(("ap",), "a", ONE),))
    h1 = homotopic_map(c, c, identity_continuation(c), k)
    path = write(tmp_path, "homo.json", {
        "source": chain_json, "target": chain_json,
        "h0": ident_entries, "h1": _entries_json(h1.h),
        "k": [{"inputs": ["ap"], "output": "a", "coeff": "t^0"}]})
    assert run("ainfty", "homotopy", path) == (
        PASS, '{"defects":[],"homotopy":true}\n', "")
    badpath = write(tmp_path, "homobad.json", {
        "source": chain_json, "target": chain_json,
        "h0": ident_entries, "h1": ident_entries,
        "k": [{"inputs": ["ap"], "output": "a", "coeff": "t^0"}]})
    code, out, _ = run("ainfty", "homotopy", badpath)
    assert code == FAIL
    assert json.loads(out)["homotopy"] is False


def test_ainfty_compose(tmp_path, chain_json, conj_json, diag_entries,
                        ident_entries):
    path = write(tmp_path, "comp.json", {
        "c0": chain_json, "c1": conj_json, "c2": conj_json,
        "h01": diag_entries + [
            {"inputs": ["g01", "g12"], "output": "z02", "coeff": "t^4"}],
        "h12": ident_entries + [
            {"inputs": ["g12", "g23"], "output": "z13", "coeff": "-2t^1"}]})
    assert run("ainfty", "compose", path) == (
        PASS, '{"composition":true,"defects":[],"entries":16}\n', "")
    assert run("ainfty", "compose", path, "--text") == (
        PASS, "composition=true entries=16\n", "")


AUG_JSON = {
    "datum": {
        "labels": 2, "modulus": 2, "ring": "Z",
        "generators": [
            {"id": "x", "i": 0, "j": 1, "mu": 0},
            {"id": "y", "i": 0, "j": 1, "mu": 1},
            {"id": "z", "i": 0, "j": 1, "mu": 1},
            {"id": "p", "i": 1, "j": 2, "mu": 1},
        ],
        "tensors": [
            {"inputs": ["x"], "output": "y", "coeff": "t^0"},
            {"inputs": ["x"], "output": "z", "coeff": "t^1"},
        ],
    },
    "augmentation": {"values": [
        {"id": "y", "value": "-t^1"}, {"id": "z", "value": "t^0"},
        {"id": "p", "value": "t^0 + t^1"},
    ]},
}


def test_ainfty_augment(tmp_path):
    path = write(tmp_path, "aug.json", AUG_JSON)
    assert run("ainfty", "augment", path) == (PASS, (
        '{"condition_1":true,"condition_2":true,"ok":true,'
        '"supported_words":5}\n'), "")
    broken = json.loads(json.dumps(AUG_JSON))
    broken["augmentation"]["values"][0]["value"] = "t^0"
    badpath = write(tmp_path, "augbad.json", broken)
    code, out, _ = run("ainfty", "augment", badpath)
    assert code == FAIL
    assert json.loads(out)["condition_1"] is False


# ---------------------------------------------------------------------------
# floer


def test_floer_hf_morse_input(tmp_path):
    path = write(tmp_path, "morse.json", MORSE_JSON)
    assert run("floer", "hf", path, "--rational") == (PASS, (
        '{"degrees":[],"modulus":2,"ranks":{"0":0,"1":0},"ring":"Q",'
        '"total_rank":0}\n'), "")
    assert run("floer", "hf", path) == (PASS, (
        '{"degrees":[],"modulus":2,"ranks":{"0":0,"1":0},"ring":"Z",'
        '"total_rank":0}\n'), "")
    assert run("floer", "hf", path, "--rational", "--text") == (
        PASS, "total_rank=0 ranks=0:0,1:0\n", "")


def test_floer_hf_datum_input(tmp_path, chain_json):
    path = write(tmp_path, "chain.json", chain_json)
    assert run("floer", "hf", path, "--rational") == (PASS, (
        '{"degrees":[0,1,2,3,4,5],"modulus":0,'
        '"ranks":{"0":2,"1":5,"2":5,"3":5,"4":3,"5":1},"ring":"Q",'
        '"total_rank":21}\n'), "")
    assert run("floer", "hf", path, "--rational", "--text") == (
        PASS, "total_rank=21 ranks=0:2,1:5,2:5,3:5,4:3,5:1\n", "")
    # the 2t^(1/2) strand blocks integral elimination
    code, out, err = run("floer", "hf", path)
    assert code == BAD_INPUT and not out
    assert "non-invertible leading coefficient" in err


def test_floer_hf_rejects_junk(tmp_path):
    path = write(tmp_path, "junk.json", {"what": 1})
    code, _, err = run("floer", "hf", path)
    assert code == BAD_INPUT and err.startswith("invalid input:")


def test_floer_sphere():
    assert run("floer", "sphere", "--n", "3") == (PASS, (
        '{"degrees":[0,3],"n":3,"products":['
        '{"a":"max","b":"max","coefficient":"t^0","out":"max"},'
        '{"a":"max","b":"min","coefficient":"t^0","out":"min"},'
        '{"a":"min","b":"max","coefficient":"t^0","out":"min"}],'
        '"total_rank":2}\n'), "")
    assert run("floer", "sphere", "--n", "3", "--text") == (PASS, (
        "rank=2 degrees=0,3\nmax*max=max\nmax*min=min\nmin*max=min\n"
        "min*min=0\n"), "")
    code, out, _ = run("floer", "sphere", "--n", "2")
    assert code == PASS and json.loads(out)["degrees"] == [0, 2]
    code, _, err = run("floer", "sphere", "--n", "1")
    assert code == BAD_INPUT and "need n >= 2" in err


# ---------------------------------------------------------------------------
# sft


def test_sft_bound():
    assert run("sft", "bound", "--n", "3", "--g", "0", "--v", "1",
               "--m", "1") == (PASS, (
                   '{"bound":-2,"g":0,"m":[1],"majorant":-2,"n":3,'
                   '"satisfies":true,"v":1}\n'), "")
    assert run("sft", "bound", "--n", "3", "--g", "0", "--v", "1",
               "--m", "1", "--text") == (PASS, "bound=-2 satisfies=true\n",
                                         "")
    assert run("sft", "bound", "--n", "4", "--g", "2", "--v", "2",
               "--m", "3,1") == (PASS, (
                   '{"bound":-22,"g":2,"m":[3,1],"majorant":-10,"n":4,'
                   '"satisfies":true,"v":2}\n'), "")


def test_sft_bad_queries():
    code, _, err = run("sft", "bound", "--n", "3", "--g", "0", "--v", "1",
                       "--m", "x")
    assert code == BAD_INPUT and err.startswith("invalid input:")
    code, _, err = run("sft", "bound", "--n", "2", "--g", "1", "--v", "1",
                       "--m", "1")
    assert code == BAD_INPUT and "genus must vanish" in err


# ---------------------------------------------------------------------------
# conductor


def test_conductor_exact(tmp_path):
    path = write(tmp_path, "cond.json", {
        "h": {"source": ["a", "b"], "target": ["x", "y", "z"],
              "positions": [0, 1], "images": [0, 1]},
        "k": {"source": ["x", "y", "z"], "target": ["u", "v"],
              "positions": [1, 2], "images": [0, 1]}})
    assert run("conductor", "exact", path) == (PASS, (
        '{"cokernel":["a","b"],"exact":true,"image":["x","y"],'
        '"overlap":1}\n'), "")
    assert run("conductor", "exact", path, "--text") == (
        PASS, "exact=true overlap=1\n", "")


def test_conductor_overlap_two_fails(tmp_path):
    path = write(tmp_path, "cond2.json", {
        "h": {"source": ["a", "b"], "target": ["x", "y", "z"],
              "positions": [0, 1], "images": [0, 1]},
        "k": {"source": ["x", "y", "z"], "target": ["u", "v"],
              "positions": [0, 1], "images": [0, 1]}})
    assert run("conductor", "exact", path) == (FAIL, (
        '{"cokernel":["a","b"],"exact":false,"image":["x","y"],'
        '"overlap":2}\n'), "")


def test_conductor_mismatch(tmp_path):
    path = write(tmp_path, "condbad.json", {
        "h": {"source": ["a"], "target": ["x"],
              "positions": [0], "images": [0]},
        "k": {"source": ["DIFFERENT"], "target": ["u"],
              "positions": [0], "images": [0]}})
    code, _, err = run("conductor", "exact", path)
    assert code == BAD_INPUT and "composable pair" in err


# ---------------------------------------------------------------------------
# framework behavior


def test_top_level_usage_errors():
    code, _, err = run("nope")
    assert code == BAD_INPUT and "invalid choice" in err
    code, _, err = run()
    assert code == BAD_INPUT and "required: command" in err


def test_repeat_invocations_are_byte_identical(tmp_path, chain_json):
    path = write(tmp_path, "chain.json", chain_json)
    for argv in (("polytope", "assoc", "--l", "6"),
                 ("floer", "sphere", "--n", "4"),
                 ("ainfty", "check", path),
                 ("sft", "bound", "--n", "5", "--g", "3", "--v", "4",
                  "--m", "2,1,3,1")):
        assert run(*argv) == run(*argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "openstrings.cli", "polytope", "assoc",
         "--l", "5"], capture_output=True, text=True)
    assert proc.returncode == PASS
    assert proc.stdout == "[14,21,9]\n"
