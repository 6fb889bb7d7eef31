import json
from importlib import resources

import jsonschema
import pytest

import oracles as O
from lpdofactor.cli import main, run_command

SCHEMA = json.loads(resources.files("lpdofactor").joinpath("result_schema.json").read_text())


def _doc(argv):
    code, doc, text = run_command(argv)
    return code, doc, text


def test_compose_blumberg_landau():
    code, _, text = _doc(["compose", *(f"({t})" for t in O.BL_THREE_FACTORS)])
    assert code == 0
    assert text == O.BL_PRINTED


def test_obstacle_second_order():
    code, doc, text = _doc(["obstacle", "--type", "(X)(Y)", O.LAPLACE_OPERATOR])
    assert code == 2
    assert doc["obstacle"]["text"] == "-a*b + c - a_x"
    assert doc["obstacle_order"] == 0
    assert "order: 0" in text
    jsonschema.validate(doc, SCHEMA)


def test_codim():
    code, doc, text = _doc(["codim", "-n", "2", "-d", "3", "--degrees", "1,1,1"])
    assert (code, text, doc["codimension"]) == (0, "3", 3)


def test_counts():
    code, doc, _ = _doc(["counts", "--type", "(X)(Y)(X+Y)", "-t", "2"])
    assert (code, doc["equations"], doc["variables"]) == (0, 3, 3)


def test_symbol_and_gauge():
    assert _doc(["symbol", O.BL_OPERATOR])[2] == "X^3 + x*X^2*Y"
    assert _doc(["gauge", "--g", "x", "Dx"])[2] == "Dx + 1/x"


def test_factor_complete_and_schema():
    code, doc, _ = _doc(["factor", "--declare", "a(x,y)", "--type", "(X)(Y)", "Dx*Dy + a*Dx + Dy + a + a_x"])
    assert code == 0
    assert doc["status"] == "factored"
    assert doc["obstacle_order"] == "-inf"
    assert [f["text"] for f in doc["factors"]] == ["Dx + 1", "Dy + a"]
    assert doc["factors"][1]["terms"] == [{"index": [0, 1], "coeff": "1"}, {"index": [0, 0], "coeff": "a"}]
    jsonschema.validate(doc, SCHEMA)


def test_factor_with_seed_file(tmp_path):
    seed = tmp_path / "seed.txt"
    seed.write_text("# family member truncated to order 2\nDx + 1 + 1/(x+f1)\nDx^2 + x*Dx*Dy + (1 - 1/(x+f1))*Dx + (x + 1 - x/(x+f1))*Dy\n")
    code, doc, _ = _doc(
        ["factor", "--declare", "f1(y)", "--type", O.BL_FAMILY_TYPE, "--seed", str(seed), O.BL_OPERATOR]
    )
    assert code == 0, doc
    assert doc["warnings"] == []
    jsonschema.validate(doc, SCHEMA)


def test_operator_from_file(tmp_path):
    f = tmp_path / "op.txt"
    f.write_text(O.BL_OPERATOR + "\n")
    assert _doc(["symbol", f"@{f}"])[2] == "X^3 + x*X^2*Y"


@pytest.mark.parametrize(
    "argv,code",
    [
        (["symbol", "Dz"], 3),
        (["symbol", "--declare", "a(x)", "Dx + q"], 3),
        (["factor", "--type", "(X)(X)(Y)", "Dx^2*Dy"], 4),
        (["factor", "--type", "(X)(Y)", "Dx^2"], 3),
        (["gauge", "--g", "0", "Dx"], 3),
        (["factor", "--type", "(X)(Y)", "@/nonexistent/file"], 3),
    ],
)
def test_error_exit_codes(argv, code):
    got, doc, _ = _doc(argv)
    assert got == code
    assert doc["status"] == "error"
    jsonschema.validate(doc, SCHEMA)


def test_json_is_byte_deterministic(capsys):
    argv = ["obstacle", "--json", "--type", "(X)(Y)(X+Y)", "Dx^2*Dy + Dx*Dy^2 + " + O.ORDER3_LOWER]
    assert main(argv) == 2
    first = capsys.readouterr().out
    assert main(argv) == 2
    assert capsys.readouterr().out == first
    jsonschema.validate(json.loads(first), SCHEMA)


def test_timing_only_when_requested():
    _, doc, _ = _doc(["codim", "--timing", "-n", "2", "-d", "2", "--degrees", "1,1"])
    assert doc["timing"]["seconds"] >= 0
    assert "timing" not in _doc(["codim", "-n", "2", "-d", "2", "--degrees", "1,1"])[1]


def test_emitted_operators_reparse():
    from lpdofactor import Session, parse_operator

    _, doc, _ = _doc(["factor", "--type", "(X)(Y)(X+Y)", "Dx^2*Dy + Dx*Dy^2 + " + O.ORDER3_LOWER])
    s = Session(2, auto_declare=True)
    for item in doc["factors"] + [doc["obstacle"]]:
        L = parse_operator(item["text"], s)
        assert str(L) == item["text"]
