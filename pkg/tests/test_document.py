import json
import math

import pytest

from latcal import from_covers
from latcal.document import (
    dumps_result,
    parse_poset_document,
    poset_from_text,
    read_poset,
    result_document,
    serialize_poset,
    to_dot,
)
from latcal.errors import ParseError
from latcal.number_theory import divisor_lattice


def test_parse_with_comments():
    text = "# header comment\nelements: a b c  # trailing\n\na < b\nb < c # chain\n"
    assert parse_poset_document(text) == (["a", "b", "c"], [("a", "b"), ("b", "c")])


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 0),
        ("# only a comment\n", 0),
        ("a < b\n", 1),
        ("elements:\n", 1),
        ("elements: a a\n", 1),
        ("elements: a b\na < c\n", 2),
        ("elements: a b\n\na b\n", 3),
        ("elements: a b\na < b < a\n", 2),
        ("elements: a b\nelements: c\n", 2),
        ("elements: a b\na b < a\n", 2),
    ],
)
def test_parse_errors_carry_lines(text, line):
    with pytest.raises(ParseError) as info:
        parse_poset_document(text)
    assert info.value.line == line


def test_cycle_is_parse_error():
    with pytest.raises(ParseError, match="cycle"):
        poset_from_text("elements: a b c\na < b\nb < c\nc < a\n")


def test_round_trip(tmp_path, rng):
    import oracles

    for _ in range(25):
        labels, pairs = oracles.random_dag(rng)
        p = from_covers(labels, pairs)
        text = serialize_poset(p)
        q = poset_from_text(text)
        assert q.elements == p.elements
        assert (q.leq_matrix == p.leq_matrix).all()
        assert serialize_poset(q) == text
    path = tmp_path / "d.poset"
    path.write_text(serialize_poset(divisor_lattice(12)))
    assert read_poset(path).covers == divisor_lattice(12).covers


def test_serialize_is_natural_order():
    p = from_covers(["x10", "x2", "x1"], [("x1", "x2"), ("x2", "x10")])
    assert serialize_poset(p) == "elements: x1 x2 x10\nx1 < x2\nx2 < x10\n"


def test_dot_shape(bridge):
    dot = to_dot(bridge)
    assert dot.startswith('digraph "hasse" {')
    assert "rankdir=BT;" in dot
    assert '{ rank=same; "L"; "R"; }' in dot
    assert '"L" -> "S" [arrowhead=none];' in dot
    assert dot.count("->") == 2


def test_dumps_is_deterministic():
    doc = {"b": 1.0 / 3.0, "a": [math.log(12), None, True], "c": {"z": 1, "y": "s"}}
    text = dumps_result(doc)
    assert text == dumps_result(json.loads(text))
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert json.loads(text)["b"] == 1.0 / 3.0
    assert "0.33333333333333331" in text


def test_result_document_keys():
    doc = result_document("check", {"path": "x"})
    assert doc["version"] == "latcal-result/1"
    assert set(doc) >= {"command", "input", "reports"}
