from __future__ import annotations

import pytest

from gtx.corpus import SHIPPED, shipped_text
from gtx.errors import SpecError
from gtx.spec_format import object_dot, parse_spec, print_spec, tokenize


def test_minimal_document():
    doc = parse_spec("labels { a:1 }")
    assert doc.alphabet == {"a": 1} and not doc.rules and not doc.states


def test_replica_file(triad):
    assert len(triad.rules) == 4
    assert {k: triad.alphabet[k] for k in ("α", "β", "γ")} == {"α": 2, "β": 3, "γ": 1}


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_files_round_trip_byte_identically(name):
    text = shipped_text(name)
    doc = parse_spec(text)
    assert print_spec(doc) == text
    assert parse_spec(print_spec(doc)) == doc


def test_comments_and_whitespace_are_ignored():
    doc = parse_spec("# header\nlabels{a:1}graph G{nodes v;edge e=a(v);} # trailing\n")
    assert list(doc.graphs["G"].edges) == ["e"]


# text -> (offending token, message fragment); the expected column is found by string search
BAD = {
    "labels { a:1 } graph G { nodes v; edge e = b(v); }": ("b(v)", "unknown label"),
    "labels { a:1 } graph G { nodes v; edge e = a(v v); }": ("a(v v)", "arity mismatch"),
    "labels { a:1 } state S { graph G; interface { nodes; } }": ("G;", "unresolved graph"),
    "labels { a:1 } graph G { nodes v w; } graph G { nodes v; }": ("G { nodes v; }", "duplicate graph"),
    "labels { a:x }": ("x", "expected an arity"),
    "labels { a:1 } graph G { nodes v; edge e = a(q); }": ("q", "undeclared node"),
    "labels { a:1 } graph G { nodes v;": (";", "unexpected end of input"),
    "labels { a:1 } bogus": ("bogus", "section keyword"),
}


@pytest.mark.parametrize("text", sorted(BAD))
def test_diagnostics_carry_positions(text):
    token, fragment = BAD[text]
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert fragment in info.value.message
    assert (info.value.line, info.value.col) == (1, text.rindex(token) + 1)


def test_diagnostics_count_lines():
    with pytest.raises(SpecError) as info:
        parse_spec("labels { a:1 }\n\ngraph G {\n  nodes v;\n  edge e = z(v);\n}")
    assert (info.value.line, info.value.col) == (5, 12)


def test_rule_interface_must_be_included_in_left():
    text = """labels { a:1 }
rule r {
  left { nodes v; }
  interface { nodes v; edge e = a(v); }
  right { nodes v; edge e = a(v); }
}"""
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert "interface is not included in left" in info.value.message
    assert info.value.line == 2


def test_state_interface_must_be_in_graph():
    text = "labels { a:1 } graph G { nodes v; } state S { graph G; interface { nodes w; } }"
    with pytest.raises(SpecError, match="not in graph"):
        parse_spec(text)


def test_tokenizer_positions():
    toks = tokenize("labels {\n  α:2\n}")
    assert [(t.text, t.line, t.col) for t in toks][2:5] == [("α", 2, 3), (":", 2, 4), ("2", 2, 5)]


def test_dot_export(triad):
    dot = object_dot(triad, "alpha_beta")
    assert 'shape=circle' in dot and 'shape=box' in dot
    assert '"v" [shape=circle, label="v", peripheries=2]' in dot
    assert '"a" -> "u" [label="0"]' in dot and '"a" -> "v" [label="1"]' in dot
    rule = object_dot(triad, "α/β")
    assert rule.count("subgraph") == 3
    with pytest.raises(SpecError):
        object_dot(triad, "nope")
